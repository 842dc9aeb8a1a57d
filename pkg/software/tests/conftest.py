import sys
from pathlib import Path

import pytest

sys.path.append(str(Path(__file__).parent.parent))  # nfheat


from nfheat.materials import Constant, load_preset


@pytest.fixture
def sic():
    return load_preset("SiC")


@pytest.fixture
def sio2():
    return load_preset("SiO2")


@pytest.fixture
def vacuum():
    return Constant(1.0, name="vacuum")


@pytest.fixture
def write_file(tmp_path):
    """Write text to a file under tmp_path and return its path as a string."""

    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write
