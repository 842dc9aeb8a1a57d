from setuptools import setup

__version__ = ""
exec(open("./nfheat/version.py").read())

setup(
    name="nfheat",
    version=__version__,
    description="Near-field radiative heat transfer beyond the proximity approximation",
    long_description=open("./README.md").read(),
    long_description_content_type="text/markdown",
    license="Apache 2.0",
    packages=["nfheat"],
    package_data={"nfheat": ["data/*.json", "data/*.txt"]},
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.8",
        'tomli>=1.2; python_version < "3.11"',
    ],
    entry_points={"console_scripts": ["nfheat = nfheat.cli:main"]},
)
