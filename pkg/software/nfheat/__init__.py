"""Near-field radiative heat transfer between plates, spheres and cylinders.

Plate-plate spectra and the small-distance coefficient lambda_omega (`nfheat.planar`),
proximity and gradient quadratures over curved profiles (`nfheat.geometry`), closed-form
expansions (`nfheat.asymptotics`), least-squares extraction of beta (`nfheat.fitting`),
matching to perturbative kernels (`nfheat.perturbative`) and thermal aggregation
(`nfheat.spectral`).
"""

from nfheat.version import __version__
