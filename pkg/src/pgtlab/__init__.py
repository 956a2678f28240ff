"""Numerical laboratory for higher-rank prime geodesic counting.

Subpackages and modules:

- chamber: geodesic classes, spectra, chamber coordinates
- counting: psi, phi, A(x), epsilon-restricted counts, theta_S, ratio reports
- dirichlet: generalized Dirichlet series, pole models, chamber integrals
- tauberian: Fejer-type kernels, smoothed tests, synthetic spectra
- numberfield: totally real cubic fields, units, regulators
- formats, experiments, cli: file formats, drivers and the command line
"""

__version__ = "0.1.0"
