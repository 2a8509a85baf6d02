"""
Numerical services of the toolkit.

This package contains one sub-package per concern:

Modules:
    lattice: torus and Z^d geometry, regions, the bulk region R_n
    greens: lattice, killed and zero-average Green's functions, identity checks
    rwalk: simple random walk simulation and Monte Carlo estimators
    sampler: exact spectral sampling of the zero-average field
    extremes: normalizing constants, point patterns, maxima
    stats: Gumbel/Poisson/Laplace verification battery
    batch: deterministic replicate runner shared by the above
"""
