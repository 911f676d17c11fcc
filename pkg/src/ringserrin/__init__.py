"""Torsion functions on ring domains: model solutions, spectral solver, comparison checks,
linearized spectra and bifurcating branches with constant boundary gradient."""

__version__ = "0.1.0"
