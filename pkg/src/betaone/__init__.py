"""Pfaffian correlation kernels for orthogonal-symmetry random matrix
ensembles: Gaussian-type weights on the real line and the real Ginibre
ensemble, at even and odd matrix size."""

__version__ = "0.1.0"
