"""Laplacian spectra of digraphs with normal Laplacian and an eigenvalue bound on separations."""

__version__ = "0.1.0"
