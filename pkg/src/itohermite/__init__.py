"""Bivariate complex Hermite-type polynomials with a singular weight: evaluation and verification."""
