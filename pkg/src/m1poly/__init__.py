"""-1 orthogonal polynomials, osp(1|2) coupling coefficients and identity checks."""

__version__ = "0.1.0"
