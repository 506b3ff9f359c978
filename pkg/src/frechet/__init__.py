"""
Frechet Polytope - exact toolkit for classes of multivariate Bernoulli distributions.

Represents the class F_d(p) of d-dimensional Bernoulli pmfs with common
margin p, maps pmfs to polynomials of an ideal of points, certifies and
generates extremal points, and builds convex-order minimal sums.
"""

__version__ = "0.1.0"
__app_name__ = "Frechet Polytope"
