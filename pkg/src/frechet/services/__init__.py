"""Polytope, ideal, search and convex-order services."""
