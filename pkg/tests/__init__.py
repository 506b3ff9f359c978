"""Tests for Frechet Polytope."""
