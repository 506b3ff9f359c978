"""Exact linear algebra and text formats."""
