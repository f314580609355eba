"""Exact simultaneous orthogonalization of symmetric bilinear forms."""
