"""Attractive Robin Laplacians: eigenvalues, boundary curvature, H_max bounds."""
