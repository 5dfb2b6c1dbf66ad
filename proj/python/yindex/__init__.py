"""Morse index, nullity and minimality certificates for free-boundary Y-surfaces."""

import json as _json

from ._yindex import (  # noqa: F401
    InvalidArgument,
    Mesh,
    ReducedPencil,
    Surface,
    YIndexError,
    assemble_forms,
    boundary_frame,
    build_ymesh,
    canonical_surface,
    check_y_structure,
    constraint_basis,
    coordinate_field,
    dtn_index,
    evaluate_frame,
    inertia_count,
    low_spectrum,
    mesh_from_json,
    null_basis_residuals,
    reduced_pencil,
    refine,
    steklov_half_disk,
    surface_from_json,
)
from . import _yindex as _core


def compute_index(surface, h, k=10, c0=5.0):
    """Spectrum report of the reduced pencil as a dict."""
    if isinstance(surface, str):
        surface = canonical_surface(surface)
    return _json.loads(_core.compute_index(surface, h, k, c0))


def classify(eigenvalues, h, c0=5.0, tolerance=None):
    return _json.loads(_core.classify(eigenvalues, h, c0, tolerance))


def verify_surface(surface, n=64, exact=True):
    """Certificate residual report for a canonical surface."""
    if isinstance(surface, str):
        surface = canonical_surface(surface)
    return _json.loads(_core.verify_surface(surface, n, exact))


def verify_samples(grids, threshold=None):
    """Certificate residual report for sampled grids (dict or JSON text)."""
    text = grids if isinstance(grids, str) else _json.dumps(grids)
    return _json.loads(_core.verify_samples(text, threshold))


def sample_surface(surface, n_r, n_theta):
    if isinstance(surface, str):
        surface = canonical_surface(surface)
    return _json.loads(_core.sample_surface(surface, n_r, n_theta))
