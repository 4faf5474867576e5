"""(q-1)/2-ovoids of the generalized quadrangle Q(4,q), q = 1 mod 4, with
exhaustive verification."""

from __future__ import annotations

from .errors import QovoidError, UnsupportedQ
from .gf import FieldCtx, field_create
from .orbits import Action, orbit_decomposition
from .ovoid import OvoidReport, OvoidSet, construct_M, find_ab, verify_m_ovoid
from .quadric import Quadric, enumerate_lines, enumerate_points

__all__ = [
    "Action",
    "FieldCtx",
    "OvoidReport",
    "OvoidSet",
    "Quadric",
    "QovoidError",
    "UnsupportedQ",
    "construct_M",
    "enumerate_lines",
    "enumerate_points",
    "field_create",
    "find_ab",
    "orbit_decomposition",
    "verify_m_ovoid",
]
__version__ = "0.1.0"
