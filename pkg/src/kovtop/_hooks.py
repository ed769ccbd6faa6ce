"""Fault-injection hooks for mutation testing.

The check suites must be able to prove that a single flipped sign in the
invariant-manifold equations or in the reconstruction radicals does not
slip through.  A hook name activates exactly one such deliberate defect
while the context manager is open; production code paths never set one.
"""
from __future__ import annotations

from contextlib import contextmanager

MUTATIONS = (
    "f2_term_sign",      # F2 with '+' between the two bracketed terms
    "f2_inner_sign",     # F2 with w^2 - x instead of w^2 + x in both terms
    "recon_phi_product",  # sqrt(Phi1*Phi2) with the product sign flipped
    "recon_cross_ab",    # sqrt((s1^2-a^2)(s2^2-b^2)) flipped
    "recon_w3_first",    # sqrt((s2^2-b^2)*Phi1) flipped
    "recon_w3_second",   # sqrt((s1^2-a^2)*Phi2) flipped
)

_active: str | None = None


def active() -> str | None:
    return _active


@contextmanager
def inject(name: str):
    """Activate one named defect for the duration of the block."""
    global _active
    if name not in MUTATIONS:
        raise ValueError(f"unknown mutation {name!r}; choose from {MUTATIONS}")
    if _active is not None:
        raise RuntimeError(f"mutation {_active!r} already active")
    _active = name
    try:
        yield
    finally:
        _active = None
