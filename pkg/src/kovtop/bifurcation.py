"""Separating set in the (m, l) plane and region classification.

The qualitative type of the separated motion changes exactly where a
root of Phi collides with +-a or +-b, i.e. on the discriminant set of
(a^2 - s^2)(b^2 - s^2) Phi(s).  Since Phi itself never has a double
root (its discriminant is the constant 16), the set is the eight lines

    l = +-2 m a +- 1,   l = +-2 m b +- 1,

together with the half-line {l = 0, m < 0}, which marks vanishing L
(symplectic degeneracy of the induced structure) rather than a root
collision and is carried as metadata.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .separation import SeparationConstants, admissible_intervals
from .statespace import BodyParams

__all__ = [
    "SeparatingLine",
    "SeparatingSet",
    "RegionDescriptor",
    "GridRow",
    "separating_lines",
    "classify",
    "diagram_grid",
    "ON_SET_TOL",
]

# A grid point within this vertical distance of a line counts as on-set.
ON_SET_TOL = 1e-9


@dataclass(frozen=True)
class SeparatingLine:
    """Line l = slope * m + intercept."""

    slope: float
    intercept: float
    label: str

    def distance(self, m: float, l: float) -> float:
        return abs(l - (self.slope * m + self.intercept))


@dataclass(frozen=True)
class SeparatingSet:
    lines: tuple[SeparatingLine, ...]
    half_line: str = "l = 0, m < 0"


def separating_lines(params: BodyParams) -> SeparatingSet:
    """The eight discriminant lines for the given magnitudes."""
    lines = []
    for c, tag in ((params.a, "a"), (params.b, "b")):
        for s_sign in (1.0, -1.0):
            for i_sign in (1.0, -1.0):
                slope = s_sign * 2.0 * c
                label = f"l={'+' if s_sign > 0 else '-'}2m{tag}{'+' if i_sign > 0 else '-'}1"
                lines.append(SeparatingLine(slope=slope, intercept=i_sign, label=label))
    return SeparatingSet(lines=tuple(lines))


@dataclass(frozen=True)
class RegionDescriptor:
    n_s1: int
    n_s2: int
    admissible: bool
    on_set: bool
    active_lines: tuple[str, ...]
    degenerate_s1: bool
    degenerate_s2: bool
    on_half_line: bool


def _degenerate(comps) -> bool:
    return any(hi - lo <= 1e-12 * max(1.0, abs(lo)) for lo, hi in comps)


def classify(c: SeparationConstants, params: BodyParams) -> RegionDescriptor:
    """Component counts and separating-set flags at one (m, l) point."""
    s1, s2 = admissible_intervals(c, params)
    lines = separating_lines(params).lines
    tol = ON_SET_TOL * (1.0 + abs(c.m))
    active = tuple(line.label for line in lines if line.distance(c.m, c.l) <= tol)
    on_half = abs(c.l) <= tol and c.m < 0.0
    return RegionDescriptor(
        n_s1=len(s1),
        n_s2=len(s2),
        admissible=bool(s1) and bool(s2),
        on_set=bool(active) or on_half,
        active_lines=active,
        degenerate_s1=_degenerate(s1),
        degenerate_s2=_degenerate(s2),
        on_half_line=on_half,
    )


@dataclass(frozen=True)
class GridRow:
    m: float
    l: float
    n_s1: int
    n_s2: int
    admissible: bool
    on_set: bool
    lines_active: str


def diagram_grid(
    m_range: tuple[float, float],
    l_range: tuple[float, float],
    resolution: int,
    params: BodyParams,
) -> list[GridRow]:
    """Row-major sweep of classify over a rectangular grid, m fastest.

    Doubling the resolution to 2n-1 points keeps every previously
    sampled point (classification is a pure function of (m, l)).
    Inverted ranges produce an empty sweep.  Grid points with m = 0 are
    reported with zero counts (the separated description does not
    apply there); line flags are still evaluated.
    """
    if resolution < 1:
        raise ValueError(f"resolution must be >= 1, got {resolution}")
    if m_range[0] > m_range[1] or l_range[0] > l_range[1]:
        return []
    m_vals = np.linspace(m_range[0], m_range[1], resolution)
    l_vals = np.linspace(l_range[0], l_range[1], resolution)
    lines = separating_lines(params).lines
    rows = []
    for l in l_vals:
        for m in m_vals:
            if m == 0.0:
                tol = ON_SET_TOL
                active = tuple(ln.label for ln in lines if ln.distance(m, l) <= tol)
                rows.append(GridRow(m=float(m), l=float(l), n_s1=0, n_s2=0,
                                    admissible=False, on_set=bool(active),
                                    lines_active=";".join(active)))
                continue
            d = classify(SeparationConstants(m=float(m), l=float(l)), params)
            label = ";".join(d.active_lines)
            if d.on_half_line:
                label = ";".join([*d.active_lines, "l=0,m<0"])
            rows.append(GridRow(m=float(m), l=float(l), n_s1=d.n_s1, n_s2=d.n_s2,
                                admissible=d.admissible, on_set=d.on_set,
                                lines_active=label))
    return rows
