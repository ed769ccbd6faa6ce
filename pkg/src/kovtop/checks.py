"""Seeded invariant suites shared by the CLI check command and tests.

Each suite draws reproducible samples, measures the worst residual of
one structural property, and compares it to a fixed threshold.  A
report is a plain dict so it serializes directly to JSON.
"""
from __future__ import annotations

import math

import numpy as np

from . import manifold, poisson, separation
from .dynamics import euler_poisson_rhs, time_derivative_identities
from .statespace import BodyParams, casimir_residuals, random_admissible_state

__all__ = ["run_check_suites"]


def _suite(worst: float, bound: float, detail: str = "") -> dict:
    return {"pass": bool(worst <= bound), "worst": float(worst), "bound": bound, "detail": detail}


def _involutivity(params, states) -> dict:
    fh, fk, fg = poisson.field_H(), poisson.field_K(), poisson.field_G(params)
    worst = 0.0
    for s in states:
        scale = max(1.0, abs(fh(s)), abs(fk(s)), abs(fg(s)))
        for f, g in ((fh, fk), (fh, fg), (fk, fg)):
            worst = max(worst, abs(poisson.lie_poisson_bracket(f, g, s)) / scale)
    return _suite(worst, 1e-8, "|{H,K}|, |{H,G}|, |{K,G}| scaled by integral size")


def _casimir_brackets(params, states) -> dict:
    zeros = np.zeros(3)
    casimirs = (
        poisson.ScalarField(lambda s: float(s.alpha @ s.alpha),
                            lambda s: np.concatenate([zeros, 2 * s.alpha, zeros]), "Ca"),
        poisson.ScalarField(lambda s: float(s.beta @ s.beta),
                            lambda s: np.concatenate([zeros, zeros, 2 * s.beta]), "Cb"),
        poisson.ScalarField(lambda s: float(s.alpha @ s.beta),
                            lambda s: np.concatenate([zeros, s.beta, s.alpha]), "Cab"),
    )
    fields = (poisson.field_H(), poisson.field_K(), poisson.field_G(params))
    worst = 0.0
    for s in states:
        for f in fields:
            for cas in casimirs:
                worst = max(worst, abs(poisson.lie_poisson_bracket(f, cas, s)))
    return _suite(worst, 1e-8, "brackets of H, K, G with the three Casimirs")


def _conserved_fml(params, states) -> dict:
    fh = poisson.field_H()
    worst = 0.0
    for s in states:
        for f in (poisson.field_F(params), poisson.field_M(params), poisson.field_L(params)):
            if f.name == "L" and poisson.integral_FML(s, params).l is None:
                continue
            gf = np.asarray(f.grad(s))
            gh = np.asarray(fh.grad(s))
            scale = max(1.0, float(np.linalg.norm(gf) * np.linalg.norm(gh)))
            worst = max(worst, abs(poisson.lie_poisson_bracket(f, fh, s)) / scale)
    return _suite(worst, 1e-8, "{F,H}, {M,H}, {L,H} scaled by gradient size")


def _chart_roundtrip(states) -> dict:
    worst = 0.0
    for s in states:
        back = manifold.chart_to_state(manifold.state_to_chart(s))
        worst = max(worst, float(np.max(np.abs(back.as_array() - s.as_array()))))
    return _suite(worst, 1e-13, "chart_to_state(state_to_chart(s)) == s")


def _bracket_ratio(params, members) -> dict:
    ratios = []
    for s in members:
        try:
            ratios.append(manifold.bracket_ratio(s, params))
        except (manifold.ChartDomainError, manifold.DegenerateLeafError):
            continue
    if not ratios:
        return _suite(math.inf, 1e-6, "no usable member states")
    arr = np.array(ratios)
    worst = max(float(arr.std()), abs(abs(float(arr.mean())) - 1.0))
    return _suite(worst, 1e-6, f"sigma = {arr.mean():+.9f} over {len(arr)} member states")


def _reconstruction_membership(params, samples) -> dict:
    worst = 0.0
    for c, p in samples:
        state = separation.reconstruct(p, c, params)
        rep = manifold.on_N(state, params)
        vals = poisson.integral_FML(state, params)
        res7 = manifold.constraint_residuals_chart(manifold.state_to_chart(state), params)
        worst = max(
            worst,
            rep.abs_f1,
            rep.abs_f2,
            max(abs(v) for v in casimir_residuals(state, params)),
            max(abs(v) for v in res7),
            abs(vals.m - c.m),
            abs(vals.l - c.l) if vals.l is not None else math.inf,
            abs(vals.h - separation.energy_on_leaf(c, params)),
        )
    return _suite(worst, 1e-9, "membership, constraints and (m, l, H) of reconstructed states")


def _relation6(params, samples) -> dict:
    worst = 0.0
    for c, p in samples:
        state = separation.reconstruct(p, c, params)
        worst = max(worst, abs(separation.relation6_residual(state, c, params)))
    return _suite(worst, 1e-8, "eliminated level-set relation at reconstructed states")


def _identities(states) -> dict:
    worst = 0.0
    for s in states:
        dh = poisson.hamiltonian_field(s).as_array()
        dr = euler_poisson_rhs(s).as_array()
        worst = max(worst, float(np.max(np.abs(dh - dr))))
        worst = max(worst, *(abs(v) for v in time_derivative_identities(s)))
    return _suite(worst, 1e-9, "bracket route vs explicit right-hand side; dK/dt skeleton")


def run_check_suites(params: BodyParams, seed: int, n_samples: int) -> dict:
    """Run every invariant suite with reproducible sampling (PCG64)."""
    report: dict = {"seed": int(seed), "n_samples": int(n_samples), "generator": "numpy PCG64"}
    if n_samples <= 0:
        report["suites"] = {}
        report["all_pass"] = True
        report["warning"] = "n_samples = 0: nothing checked"
        return report
    rng = np.random.default_rng(seed)
    states = [random_admissible_state(params, rng) for _ in range(n_samples)]
    samples = [separation.random_leaf_point(params, rng) for _ in range(max(n_samples, 50))]
    members = [separation.reconstruct(p, c, params) for c, p in samples]
    suites = {
        "involutivity": _involutivity(params, states),
        "casimir_brackets": _casimir_brackets(params, states),
        "conserved_fml": _conserved_fml(params, states),
        "chart_roundtrip": _chart_roundtrip(states),
        "bracket_ratio": _bracket_ratio(params, members),
        "reconstruction_membership": _reconstruction_membership(params, samples),
        "relation6": _relation6(params, samples),
        "identities": _identities(states),
    }
    report["suites"] = suites
    report["all_pass"] = all(s["pass"] for s in suites.values())
    return report
