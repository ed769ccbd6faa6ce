"""Separating set and admissible regions in the (m, l) plane.

Sweeps a grid of leaf constants, counts the admissible components of
each separated variable, and draws the eight separating lines together
with the half-line {l = 0, m < 0}.  Writes bifurcation_diagram.png next
to this script.
"""
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import kovtop as kt

params = kt.make_params(2.0, 1.0)

m_range, l_range, n = (-1.5, 1.5), (0.0, 7.0), 241
rows = kt.diagram_grid(m_range, l_range, n, params)
admissible = np.array([r.admissible for r in rows], dtype=float).reshape(n, n)
counts = np.array([r.n_s1 + r.n_s2 for r in rows], dtype=float).reshape(n, n)

n_adm = int(admissible.sum())
print(f"grid {n}x{n}: {n_adm} admissible points ({100 * n_adm / n**2:.1f}%)")

fig, ax = plt.subplots(figsize=(7, 6))
ax.imshow(
    np.where(admissible > 0, counts, np.nan),
    origin="lower",
    extent=[*m_range, *l_range],
    aspect="auto",
    cmap="YlGnBu",
    interpolation="nearest",
)
ms = np.linspace(*m_range, 101)
for line in kt.separating_lines(params).lines:
    ax.plot(ms, line.slope * ms + line.intercept, "k-", lw=0.7)
ax.plot([m_range[0], 0], [0, 0], "r-", lw=2.0, label="l = 0, m < 0")
ax.set_xlim(m_range)
ax.set_ylim(l_range)
ax.set_xlabel("m")
ax.set_ylabel("l")
ax.set_title(f"admissible region and separating set (a={params.a:g}, b={params.b:g})")
ax.legend(loc="upper left")

out = pathlib.Path(__file__).with_name("bifurcation_diagram.png")
fig.savefig(out, dpi=150, bbox_inches="tight")
print(f"wrote {out}")

for m, l in [(1.0, 3.5), (1.0, 2.5), (1 / 3, 1 / 3)]:
    d = kt.classify(kt.SeparationConstants(m, l), params)
    print(f"(m, l) = ({m:.3f}, {l:.3f}): n_s1={d.n_s1} n_s2={d.n_s2} "
          f"admissible={d.admissible} on_set={d.on_set} lines={list(d.active_lines)}")
