"""Symbolic curvature from a metric file, used as an independent oracle."""
from __future__ import annotations

from functools import lru_cache

import sympy as sp

from cliffgr import metricfile


@lru_cache(maxsize=None)
def curvature(name: str):
    """(coords, g, Riemann R^a_{bcd}, Ricci R_bd, Kretschmann) for a shipped fixture."""
    spec = metricfile.builtin(name)
    coords = sp.symbols(spec.coords, real=True)
    local = {c: s for c, s in zip(spec.coords, coords)}
    local.update({k: sp.Float(v) if v != int(v) else sp.Integer(int(v)) for k, v in spec.params.items()})
    g = sp.zeros(4, 4)
    for (i, j), e in spec.upper.items():
        val = sp.sympify(e.source.replace("^", "**"), locals=local)
        g[i, j] = g[j, i] = val
    ginv = sp.simplify(g.inv())
    n = 4
    Gam = [[[sp.simplify(sum(ginv[a, d] * (sp.diff(g[d, b], coords[c]) + sp.diff(g[d, c], coords[b])
                                          - sp.diff(g[b, c], coords[d])) for d in range(n)) / 2)
             for c in range(n)] for b in range(n)] for a in range(n)]
    R = [[[[sp.simplify(sp.diff(Gam[a][b][d], coords[c]) - sp.diff(Gam[a][b][c], coords[d])
                        + sum(Gam[a][c][e] * Gam[e][b][d] - Gam[a][d][e] * Gam[e][b][c] for e in range(n)))
            for d in range(n)] for c in range(n)] for b in range(n)] for a in range(n)]
    ric = sp.Matrix(n, n, lambda b, d: sp.simplify(sum(R[a][b][a][d] for a in range(n))))
    low = [[[[sum(g[a, e] * R[e][b][c][d] for e in range(n)) for d in range(n)] for c in range(n)]
            for b in range(n)] for a in range(n)]
    up = [[[[sum(ginv[b, f] * ginv[c, h] * ginv[d, k] * R[a][f][h][k]
                 for f in range(n) for h in range(n) for k in range(n))
             for d in range(n)] for c in range(n)] for b in range(n)] for a in range(n)]
    K = sp.simplify(sum(low[a][b][c][d] * up[a][b][c][d]
                        for a in range(n) for b in range(n) for c in range(n) for d in range(n)))
    return coords, g, ric, K


def kretschmann_fn(name: str):
    coords, _, _, K = curvature(name)
    return sp.lambdify(coords, K, "math")


def ricci_fn(name: str):
    coords, _, ric, _ = curvature(name)
    return sp.lambdify(coords, ric, "numpy")
