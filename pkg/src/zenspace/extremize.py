"""Sup/inf of scalar functions of one positive variable.

Every decision procedure in the package reduces to an extremal quotient
over ``t > 0``: a log-spaced grid locates the extremum, a golden-section
search polishes it, and the caller supplies the limits at ``0+`` and
``+inf`` so that suprema attained only asymptotically are not missed.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy import optimize


@dataclass(frozen=True)
class Extremum:
    value: float
    argument: float  # 0.0 or inf when the extremum is an endpoint limit
    grid_size: int


def log_grid(scale=1.0, n=512, span=1e6, extra=()):
    """``n`` log-spaced points on ``[scale/span, scale*span]`` merged with ``extra``."""
    pts = np.geomspace(scale / span, scale * span, n)
    if len(extra):
        extra = np.asarray([x for x in extra if x > 0], dtype=float)
        pts = np.union1d(pts, extra)
    return pts


def _refine(f, grid, values, i, sign):
    # golden-section on log(t) inside the bracket formed by the grid neighbours
    if i == 0 or i == len(grid) - 1:
        return values[i], grid[i]
    a, b, c = np.log(grid[i - 1]), np.log(grid[i]), np.log(grid[i + 1])

    def g(s):
        return -sign * f(math.exp(s))

    try:
        res = optimize.minimize_scalar(g, bracket=(a, b, c), method="golden",
                                       options={"xtol": 1e-10})
    except ValueError:
        # flat or non-unimodal bracket: keep the grid value
        return values[i], grid[i]
    refined = -sign * res.fun
    if a <= res.x <= c and sign * refined > sign * values[i]:
        return refined, math.exp(res.x)
    return values[i], grid[i]


def extremum(f, grid, limit_at_zero=None, limit_at_inf=None, kind="sup"):
    """Supremum (``kind="sup"``) or infimum of ``f`` over ``t > 0``.

    ``f`` is evaluated on ``grid``; the best grid point is refined by a
    golden-section search and compared against the endpoint limits.  A
    limit of ``math.inf`` is allowed and wins a supremum.
    """
    sign = 1.0 if kind == "sup" else -1.0
    grid = np.asarray(grid, dtype=float)
    values = np.array([f(t) for t in grid], dtype=float)
    if np.any(np.isnan(values)):
        raise ValueError("objective returned NaN on the grid")
    i = int(np.argmax(sign * values))
    best, arg = _refine(f, grid, values, i, sign)
    for lim, where in ((limit_at_zero, 0.0), (limit_at_inf, math.inf)):
        if lim is not None and sign * lim > sign * best:
            best, arg = lim, where
    return Extremum(float(best), float(arg), len(grid))
