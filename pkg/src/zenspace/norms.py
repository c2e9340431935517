"""Norms in ``A^2_nu``: through the Laplace isometry and from the definition.

The two routes are independent: :func:`norm_via_isometry` integrates
``|f|^2 w`` on ``(0, inf)``, :func:`zen_norm_direct` integrates ``|F(z + eps)|^2``
against ``nu = nu~ (x) Lebesgue`` on vertical lines and over ``Re z``.
"""
from dataclasses import dataclass, field
import math
import warnings

import numpy as np
from scipy import integrate

from .errors import ConvergenceError
from .quadrature import vquad

DIRECT_RTOL = 1e-6
DEFAULT_EPS_SWEEP = (1.0, 0.1, 0.01, 0.001)


def _dyadic_sum(fun, start, direction, rtol, max_cells=400):
    """Sum ``int fun`` over cells ``[start 2^k, start 2^(k+1)]`` marching up or down.

    Returns ``(total, abserr, converged)``; not converged means the cell
    contributions stopped shrinking, i.e. the integral diverges.
    """
    total = err = 0.0
    small_run = 0
    history = []
    lo = start
    for _ in range(max_cells):
        hi = lo * 2.0 if direction > 0 else lo / 2.0
        a, b = min(lo, hi), max(lo, hi)
        v, e = integrate.quad(fun, a, b, epsabs=0.0, epsrel=rtol * 1e-2, limit=200)
        total += v
        err += e
        history.append(abs(v))
        if abs(v) <= 1e-3 * rtol * abs(total) or (v == 0.0 and total == 0.0 and len(history) > 8):
            small_run += 1
            if small_run >= 4:
                return total, err, True
        else:
            small_run = 0
        lo = hi
        if len(history) > 40 and history[-1] >= 0.5 * history[-21] > 0:
            return total, err, False
    return total, err, False


def norm_via_isometry(space, f, rtol=1e-10):
    """``(int_0^inf |f(t)|^2 w(t) dt)^(1/2)``; ``f`` is a density or an AnalyticFunction.

    Raises ``ConvergenceError`` when the integral diverges (``f`` not in ``L^2_w``).
    """
    density = getattr(f, "density", f)
    if density is None:
        raise ValueError(f"{f!r} carries no Laplace preimage")
    weight = space.weight

    def integrand(t):
        return abs(density(t)) ** 2 * weight(t)

    scale = 1.0 / space.measure.scale
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        up, e_up, ok_up = _dyadic_sum(integrand, scale, +1, rtol)
        down, e_down, ok_down = _dyadic_sum(integrand, scale, -1, rtol)
    total = up + down
    if not (ok_up and ok_down):
        where = "0" if not ok_down else "infinity"
        raise ConvergenceError(f"int |f|^2 w diverges near {where}", total, e_up + e_down)
    return math.sqrt(total)


def _line_edges(features, x):
    """Centre, scale and theta-breakpoints for the map ``y = c + h tan(theta)``."""
    feats = list(features) or [(0.0, 1.0)]
    c = feats[0][0]
    h = float(np.median([w for _, w in feats])) + x
    h = max(h, 1e-300)
    pts = {0.0}
    for center, width in feats:
        hw = width + x
        for k in (-16.0, -4.0, -1.0, 0.0, 1.0, 4.0, 16.0):
            pts.add(math.atan((center + k * hw - c) / h))
    edges = sorted(p for p in pts if abs(p) < math.pi / 2)
    return c, h, [-math.pi / 2] + edges + [math.pi / 2]


def _line_integral(fun, x, features, rtol):
    """``int_R fun(x + iy) dy`` for a vectorized ``fun``; ``(value, abserr)``."""
    c, h, edges = _line_edges(features, x)

    def g(theta):
        cos = np.cos(theta)
        return fun(x + 1j * (c + h * np.tan(theta))) * h / cos ** 2

    return vquad(g, edges, rtol=rtol)


def _nu_integral(space, fun, eps, features, rtol):
    """``int fun(z + eps) dnu(z)`` for a vectorized (real or complex) ``fun``."""
    total = err = 0.0
    for r, mass in space.measure.atoms:
        v, e = _line_integral(fun, r + eps, features, rtol * 0.1)
        total += mass * v
        err += mass * e
    if space.measure.pieces:
        widths = [w for _, w in features] or [1.0]
        s = max(float(np.median(widths)), 1e-12)

        def line(r):
            return _line_integral(fun, r + eps, features, rtol * 0.1)[0]

        dtype = complex if np.iscomplexobj(fun(np.array([1.0 + eps]))) else float
        for coeff, alpha in space.measure.pieces:
            beta = alpha + 1.0

            # [0, s]: r = s u^(1/beta) absorbs the r^alpha factor
            def near(u):
                return np.array([line(s * ui ** (1.0 / beta)) for ui in u], dtype=dtype) * s ** beta / beta

            # [s, inf): r = s / u
            def far(u):
                r = s / u
                return np.array([line(ri) for ri in r], dtype=dtype) * r ** alpha * s / u ** 2

            v1, e1 = vquad(near, [0.0, 1e-6, 1e-3, 0.1, 0.5, 1.0], rtol=rtol)
            v2, e2 = vquad(far, [0.0, 1e-6, 1e-3, 0.1, 0.5, 1.0], rtol=rtol)
            total += coeff * (v1 + v2)
            err += coeff * (e1 + e2)
    return total, err


@dataclass
class NormEstimate:
    norm: float
    norm_sq: float
    by_eps: list = field(default_factory=list)  # (eps, norm_sq, abserr)
    monotone: bool = True  # norm_sq non-decreasing as eps shrinks
    flagged: bool = False  # quadrature error above tolerance somewhere in the sweep

    @property
    def trend(self):
        """``(value at largest eps, value at smallest eps)``."""
        return self.by_eps[0][1], self.by_eps[-1][1]


def zen_norm_direct(space, F, eps_sweep=DEFAULT_EPS_SWEEP, rtol=DIRECT_RTOL):
    """``sup_eps (int |F(z + eps)|^2 dnu(z))^(1/2)`` over a decreasing sweep of shifts."""
    sweep = sorted((float(e) for e in eps_sweep), reverse=True)
    if not sweep or sweep[-1] < 0:
        raise ValueError("eps sweep must be a nonempty list of nonnegative shifts")
    features = getattr(F, "features", ())

    def sq(z):
        return np.abs(F.many(z)) ** 2

    rows = []
    flagged = False
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for eps in sweep:
            v, e = _nu_integral(space, sq, eps, features, rtol)
            if not math.isfinite(v):
                raise ConvergenceError(f"direct norm integral is not finite at eps={eps:g}", v, e)
            rows.append((eps, float(v), float(e)))
            flagged |= e > rtol * abs(v) and e > 1e-300
    values = [v for _, v, _ in rows]
    monotone = all(b >= a * (1 - 10 * rtol) for a, b in zip(values[:-1], values[1:]))
    best = max(values)
    return NormEstimate(math.sqrt(max(best, 0.0)), best, rows, monotone, flagged)


def inner_product_direct(space, F, G, eps=0.0, rtol=1e-9):
    """``int F(z + eps) conj(G(z + eps)) dnu(z)`` by the same quadrature as the direct norm."""
    features = tuple(getattr(F, "features", ())) + tuple(getattr(G, "features", ()))

    def product(z):
        return F.many(z) * np.conj(G.many(z))

    v, e = _nu_integral(space, product, eps, features, rtol)
    return complex(v), float(e)
