"""Boundedness, norms and essential norms of (weighted) composition operators.

The angular derivative at infinity is ``lambda = sup Re z / Re phi(z)``;
``C_phi`` is bounded on ``A^2_nu`` iff it is finite, and then

    lambda * inf_t w(t)/w(lambda t) <= ||C_phi||^2 <= lambda * sup_t w(t/lambda)/w(t).

On ``B^2_alpha`` the norm is exactly ``lambda**((2 + alpha)/2)``.
"""
from dataclasses import dataclass, field
import math

import numpy as np
from scipy import optimize

from . import functions as fz
from .errors import ValidationError
from .extremize import extremum, log_grid
from .norms import inner_product_direct, zen_norm_direct
from .spaces import ZenSpace, kernel_norm_sq, kernel_eval
from .symbols import Multiplier

CAP = 1e6
EDGE = 0.01  # angular margin from the imaginary axis
ESS_PATH = tuple(np.geomspace(1.0, 1e6, 40))
WEAK_NULL_PATHS = {
    "real": tuple(np.geomspace(1.0, 1e8, 40).astype(complex)),
    "vertical": tuple(0.5 + 1j * np.geomspace(1.0, 1e8, 40)),
}


def symbol_eval(phi, z):
    """``phi(z)`` with the half-plane check; raises ``ValidationError`` on violation."""
    if not complex(z).real > 0:
        raise ValueError(f"z = {z} is not in the right half-plane")
    return phi(complex(z))


@dataclass
class PlaneSup:
    """Result of a supremum over the right half-plane."""

    value: float  # math.inf when the cap was exceeded
    witness: complex
    finite: bool
    cap: float
    samples: int
    cross_check: float = None  # closed-form value when the symbol knows one

    def to_dict(self):
        return {"value": _num(self.value), "witness": _cnum(self.witness), "finite": self.finite,
                "cap": self.cap, "samples": self.samples,
                "cross_check": _num(self.cross_check) if self.cross_check is not None else None}


def _num(x):
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def _cnum(z):
    return {"re": z.real, "im": z.imag}


def plane_sup(objective, radii=(1e-4, 1e6), n_radii=121, n_angles=41, cap=CAP,
              march_out=1e18, march_in=1e-12):
    """``sup`` of ``objective(z)`` over the right half-plane on a log-polar grid.

    The grid maximum is polished with Nelder-Mead in ``(log r, arg z)``.  If
    it sits on the outermost (innermost) ring the search marches radially
    outward (inward) by decades until the value stabilises or exceeds
    ``cap``; exceeding the cap reports an infinite supremum with the
    offending point as witness.
    """
    rs = np.geomspace(radii[0], radii[1], n_radii)
    th = np.linspace(-(math.pi / 2 - EDGE), math.pi / 2 - EDGE, n_angles)
    zz = rs[:, None] * np.exp(1j * th[None, :])
    vals = np.asarray(objective(zz.ravel()), dtype=float).reshape(zz.shape)
    samples = vals.size
    i, j = np.unravel_index(np.nanargmax(vals), vals.shape)
    best, arg = float(vals[i, j]), complex(zz[i, j])
    if best > cap:
        return PlaneSup(math.inf, arg, False, cap, samples)

    def neg(p):
        s, t = p
        return -float(objective(np.array([math.exp(s) * complex(math.cos(t), math.sin(t))]))[0])

    lim = math.pi / 2 - EDGE
    res = optimize.minimize(neg, [math.log(rs[i]), th[j]], method="Nelder-Mead",
                            bounds=[(math.log(rs[0]), math.log(rs[-1])), (-lim, lim)],
                            options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 400})
    samples += res.nfev
    if np.isfinite(res.fun) and -res.fun > best:
        best, arg = -res.fun, math.exp(res.x[0]) * complex(math.cos(res.x[1]), math.sin(res.x[1]))

    for ring, factor, stop in ((n_radii - 1, 10.0, march_out), (0, 0.1, march_in)):
        if i != ring:
            continue
        r, angle = rs[i], th[j]
        prev = vals[i, j]
        while (r * factor <= stop) if factor > 1 else (r * factor >= stop):
            r *= factor
            z = r * complex(math.cos(angle), math.sin(angle))
            v = float(objective(np.array([z]))[0])
            samples += 1
            if v > best:
                best, arg = v, z
            if best > cap:
                return PlaneSup(math.inf, arg, False, cap, samples)
            if v <= prev * (1 + 1e-9):
                break
            prev = v
    return PlaneSup(best, arg, True, cap, samples)


def angular_derivative(phi, cap=CAP, **grid):
    """``lambda = sup Re z / Re phi(z)``, ``math.inf`` when the cap is exceeded."""
    def ratio(z):
        return z.real / phi(z).real

    out = plane_sup(ratio, cap=cap, **grid)
    hint = phi.angular_hint()
    if hint is not None:
        out.cross_check = hint
    return out


def is_bounded_zen(phi, space):
    lam = angular_derivative(phi)
    return lam.finite, lam


@dataclass
class NormBounds:
    lower: float
    upper: float
    lam: float
    exact: float = None
    lower_at: float = None  # t attaining the infimum (0 or inf for limits)
    upper_at: float = None


def _t_grid(space, n=512):
    return log_grid(1.0 / space.measure.scale, n)


def norm_bounds_zen(phi, space, lam=None):
    """Operator-norm bounds from the two weight quotients; exact norm on Hardy/Bergman."""
    if lam is None:
        res = angular_derivative(phi)
        if not res.finite:
            raise ValidationError(f"{phi.label} has no finite angular derivative; C_phi is unbounded",
                                  witness=res.witness)
        lam = res.value
    w = space.weight
    grid = _t_grid(space)
    lo = extremum(lambda t: w(t) / w(lam * t), grid,
                  1.0 / w.limit_ratio(lam, "zero"), 1.0 / w.limit_ratio(lam, "inf"), kind="inf")
    hi = extremum(lambda t: w(t / lam) / w(t), grid,
                  w.limit_ratio(1.0 / lam, "zero"), w.limit_ratio(1.0 / lam, "inf"), kind="sup")
    exact = None
    if space.closed_form is not None:
        exact = lam ** ((2.0 + space.bergman_alpha) / 2.0)
    return NormBounds(math.sqrt(lam * lo.value), math.sqrt(lam * hi.value), lam, exact,
                      lo.argument, hi.argument)


def scaling_norm(a, space):
    """``||C_{psi_a}|| = sqrt(sup_t w(a t) / (a w(t)))``."""
    if not a > 0:
        raise ValueError("scaling factor must be positive")
    w = space.weight
    ext = extremum(lambda t: w(a * t) / (a * w(t)), _t_grid(space),
                   w.limit_ratio(a, "zero") / a, w.limit_ratio(a, "inf") / a, kind="sup")
    return math.sqrt(ext.value)


def weighted_bergman_criterion(h, phi, alpha, cap=CAP):
    """``sup |h(z)| (Re z / Re phi(z))**(alpha + 2)``; bounded on ``B^2_alpha`` iff finite."""
    if alpha < -1:
        raise ValueError("alpha must be >= -1")

    def objective(z):
        return np.abs(h(z)) * (z.real / phi(z).real) ** (alpha + 2.0)

    return plane_sup(objective, cap=cap)


def adjoint_identity_check(h, phi, alpha, z, f, rtol=1e-9):
    """Compare ``<W f, k_z>`` (quadrature on ``B^2_alpha``) with ``h(z) f(phi(z))``.

    Returns a dict with both sides, the residual, the adjoint-side value
    ``h(z) <f, k_phi(z)>`` (also by quadrature) and the pass verdict
    ``residual < 1e-6 (1 + |f(phi(z))|)``.
    """
    z = complex(z)
    space = ZenSpace.bergman(alpha)
    Wf = fz.compose(f, phi, h)
    Wf.features = tuple(f.features) + ((phi.preimage_hint(z).imag, abs(phi.preimage_hint(z))),)
    kz = fz.bergman_kernel(alpha, z)
    lhs, err = inner_product_direct(space, Wf, kz, rtol=rtol)
    pz = phi(z)
    adj, _ = inner_product_direct(space, f, fz.bergman_kernel(alpha, pz), rtol=rtol)
    expected = h(z) * f(pz)
    residual = abs(lhs - expected)
    return {"inner_product": lhs, "expected": expected, "adjoint_side": h(z) * adj,
            "residual": residual, "quad_error": err,
            "passed": residual < 1e-6 * (1 + abs(f(pz)))}


def min_alpha_membership(p, R):
    """Smallest Bergman exponent whose kernels are certified members of ``A^p_nu``."""
    if p < 1 or R < 1:
        raise ValueError("need p >= 1 and R >= 1")
    return max(-1.0, (1.0 + math.log2(R)) / p - 2.0)


@dataclass
class LambdaEstimate:
    value: float  # grid supremum; a lower estimate of Lambda(alpha)
    witness: complex
    exceeded_cap: bool
    quotients: list = field(default_factory=list)  # (z, quotient)
    alpha: float = 0.0
    cap: float = CAP


DEFAULT_LAMBDA_GRID = tuple(r * np.exp(1j * t) for r in (0.1, 1.0, 10.0, 100.0)
                            for t in (-math.pi / 3, 0.0, math.pi / 3))


def lambda_alpha_estimate(h, phi, alpha, space, z_grid=DEFAULT_LAMBDA_GRID, cap=CAP,
                          eps_sweep=(1e-8,), rtol=1e-6):
    """Grid sup of ``||h (k^B_alpha_z o phi)|| / ||k^B_alpha_z||`` in ``A^2_nu``."""
    threshold = min_alpha_membership(2, space.R)
    if not alpha > threshold and not (alpha == -1 and threshold == -1):
        raise ValueError(f"alpha = {alpha} does not exceed the membership threshold {threshold:g}")
    if h is None:
        h = Multiplier.constant(1.0)
    rows = []
    best, arg = -math.inf, None
    for z in z_grid:
        z = complex(z)
        k = fz.bergman_kernel(alpha, z)
        num_f = fz.compose(k, phi, h)
        pre = phi.preimage_hint(z)
        num_f.features = ((pre.imag, max(abs(pre.real), 1e-12)), (z.imag, z.real))
        num = zen_norm_direct(space, num_f, eps_sweep, rtol).norm
        den = zen_norm_direct(space, k, eps_sweep, rtol).norm
        q = num / den
        rows.append((z, q))
        if q > best:
            best, arg = q, z
    return LambdaEstimate(best, arg, best > cap, rows, alpha, cap)


def kernel_quotient_lower_bound(phi, space, z_path=ESS_PATH):
    """``max ||k_phi(z)|| / ||k_z||`` over the path; a lower bound for ``||C_phi||``."""
    qs = kernel_quotients(phi, space, z_path)
    i = int(np.argmax(qs))
    return float(qs[i]), complex(z_path[i])


def kernel_quotients(phi, space, z_path):
    out = []
    for z in z_path:
        z = complex(z)
        out.append(math.sqrt(kernel_norm_sq(space, phi(z)) / kernel_norm_sq(space, z)))
    return np.array(out)


def ess_norm_lower(phi, space, z_path=ESS_PATH, tail=0.25):
    """``limsup`` estimate of ``||k_phi(z)|| / ||k_z||`` as ``|z| -> inf``: max over the path's tail."""
    qs = kernel_quotients(phi, space, z_path)
    start = min(int(len(qs) * (1 - tail)), len(qs) - 1)
    return float(qs[start:].max())


def weak_null_check(space, zeta, z_path):
    """``|k_z(zeta)| / ||k_z||`` along a path diverging to infinity."""
    zeta = complex(zeta)
    return np.array([abs(kernel_eval(space, z, zeta)) / math.sqrt(kernel_norm_sq(space, z))
                     for z in map(complex, z_path)])


@dataclass
class CompositionReport:
    lam: float
    bounded: bool
    norm_lower: float = None
    norm_upper: float = None
    exact_norm: float = None
    ess_norm_lower: float = None
    kernel_quotient: float = None
    witness: complex = None
    lam_cross_check: float = None

    def to_dict(self):
        def opt(x):
            return None if x is None else _num(x)
        return {"lambda": _num(self.lam), "bounded": self.bounded,
                "norm_lower": opt(self.norm_lower), "norm_upper": opt(self.norm_upper),
                "exact_norm": opt(self.exact_norm), "ess_norm_lower": opt(self.ess_norm_lower),
                "kernel_quotient_lower_bound": opt(self.kernel_quotient),
                "witness": None if self.witness is None else _cnum(self.witness),
                "lambda_cross_check": opt(self.lam_cross_check)}


def composition_report(phi, space):
    """Full analysis of ``C_phi`` on ``space``."""
    lam = angular_derivative(phi)
    if not lam.finite:
        return CompositionReport(math.inf, False, witness=lam.witness, lam_cross_check=lam.cross_check)
    nb = norm_bounds_zen(phi, space, lam=lam.value)
    kq, kz = kernel_quotient_lower_bound(phi, space)
    ess = ess_norm_lower(phi, space)
    return CompositionReport(lam.value, True, nb.lower, nb.upper, nb.exact, ess, kq, lam.witness,
                             lam.cross_check)
