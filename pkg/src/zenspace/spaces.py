"""Weights, Zen spaces and their reproducing kernels.

``w(t) = 2 pi * integral of exp(-2 r t) dnu(r)`` is closed form for the
measure class in :mod:`zenspace.measure`::

    w(t) = 2 pi [ sum_j a_j exp(-2 r_j t) + sum_i c_i Gamma(alpha_i + 1) / (2t)**(alpha_i + 1) ]

and the kernel of ``A^2_nu`` is ``k_z(zeta) = int_0^inf exp(-t (zeta + conj z)) / w(t) dt``.
"""
from dataclasses import dataclass
import math
import warnings

import numpy as np
from scipy import integrate, special

from .errors import ConvergenceError
from .measure import (BERGMAN_COEFF, HARDY_MASS, BoundaryMeasure, Delta2Report,
                      bergman_measure, hardy_measure, validate_measure)

KERNEL_RTOL = 1e-10


class Weight:
    """The weight ``w`` of ``L^2_w(0, inf)`` induced by a boundary measure."""

    def __init__(self, measure):
        self.measure = measure
        self._atoms = np.array(measure.atoms, dtype=float).reshape(-1, 2)
        self._pieces = np.array(measure.pieces, dtype=float).reshape(-1, 2)
        self._gamma = special.gamma(self._pieces[:, 1] + 1) if len(self._pieces) else np.zeros(0)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for r, a in self._atoms:
            out = out + a * np.exp(-2.0 * r * t)
        for (c, alpha), g in zip(self._pieces, self._gamma):
            out = out + c * g / (2.0 * t) ** (alpha + 1)
        out = 2.0 * math.pi * out
        return float(out) if out.ndim == 0 else out

    def limit_ratio(self, kappa, at):
        """Limit of ``w(kappa t) / w(t)`` as ``t -> 0`` (``at="zero"``) or ``t -> inf``."""
        if at == "zero":
            if len(self._pieces):
                return kappa ** (-(self._pieces[:, 1].max() + 1))
            return 1.0
        if self.measure.origin_mass > 0:
            return 1.0
        return kappa ** (-(self._pieces[:, 1].min() + 1))

    def reciprocal_tail(self, u, sigma):
        """Upper bound for ``int_u^inf exp(-s) / w(s / sigma) ds``.

        Each nonnegative term of ``w`` bounds ``w`` from below, hence bounds
        ``1/w``; the smallest resulting tail is returned.
        """
        bounds = []
        a0 = self.measure.origin_mass
        if a0 > 0:
            bounds.append(math.exp(-u) / (2 * math.pi * a0))
        for (c, alpha), g in zip(self._pieces, self._gamma):
            beta = alpha + 1
            upper_gamma = special.gammaincc(beta + 1, u) * special.gamma(beta + 1)
            bounds.append((2.0 / sigma) ** beta * upper_gamma / (2 * math.pi * c * g))
        return min(bounds) if bounds else math.inf


def _tag(measure):
    if not measure.pieces and len(measure.atoms) == 1:
        r, m = measure.atoms[0]
        if r == 0.0 and math.isclose(m, HARDY_MASS, rel_tol=1e-12):
            return ("hardy", -1.0)
    if not measure.atoms and len(measure.pieces) == 1:
        c, alpha = measure.pieces[0]
        if math.isclose(c, BERGMAN_COEFF, rel_tol=1e-12):
            return ("bergman", alpha)
    return None


@dataclass(frozen=True)
class ZenSpace:
    """A validated measure with its weight, doubling ratio and closed-form tag.

    ``closed_form`` is ``None``, ``("hardy", -1.0)`` or ``("bergman", alpha)``.
    """

    measure: BoundaryMeasure
    weight: Weight
    delta2: Delta2Report
    closed_form: tuple = None

    @classmethod
    def from_measure(cls, measure):
        measure, report = validate_measure(measure)
        return cls(measure, Weight(measure), report, _tag(measure))

    @classmethod
    def hardy(cls):
        return cls.from_measure(hardy_measure())

    @classmethod
    def bergman(cls, alpha):
        return cls.from_measure(bergman_measure(alpha))

    @property
    def R(self):
        return self.delta2.ratio

    @property
    def bergman_alpha(self):
        """Bergman exponent when the space is Hardy (-1) or Bergman, else ``None``."""
        return self.closed_form[1] if self.closed_form else None

    def describe(self):
        if self.closed_form is None:
            return "zen"
        kind, alpha = self.closed_form
        return "hardy" if kind == "hardy" else f"bergman:{alpha:g}"


def weight_eval(space, t):
    if not t > 0:
        raise ValueError(f"weight is defined for t > 0, got {t}")
    return space.weight(t)


def _check_point(z, name):
    z = complex(z)
    if not z.real > 0:
        raise ValueError(f"{name} = {z} is not in the open right half-plane")
    return z


def closed_form_kernel(alpha, z, zeta):
    """Bergman (``alpha > -1``) or Hardy (``alpha == -1``) kernel ``k_z(zeta)``."""
    s = np.conj(z) + zeta
    if alpha == -1:
        return 1.0 / s
    return 2.0 ** alpha * (1.0 + alpha) / s ** (2.0 + alpha)


def laplace_reciprocal_weight(weight, s, rtol=KERNEL_RTOL, levels=14, limit=200):
    """``int_0^inf exp(-t s) / w(t) dt`` for ``Re s > 0``.

    Substituting ``t = u / Re s`` leaves ``exp(-u) / w(u / Re s)`` times an
    oscillating factor ``exp(-i u Im s / Re s)``; each part is integrated on a
    mesh graded towards 0 (where ``1/w`` may behave like ``t**(alpha+1)``)
    with QUADPACK's Fourier-weighted rule, and the part beyond the cut-off is
    bounded analytically.
    """
    sigma, omega = s.real, s.imag
    freq = omega / sigma

    def g(u):
        return math.exp(-u) / weight(u / sigma)

    upper = 36.0
    while True:
        body = integrate.quad(g, 0.0, upper, limit=limit)[0]
        tail = weight.reciprocal_tail(upper, sigma)
        if tail <= 1e-16 * body or upper > 1e4:
            break
        upper *= 1.5
    if not tail <= 1e-16 * body:
        raise ConvergenceError("kernel integrand tail does not decay", body / sigma, tail / sigma)

    edges = np.concatenate(([0.0], upper * 2.0 ** -np.arange(levels, -1, -1)))
    re = im = 0.0
    err = tail
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in zip(edges[:-1], edges[1:]):
            if freq == 0.0:
                v, e = integrate.quad(g, a, b, epsabs=0.0, epsrel=rtol * 1e-2, limit=limit)
                re += v
                err += e
            else:
                vc, ec = integrate.quad(g, a, b, weight="cos", wvar=freq, epsabs=0.0,
                                        epsrel=rtol * 1e-2, limit=limit)
                vs, es = integrate.quad(g, a, b, weight="sin", wvar=freq, epsabs=0.0,
                                        epsrel=rtol * 1e-2, limit=limit)
                re += vc
                im -= vs
                err += ec + es
    value = complex(re, im) / sigma
    err /= sigma
    if err > rtol * abs(value):
        raise ConvergenceError(
            f"kernel quadrature missed rtol={rtol:g} (error {err:.3g} on |value| {abs(value):.3g})",
            value, err)
    return value


def kernel_eval(space, z, zeta, method="auto", rtol=KERNEL_RTOL):
    """Reproducing kernel ``k_z(zeta)`` of ``A^2_nu``.

    ``method="auto"`` uses the Hardy/Bergman closed form when the space has
    one, otherwise quadrature; ``"quadrature"`` forces the integral.
    """
    z = _check_point(z, "z")
    zeta = _check_point(zeta, "zeta")
    if method not in ("auto", "closed", "quadrature"):
        raise ValueError(f"unknown kernel method {method!r}")
    if method != "quadrature" and space.closed_form is not None:
        return complex(closed_form_kernel(space.bergman_alpha, z, zeta))
    if method == "closed":
        raise ValueError("space has no closed-form kernel")
    return laplace_reciprocal_weight(space.weight, zeta + z.conjugate(), rtol=rtol)


def kernel_norm_sq(space, z, method="auto", rtol=KERNEL_RTOL):
    """``||k_z||^2 = k_z(z)``."""
    return kernel_eval(space, z, z, method=method, rtol=rtol).real
