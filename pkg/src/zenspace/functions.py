"""Analytic functions on the right half-plane used as test inputs.

An :class:`AnalyticFunction` is a callable ``F`` with optional metadata:
its Laplace preimage ``density`` (so that ``F = L density``) and a list of
``features`` -- ``(center, width)`` pairs on the imaginary axis where
``|F|`` is concentrated, used to split vertical-line quadratures.
"""
import math

import numpy as np
from scipy import integrate, special

from .errors import SpecFormatError
from .spaces import closed_form_kernel, kernel_eval


class AnalyticFunction:

    def __init__(self, fn, density=None, features=(), label="F", vectorized=False):
        self.fn = fn
        self.density = density
        self.features = tuple(features)
        self.label = label
        self.vectorized = vectorized

    def __call__(self, z):
        return complex(self.fn(complex(z)))

    def many(self, zs):
        """Evaluate on an array of points."""
        zs = np.asarray(zs, dtype=complex)
        if self.vectorized:
            return np.broadcast_to(np.asarray(self.fn(zs), dtype=complex), zs.shape)
        return np.array([self(z) for z in zs.ravel()], dtype=complex).reshape(zs.shape)

    def __repr__(self):
        return f"AnalyticFunction({self.label})"


def zero():
    return AnalyticFunction(lambda z: 0j * z, density=lambda t: 0.0, label="0", vectorized=True)


def rational(num, den=(1.0,)):
    """``polyval(num, z) / polyval(den, z)``; coefficients highest degree first."""
    num = np.asarray(num, dtype=complex)
    den = np.asarray(den, dtype=complex)
    if not np.any(den):
        raise ValueError("zero denominator polynomial")
    poles = np.roots(den) if len(den) > 1 else np.array([])
    if np.any(poles.real > 0):
        raise ValueError(f"rational function has poles in the right half-plane: {poles[poles.real > 0]}")
    features = [(p.imag, abs(p.real)) for p in poles]

    def fn(z):
        return np.polyval(num, z) / np.polyval(den, z)

    return AnalyticFunction(fn, features=features, label=f"rational({list(num)}/{list(den)})",
                            vectorized=True)


def power_exp(rate, power=0.0):
    """Laplace transform of ``t**power * exp(-rate t)``: ``Gamma(power+1) / (z + rate)**(power+1)``."""
    if not rate > 0:
        raise ValueError("rate must be positive")
    if not power > -1:
        raise ValueError("power must exceed -1")
    g = special.gamma(power + 1)

    def fn(z):
        return g / (z + rate) ** (power + 1)

    def density(t):
        return t ** power * math.exp(-rate * t)

    return AnalyticFunction(fn, density=density, features=[(0.0, rate)],
                            label=f"L[t^{power:g} e^(-{rate:g}t)]", vectorized=True)


def sampled_density(t, f):
    """Laplace transform of the piecewise-linear interpolant of samples ``(t, f)``.

    The density is taken to vanish outside ``[t[0], t[-1]]``.
    """
    t = np.asarray(t, dtype=float)
    f = np.asarray(f, dtype=complex)
    if t.ndim != 1 or t.shape != f.shape or len(t) < 2 or np.any(np.diff(t) <= 0) or t[0] < 0:
        raise ValueError("samples need increasing nonnegative abscissae and matching values")

    def density(s):
        if s < t[0] or s > t[-1]:
            return 0.0
        return complex(np.interp(s, t, f.real) + 1j * np.interp(s, t, f.imag))

    def fn(z):
        re = integrate.quad(lambda s: (density(s) * np.exp(-s * z)).real, t[0], t[-1],
                            points=t[1:-1][:50], limit=500)[0]
        im = integrate.quad(lambda s: (density(s) * np.exp(-s * z)).imag, t[0], t[-1],
                            points=t[1:-1][:50], limit=500)[0]
        return complex(re, im)

    return AnalyticFunction(fn, density=density, features=[(0.0, 1.0 / max(t[-1], 1e-300))],
                            label=f"L[samples n={len(t)}]")


def kernel_function(space, w, method="auto"):
    """The reproducing kernel ``k_w`` of ``space`` as a function of ``zeta``.

    Its Laplace preimage is ``exp(-t conj(w)) / w(t)``.
    """
    w = complex(w)
    weight = space.weight
    if space.closed_form is not None and method == "auto":
        k = bergman_kernel(space.bergman_alpha, w)
        k.density = lambda t: np.exp(-t * w.conjugate()) / weight(t)
        return k

    def fn(zeta):
        return kernel_eval(space, w, zeta, method=method)

    def density(t):
        return np.exp(-t * w.conjugate()) / weight(t)

    return AnalyticFunction(fn, density=density, features=[(w.imag, w.real)], label=f"k_{w}")


def bergman_kernel(alpha, w):
    """Closed-form ``B^2_alpha`` kernel at ``w`` (``alpha = -1``: Hardy)."""
    w = complex(w)
    return AnalyticFunction(lambda zeta: closed_form_kernel(alpha, w, zeta),
                            features=[(w.imag, w.real)], label=f"k^B{alpha:g}_{w}",
                            vectorized=True)


def compose(F, phi, h=None):
    """``h * (F o phi)``; ``h`` defaults to 1.

    ``phi`` and ``h`` must accept arrays (symbols and multipliers do).
    """
    if h is None:
        def fn(z):
            return F.many(phi(z))
    else:
        def fn(z):
            return h(z) * F.many(phi(z))
    label = f"{'h*' if h is not None else ''}{F.label}∘{getattr(phi, 'label', 'phi')}"
    return AnalyticFunction(fn, label=label, vectorized=True)


def from_dict(doc, space=None):
    """Parse ``{"kind": "rational" | "laplace_of" | "kernel" | "zero", ...}``."""
    if not isinstance(doc, dict) or "kind" not in doc:
        raise SpecFormatError("function spec must be an object with a 'kind' field")
    kind = doc["kind"]
    try:
        if kind == "rational":
            return rational(doc["num"], doc.get("den", [1.0]))
        if kind == "laplace_of":
            form = doc.get("form", "exp")
            if form == "exp":
                return power_exp(float(doc["rate"]), 0.0)
            if form == "texp":
                return power_exp(float(doc["rate"]), 1.0)
            if form == "power_exp":
                return power_exp(float(doc["rate"]), float(doc["power"]))
            if form == "samples":
                return sampled_density(doc["t"], doc["f"])
            raise SpecFormatError(f"unknown laplace_of form {form!r}")
        if kind == "kernel":
            if space is None:
                raise SpecFormatError("kernel function spec needs a space")
            at = doc["at"]
            return kernel_function(space, complex(at["re"], at.get("im", 0.0)))
        if kind == "zero":
            return zero()
    except (KeyError, TypeError) as exc:
        raise SpecFormatError(f"function spec: missing or mistyped field {exc}") from None
    except ValueError as exc:
        raise SpecFormatError(f"function spec: {exc}") from None
    raise SpecFormatError(f"unknown function kind {kind!r}")
