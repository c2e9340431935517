"""Holomorphic self-maps of the right half-plane and multipliers.

Symbols evaluate elementwise on numpy arrays and check on every call that
the right half-plane is mapped into itself.  Boundary inputs
(``Re z == 0``) are allowed and only need ``Re phi(z) >= 0``; measures with
mass on the imaginary axis (Hardy) integrate there.
"""
import math

import numpy as np

from .errors import SpecFormatError, ValidationError

_BOUNDARY_SLACK = 1e-12


class Symbol:
    """Base class; subclasses implement ``_eval`` and ``angular_hint``."""

    label = "phi"

    def __call__(self, z):
        scalar = np.isscalar(z)
        z = np.asarray(z, dtype=complex)
        w = self._eval(z)
        inside = z.real > 0
        bad = (inside & ~(w.real > 0)) | (~inside & (w.real < -_BOUNDARY_SLACK * (1 + np.abs(w))))
        bad |= ~np.isfinite(w)
        if np.any(bad):
            where = complex(np.atleast_1d(z)[np.atleast_1d(bad)][0])
            raise ValidationError(f"{self.label} does not map {where} into the right half-plane",
                                  witness=where)
        return complex(w) if scalar else w

    def angular_hint(self):
        """Closed-form angular derivative at infinity when known, else ``None``."""
        return None

    def preimage_hint(self, w):
        """Rough location of ``phi^{-1}(w)``, used to place quadrature breakpoints."""
        return w

    def to_dict(self):
        raise NotImplementedError


class Nevanlinna(Symbol):
    """``a z + i b + sum_k m_k (1 + i t_k z) / ((i t_k + z)(1 + t_k^2))``."""

    def __init__(self, a, b=0.0, mu=()):
        self.a = float(a)
        self.b = float(b)
        self.mu = tuple((float(t), float(m)) for t, m in mu)
        if self.a < 0:
            raise ValidationError(f"Nevanlinna slope a = {a} must be nonnegative")
        if any(not m > 0 for _, m in self.mu):
            raise ValidationError("Nevanlinna point masses must be positive")
        if self.a == 0 and not self.mu:
            raise ValidationError(f"phi = {self.b}i is constant on the imaginary axis, not a self-map")
        self.label = f"nevanlinna(a={self.a:g}, b={self.b:g}, |mu|={len(self.mu)})"

    def _eval(self, z):
        out = self.a * z + 1j * self.b
        for t, m in self.mu:
            out = out + m * (1 + 1j * t * z) / ((1j * t + z) * (1 + t * t))
        return out

    def angular_hint(self):
        return 1.0 / self.a if self.a > 0 else math.inf

    def preimage_hint(self, w):
        return w / self.a if self.a > 0 else w

    def to_dict(self):
        return {"kind": "nevanlinna", "a": self.a, "b": self.b,
                "mu": [{"t": t, "m": m} for t, m in self.mu]}


class Scaling(Symbol):
    """``psi_a(z) = a z``."""

    def __init__(self, a):
        self.a = float(a)
        if not self.a > 0:
            raise ValidationError(f"scaling factor {a} must be positive")
        self.label = f"psi_{self.a:g}"

    def _eval(self, z):
        return self.a * z

    def angular_hint(self):
        return 1.0 / self.a

    def preimage_hint(self, w):
        return w / self.a

    def to_dict(self):
        return {"kind": "scaling", "a": self.a}


class Shift(Symbol):
    def __init__(self, c):
        self.c = complex(c)
        if self.c.real < 0:
            raise ValidationError(f"shift {c} has negative real part")
        self.label = f"z+{self.c}"

    def _eval(self, z):
        return z + self.c

    def angular_hint(self):
        return 1.0

    def preimage_hint(self, w):
        return w - 1j * self.c.imag

    def to_dict(self):
        return {"kind": "shift", "c": {"re": self.c.real, "im": self.c.imag}}


class Sqrt(Symbol):
    """Principal square root."""

    label = "sqrt"

    def _eval(self, z):
        return np.sqrt(z)

    def angular_hint(self):
        return math.inf

    def preimage_hint(self, w):
        return w * w if abs(np.angle(w)) < math.pi / 4 else w

    def to_dict(self):
        return {"kind": "sqrt"}


class Constant(Symbol):
    def __init__(self, c):
        self.c = complex(c)
        if not self.c.real > 0:
            raise ValidationError(f"constant {c} is not in the right half-plane")
        self.label = f"const({self.c})"

    def _eval(self, z):
        return np.full_like(z, self.c)

    def angular_hint(self):
        return math.inf

    def to_dict(self):
        return {"kind": "constant", "c": {"re": self.c.real, "im": self.c.imag}}


class Identity(Scaling):
    def __init__(self):
        super().__init__(1.0)
        self.label = "id"


class Composite(Symbol):
    """``of[0] o of[1] o ...``: the last map is applied first."""

    def __init__(self, of):
        self.of = tuple(of)
        if not self.of:
            raise ValidationError("empty composition")
        self.label = "∘".join(s.label for s in self.of)

    def _eval(self, z):
        for s in reversed(self.of):
            z = s(z)
        return z

    def angular_hint(self):
        hints = [s.angular_hint() for s in self.of]
        if any(h is None for h in hints):
            return None
        return math.prod(hints)

    def preimage_hint(self, w):
        for s in self.of:
            w = s.preimage_hint(w)
        return w

    def to_dict(self):
        return {"kind": "compose", "of": [s.to_dict() for s in self.of]}


class Multiplier:
    """Rational ``h = polyval(num, z) / polyval(den, z)``, coefficients highest degree first."""

    def __init__(self, num=(1.0,), den=(1.0,)):
        self.num = np.asarray(num, dtype=complex)
        self.den = np.asarray(den, dtype=complex)
        if not np.any(self.den):
            raise ValidationError("multiplier denominator is identically zero")
        roots = np.roots(self.den) if len(self.den) > 1 else np.array([])
        if np.any(roots.real >= 0):
            raise ValidationError(f"multiplier has poles in the closed right half-plane: {roots[roots.real >= 0]}")
        self.label = "h"

    @classmethod
    def constant(cls, c=1.0):
        return cls((c,), (1.0,))

    def __call__(self, z):
        out = np.polyval(self.num, np.asarray(z, dtype=complex)) / np.polyval(self.den, np.asarray(z, dtype=complex))
        return complex(out) if np.ndim(out) == 0 else out

    def to_dict(self):
        def enc(v):
            return [x.real if x.imag == 0 else {"re": x.real, "im": x.imag} for x in v]
        return {"kind": "rational", "num": enc(self.num), "den": enc(self.den)}


def _complex(doc, field):
    v = doc[field]
    if isinstance(v, dict):
        return complex(v["re"], v.get("im", 0.0))
    return complex(v)


def symbol_from_dict(doc):
    if not isinstance(doc, dict) or "kind" not in doc:
        raise SpecFormatError("symbol spec must be an object with a 'kind' field")
    kind = doc["kind"]
    try:
        if kind == "nevanlinna":
            return Nevanlinna(doc.get("a", 0.0), doc.get("b", 0.0),
                              [(m["t"], m["m"]) for m in doc.get("mu", [])])
        if kind == "scaling":
            return Scaling(doc["a"])
        if kind == "shift":
            return Shift(_complex(doc, "c"))
        if kind == "sqrt":
            return Sqrt()
        if kind == "constant":
            return Constant(_complex(doc, "c"))
        if kind == "identity":
            return Identity()
        if kind == "compose":
            return Composite([symbol_from_dict(d) for d in doc["of"]])
    except (KeyError, TypeError) as exc:
        raise SpecFormatError(f"symbol spec: missing or mistyped field {exc}") from None
    raise SpecFormatError(f"unknown symbol kind {kind!r}")


def multiplier_from_dict(doc):
    if not isinstance(doc, dict):
        raise SpecFormatError("multiplier spec must be an object")
    try:
        if doc.get("kind", "rational") == "constant":
            return Multiplier.constant(_complex(doc, "c"))

        def dec(v):
            return [complex(x["re"], x.get("im", 0.0)) if isinstance(x, dict) else complex(x) for x in v]
        return Multiplier(dec(doc["num"]), dec(doc.get("den", [1.0])))
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecFormatError(f"multiplier spec: {exc}") from None
