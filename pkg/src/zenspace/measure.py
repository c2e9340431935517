"""Boundary measures on ``[0, inf)`` and the doubling (Delta-2) ratio.

A measure is a finite set of point masses plus finitely many power-law
densities ``c * r**alpha dr``.  That class contains the Hardy measure
(a single atom of mass ``1/2pi`` at the origin) and the weighted Bergman
measures (density ``r**alpha / pi``) and keeps the transform ``w(t)``
in closed form.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from .errors import SpecFormatError, ValidationError
from .extremize import extremum, log_grid

HARDY_MASS = 1.0 / (2.0 * math.pi)
BERGMAN_COEFF = 1.0 / math.pi


@dataclass(frozen=True)
class BoundaryMeasure:
    """``atoms``: ``(location, mass)`` pairs; ``pieces``: ``(coeff, alpha)`` pairs."""

    atoms: tuple = ()
    pieces: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple((float(r), float(m)) for r, m in self.atoms))
        object.__setattr__(self, "pieces", tuple((float(c), float(a)) for c, a in self.pieces))

    @property
    def origin_mass(self):
        return sum(m for r, m in self.atoms if r == 0.0)

    @property
    def scale(self):
        """Characteristic length: geometric mean of the nonzero atom locations (1 if none)."""
        locs = [r for r, _ in self.atoms if r > 0]
        if not locs:
            return 1.0
        return float(np.exp(np.mean(np.log(locs))))

    def cdf(self, r):
        """Mass of ``[0, r)``."""
        total = sum(m for loc, m in self.atoms if loc < r)
        if r > 0:
            total += sum(c * r ** (a + 1) / (a + 1) for c, a in self.pieces)
        return total

    def scaled(self, s):
        """Same measure with every mass and coefficient multiplied by ``s``."""
        return BoundaryMeasure(
            tuple((r, s * m) for r, m in self.atoms),
            tuple((s * c, a) for c, a in self.pieces),
        )

    def to_dict(self):
        return {
            "atoms": [{"r": r, "mass": m} for r, m in self.atoms],
            "pieces": [{"coeff": c, "alpha": a} for c, a in self.pieces],
        }

    @classmethod
    def from_dict(cls, doc):
        if not isinstance(doc, dict):
            raise SpecFormatError("measure spec must be a JSON object")
        try:
            atoms = [(a["r"], a["mass"]) for a in doc.get("atoms", [])]
            pieces = [(p["coeff"], p["alpha"]) for p in doc.get("pieces", [])]
        except (KeyError, TypeError) as exc:
            raise SpecFormatError(f"measure spec: missing or mistyped field {exc}") from None
        for label, seq in (("atoms", atoms), ("pieces", pieces)):
            for i, pair in enumerate(seq):
                if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair):
                    raise SpecFormatError(f"measure spec: {label}[{i}] has a non-numeric field")
        return cls(tuple(atoms), tuple(pieces))


def hardy_measure():
    return BoundaryMeasure(atoms=((0.0, HARDY_MASS),))


def bergman_measure(alpha):
    """Density ``r**alpha / pi``; ``alpha == -1`` gives the Hardy measure."""
    if alpha == -1:
        return hardy_measure()
    return BoundaryMeasure(pieces=((BERGMAN_COEFF, alpha),))


@dataclass(frozen=True)
class Delta2Report:
    ratio: float
    satisfied: bool
    witness_r: float
    grid: dict = field(default_factory=dict)


def mass_cdf(m, r):
    """``m[0, r)`` for ``r > 0``."""
    if not r > 0:
        raise ValueError(f"radius must be positive, got {r}")
    return m.cdf(r)


def _check_syntax(m):
    if not m.atoms and not m.pieces:
        raise ValidationError("empty measure")
    locs = [r for r, _ in m.atoms]
    if len(set(locs)) != len(locs):
        raise ValidationError("atom locations must be distinct")
    for r, mass in m.atoms:
        if not (math.isfinite(r) and r >= 0):
            raise ValidationError(f"atom location {r} outside [0, inf)")
        if not (math.isfinite(mass) and mass > 0):
            raise ValidationError(f"atom mass {mass} must be positive")
    for c, a in m.pieces:
        if not (math.isfinite(c) and c > 0):
            raise ValidationError(f"power-piece coefficient {c} must be positive")
        if not (math.isfinite(a) and a > -1):
            raise ValidationError(f"power-piece exponent {a} must exceed -1")


def _breakpoints(m):
    # the ratio jumps where r or 2r crosses an atom
    pts = []
    for r, _ in m.atoms:
        if r > 0:
            for b in (r, r / 2):
                pts.extend((b, b * (1 + 1e-12), b * (1 - 1e-12)))
    return pts


def delta2_ratio(m, n=512, span=1e6):
    """``sup_r m[0,2r) / m[0,r)`` with analytic limits at ``0+`` and ``inf``."""
    _check_syntax(m)
    if m.origin_mass == 0 and not m.pieces:
        r_min = min(r for r, _ in m.atoms)
        # m[0, r) = 0 < m[0, 2r) on (r_min/2, r_min]
        return Delta2Report(math.inf, False, 0.75 * r_min, {"n": 0})

    def ratio(r):
        return m.cdf(2 * r) / m.cdf(r)

    if m.origin_mass > 0:
        at_zero = 1.0
    else:
        at_zero = 2.0 ** (min(a for _, a in m.pieces) + 1)
    at_inf = 2.0 ** (max(a for _, a in m.pieces) + 1) if m.pieces else 1.0
    grid = log_grid(m.scale, n, span, _breakpoints(m))
    ext = extremum(ratio, grid, at_zero, at_inf, kind="sup")
    return Delta2Report(ext.value, math.isfinite(ext.value), ext.argument,
                        {"n": ext.grid_size, "span": span, "scale": m.scale})


def validate_measure(m):
    """Return ``(m, report)`` when ``m`` satisfies the doubling condition.

    Raises ``ValidationError`` (with the witness radius) otherwise.
    """
    report = delta2_ratio(m)
    if not report.satisfied:
        raise ValidationError(
            f"doubling condition fails: m[0, r) = 0 < m[0, 2r) at r = {report.witness_r:g}",
            witness=report.witness_r,
        )
    return m, report
