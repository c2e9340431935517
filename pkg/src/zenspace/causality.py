"""Finite lower-triangular models of causal operators on ``L^2_w(0, inf)``.

A causal operator leaves every tail subspace ``L^2_w(T, inf)`` invariant;
on a uniform grid of ``(0, T]`` it becomes a lower-triangular matrix.  The
weighted norm is computed through the similarity ``W^(1/2) A W^(-1/2)``.

Also here: the root-finders for the sufficient exponent ``alpha'`` (the
Bergman domination step) and the doubling constant ``c``.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import csv
import math
import os

import numpy as np

from .errors import ConvergenceError, ValidationError
from .extremize import extremum, log_grid

SLACK = 1e-12
DENSE_MAX = 256
ALPHA_MAX = 1e3
C_MAX = 1e6


@dataclass(frozen=True)
class CausalMatrix:
    """Lower-triangular matrix; with ``band = b`` entries with ``j > i - b`` vanish."""

    a: np.ndarray
    band: int = 0

    def __post_init__(self):
        a = np.asarray(self.a)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"causal matrix must be square, got shape {a.shape}")
        if self.band < 0:
            raise ValueError("band must be >= 0")
        upper = np.triu(a, 1 - self.band)
        if np.any(upper != 0):
            i, j = np.argwhere(upper != 0)[0]
            raise ValidationError(f"matrix is not causal with band {self.band}: entry ({i}, {j}) is nonzero",
                                  witness=(int(i), int(j)))
        object.__setattr__(self, "a", a)

    @property
    def n(self):
        return self.a.shape[0]


@dataclass(frozen=True)
class DiagonalScaling:
    d: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        if d.ndim != 1 or not np.all(d > 0):
            raise ValidationError("scaling must be a strictly positive vector")
        if np.any(np.diff(d) < 0):
            raise ValidationError("scaling must be nondecreasing")
        object.__setattr__(self, "d", d)


@dataclass(frozen=True)
class DiscreteWeight:
    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        if w.ndim != 1 or not np.all(w > 0):
            raise ValidationError("weight samples must be positive")
        if np.any(np.diff(w) > 0):
            raise ValidationError("weight samples must be non-increasing")
        object.__setattr__(self, "w", w)

    @classmethod
    def from_space(cls, space, T, n):
        """Samples of the space's weight at ``T k / n``, ``k = 1..n``."""
        t = T * np.arange(1, n + 1) / n
        return cls(space.weight(t))


def spectral_norm(m, tol=SLACK, max_iter=10_000):
    """Largest singular value: dense SVD up to ``DENSE_MAX``, power iteration beyond."""
    if m.shape[0] <= DENSE_MAX:
        return float(np.linalg.norm(m, 2))
    rng = np.random.default_rng(0)
    v = rng.standard_normal(m.shape[1])
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(max_iter):
        u = m.conj().T @ (m @ v)
        new = math.sqrt(np.linalg.norm(u))
        v = u / np.linalg.norm(u)
        if abs(new - sigma) <= tol:
            return new
        sigma = new
    raise ConvergenceError("power iteration did not converge", sigma)


def weighted_norm(a, w):
    """``||A||`` as an operator on ``l^2`` with weights ``w``."""
    s = np.sqrt(w.w)
    return spectral_norm(s[:, None] * a / s[None, :])


def conjugate_norm_check(A, d, w):
    """``(||A||_w, ||D^-1 A D||_w, passed)`` with ``passed`` at slack ``1e-12``."""
    if not (A.n == len(d.d) == len(w.w)):
        raise ValueError(f"dimension mismatch: A is {A.n}, d is {len(d.d)}, w is {len(w.w)}")
    # the ratio d_j / d_i is exactly 1 for constant d, so the two norms then agree bit for bit
    conj = A.a * (d.d[None, :] / d.d[:, None])
    na = weighted_norm(A.a, w)
    nc = weighted_norm(conj, w)
    return na, nc, bool(nc <= na + SLACK)


def dilation_matrix(a, w, n):
    """Grid model of ``f -> f(. / a) / a`` on ``t_k = k T / n``.

    Row ``i`` picks the nearest grid index to ``t_i / a``.  Causal iff ``a >= 1``;
    for ``a < 1`` the offending band (how far above the diagonal the map
    reaches) is reported in the rejection.
    """
    if not a > 0:
        raise ValueError(f"dilation factor must be positive, got {a}")
    if n < 2:
        raise ValueError("need n >= 2")
    if w is not None and len(w.w) != n:
        raise ValueError("weight length does not match n")
    i = np.arange(n)
    j = np.rint((i + 1) / a).astype(np.int64) - 1
    if a < 1:
        band = int(max((j - i).max(), 1))
        raise ValidationError(f"dilation by a = {a} < 1 is not causal: it reaches {band} above the diagonal",
                              witness=band)
    m = np.zeros((n, n))
    keep = j >= 0
    m[i[keep], j[keep]] = 1.0 / a
    return CausalMatrix(m)


def random_trial(n, band, seed, trial):
    """One random ``(A, d, w)`` triple from the stream keyed by ``(seed, trial)``."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))
    A = np.tril(rng.standard_normal((n, n)), -band)
    d = np.sort(rng.uniform(0.1, 10.0, n))
    w = np.sort(rng.uniform(0.1, 10.0, n))[::-1]
    return CausalMatrix(A, band), DiagonalScaling(d), DiscreteWeight(w)


@dataclass
class TrialSummary:
    trials: int
    passed: int
    n: int
    band: int
    seed: int
    worst_slack: float
    rows: list = field(default_factory=list, repr=False)  # (trial, n, ||A||, ||D^-1AD||, slack)

    def to_dict(self):
        return {"trials": self.trials, "passed": self.passed, "n": self.n, "band": self.band,
                "seed": self.seed, "worst_slack": self.worst_slack}


def _threads():
    try:
        return max(1, int(os.environ.get("ZEN_THREADS", "1")))
    except ValueError:
        return 1


def run_trials(trials=1000, n=64, band=0, seed=0, threads=None):
    """Random property suite for the conjugation inequality.

    ``slack`` in each row is ``||A||_w + 1e-12 - ||D^-1 A D||_w``, so a trial
    passes iff its slack is nonnegative.
    """
    threads = threads or _threads()

    def one(k):
        A, d, w = random_trial(n, band, seed, k)
        na, nc, ok = conjugate_norm_check(A, d, w)
        return (k, n, na, nc, na + SLACK - nc), ok

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            out = list(pool.map(one, range(trials)))
    else:
        out = [one(k) for k in range(trials)]
    rows = [r for r, _ in out]
    passed = sum(ok for _, ok in out)
    worst = min(r[4] for r in rows) if rows else math.inf
    return TrialSummary(trials, passed, n, band, seed, worst, rows)


def write_trial_log(summary, path):
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh)
        out.writerow(["trial", "n", "norm_A", "norm_conj", "slack"])
        for k, n, na, nc, s in summary.rows:
            out.writerow([k, n, f"{na:.17g}", f"{nc:.17g}", f"{s:.17g}"])


# exponent and doubling constants

def alpha_prime_lhs(alpha, R):
    """Left side of the domination inequality; ``inf`` where the denominator is not positive."""
    if alpha <= 0:
        return math.inf if R > 1 else 0.0
    den = 1.0 - 2.0 * R * math.exp(-(alpha + 2.0))
    if den <= 0:
        return math.inf
    return math.exp(-(alpha + 2.0) / 2.0) * (R - 1.0) / alpha * (1.0 + R * (alpha + 2.0) / den)


@dataclass(frozen=True)
class AlphaPrime:
    value: float
    floor: float
    R: float
    lhs_at: float  # lhs at value * (1 + 1e-6)
    lhs_below: float  # lhs at value * (1 - 1e-3); > 1 is the bracketing witness
    monotone: bool
    label: str = "sufficient alpha'"

    def to_dict(self):
        return {"alpha_prime": self.value, "floor": self.floor, "R": self.R, "lhs_at": self.lhs_at,
                "lhs_below": self.lhs_below, "monotone": self.monotone, "label": self.label}


def alpha_prime_solve(R, xtol=1e-9):
    """Smallest ``alpha`` above ``max(0, ln(2R) - 2)`` satisfying the domination inequality.

    The root is sufficient, not claimed optimal.  For ``R = 1`` the left side
    vanishes identically and the domain floor is returned.
    """
    if not R >= 1:
        raise ValueError(f"doubling ratio must be >= 1, got {R}")
    floor = max(0.0, math.log(2.0 * R) - 2.0)
    if R == 1:
        return AlphaPrime(floor, floor, R, 0.0, 0.0, True)
    lo, hi = floor, ALPHA_MAX
    if alpha_prime_lhs(hi, R) > 1:
        raise ConvergenceError(f"alpha' not bracketed in [{floor:g}, {ALPHA_MAX:g}] for R = {R}")
    while hi - lo > xtol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if alpha_prime_lhs(mid, R) <= 1:
            hi = mid
        else:
            lo = mid
    scan = np.geomspace(hi, ALPHA_MAX, 200)
    monotone = all(alpha_prime_lhs(a, R) <= 1 for a in scan)
    return AlphaPrime(hi, floor, R, alpha_prime_lhs(hi * (1 + 1e-6), R),
                      alpha_prime_lhs(hi * (1 - 1e-3), R), monotone)


def c_gap(c, R):
    """Right minus left side of the doubling-constant inequality (>= 0 means satisfied)."""
    lhs = R * ((R - 1.0) / (2.0 * c - R) + (R - 1.0) / (4.0 * R * c))
    return 0.5 - 1.0 / math.sqrt(2.0 * c) - lhs


def c_sufficient(R, xtol=1e-9):
    """Smallest ``c >= max(2, R/2 + 1e-6)`` satisfying the inequality, by bisection."""
    if not R >= 1:
        raise ValueError(f"doubling ratio must be >= 1, got {R}")
    lo = max(2.0, R / 2.0 + 1e-6)
    if c_gap(lo, R) >= 0:
        return lo
    hi = C_MAX
    if c_gap(hi, R) < 0:
        raise ConvergenceError(f"c not bracketed in [{lo:g}, {C_MAX:g}] for R = {R}")
    while hi - lo > xtol * hi:
        mid = 0.5 * (lo + hi)
        if c_gap(mid, R) >= 0:
            hi = mid
        else:
            lo = mid
    return hi


def c_empirical(space):
    """``sup_t w(t/2) / w(t)`` over a log grid plus the endpoint limits."""
    w = space.weight
    grid = log_grid(1.0 / space.measure.scale)
    ext = extremum(lambda t: w(t / 2) / w(t), grid,
                   w.limit_ratio(0.5, "zero"), w.limit_ratio(0.5, "inf"))
    return ext.value


@dataclass(frozen=True)
class CConstants:
    R: float
    c_sufficient: float
    c_empirical: float = None

    @property
    def consistent(self):
        return self.c_empirical is None or self.c_empirical <= self.c_sufficient

    def to_dict(self):
        return {"R": self.R, "c_sufficient": self.c_sufficient, "c_empirical": self.c_empirical,
                "consistent": self.consistent}


def c_min_solve(R, space=None):
    """``c_sufficient(R)`` and, when a space is given, its ``c_empirical``."""
    return CConstants(R, c_sufficient(R), None if space is None else c_empirical(space))


def domination_check(space, a, alphas):
    """``||C_{psi_a}||`` on ``B^2_alpha`` against the same operator on ``space``.

    Returns ``[(alpha, bergman_norm, zen_norm, holds)]``; the domination is
    expected for causal dilations (``a >= 1``) and ``alpha >= alpha'(R)``.
    """
    from .composition import scaling_norm
    from .spaces import ZenSpace

    zen = scaling_norm(a, space)
    out = []
    for alpha in alphas:
        b = scaling_norm(a, ZenSpace.bergman(alpha))
        out.append((float(alpha), b, zen, bool(b <= zen * (1 + 1e-9))))
    return out
