"""Pullback measures ``mu(E) = int_{phi^-1(E)} |h|^p dnu`` by Monte Carlo.

``nu`` has infinite mass, so every integral here is restricted to a
truncation window ``[0, X] x [-Y, Y]``.  Points are drawn with the
boundary marginal sampled exactly (atoms, and the inverse CDF of each power
piece) and ``Im z`` uniform; every estimate carries its standard error.

Random streams are counter-based (Philox) and keyed by
``(seed, operation, batch)``, so results do not depend on batch scheduling.
"""
from dataclasses import dataclass, field
import math
import zlib

import numpy as np

from .composition import min_alpha_membership
from .errors import ConvergenceError
from .norms import _nu_integral
from .spaces import closed_form_kernel
from .symbols import Multiplier

DEFAULT_WINDOW = (100.0, 100.0)
BATCH = 100_000
CAP = 1e6


@dataclass(frozen=True)
class Estimate:
    quantity: str
    estimate: float
    stderr: float
    n: int
    window: tuple
    seed: int
    hits: int = None

    def row(self):
        return (self.quantity, self.estimate, self.stderr, self.n,
                f"{self.window[0]:g}x{self.window[1]:g}", self.seed)


def _stream(seed, operation, index):
    key = zlib.crc32(operation.encode())
    ss = np.random.SeedSequence(seed, spawn_key=(key, index))
    return np.random.Generator(np.random.Philox(ss))


@dataclass
class PullbackMeasureSampler:
    """Sampler for ``mu_{nu,h,phi,p}`` restricted to a window of the domain."""

    space: object
    phi: object
    h: object = None
    p: float = 2.0
    seed: int = 0
    n: int = 1_000_000
    window: tuple = DEFAULT_WINDOW
    _marginal: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if self.h is None:
            self.h = Multiplier.constant(1.0)
        if self.p < 1:
            raise ValueError("p must be >= 1")
        X, Y = self.window
        if not (X > 0 and Y > 0):
            raise ValueError("window extents must be positive")
        comps = []
        for r, m in self.space.measure.atoms:
            if r <= X:
                comps.append(("atom", r, m))
        for c, a in self.space.measure.pieces:
            comps.append(("piece", a, c * X ** (a + 1) / (a + 1)))
        masses = np.array([m for *_, m in comps])
        self._marginal = (comps, masses / masses.sum(), float(masses.sum()))

    @property
    def window_mass(self):
        """``nu`` of the window."""
        return self._marginal[2] * 2.0 * self.window[1]

    def draw(self, operation, index, size):
        """``size`` points distributed as ``nu`` restricted to the window, normalised."""
        rng = _stream(self.seed, operation, index)
        comps, probs, _ = self._marginal
        X, Y = self.window
        which = rng.choice(len(comps), size=size, p=probs)
        x = np.empty(size)
        for k, (kind, loc_or_alpha, _) in enumerate(comps):
            sel = which == k
            if kind == "atom":
                x[sel] = loc_or_alpha
            else:
                x[sel] = X * rng.random(sel.sum()) ** (1.0 / (loc_or_alpha + 1.0))
        y = rng.uniform(-Y, Y, size)
        return x + 1j * y

    def integrate(self, G, operation, support=None):
        """Estimate ``int_window G dnu`` and its standard error; ``G`` is vectorized.

        ``hits`` counts samples where ``support`` (a boolean mask function)
        holds, or where ``G`` is nonzero when no support is given.
        """
        s1 = s2 = 0.0
        hits = 0
        done = 0
        index = 0
        while done < self.n:
            size = min(BATCH, self.n - done)
            z = self.draw(operation, index, size)
            vals = np.asarray(G(z), dtype=float)
            s1 += vals.sum()
            s2 += (vals * vals).sum()
            hits += int(np.count_nonzero(vals if support is None else support(z)))
            done += size
            index += 1
        mean = s1 / self.n
        var = max(s2 / self.n - mean * mean, 0.0)
        M = self.window_mass
        return M * mean, M * math.sqrt(var / self.n), hits


def _in_rect(w, rect):
    x0, x1, y0, y1 = rect
    return (w.real >= x0) & (w.real <= x1) & (w.imag >= y0) & (w.imag <= y1)


def pullback_mass(s, E):
    """``mu(E)`` for an axis-aligned rectangle ``E = (x0, x1, y0, y1)``."""
    def G(z):
        return _in_rect(s.phi(z), E) * np.abs(s.h(z)) ** s.p

    est, se, hits = s.integrate(G, "pullback_mass", lambda z: _in_rect(s.phi(z), E))
    if hits == 0:
        raise ConvergenceError(f"no samples landed in phi^-1(E) for E = {E}", est, se)
    return Estimate("pullback_mass", est, se, s.n, s.window, s.seed, hits)


class PushforwardMeasure:
    """Weighted point cloud ``sum_i w_i delta_{zeta_i}`` approximating ``mu``."""

    def __init__(self, points, weights):
        self.points = points
        self.weights = weights

    def integrate(self, g):
        vals = self.weights * np.asarray(g(self.points), dtype=float)
        n = len(vals)
        return vals.sum(), vals.std() * math.sqrt(n)


def pushforward(s, operation="pushforward"):
    pts, wts = [], []
    M = s.window_mass
    done = index = 0
    while done < s.n:
        size = min(BATCH, s.n - done)
        z = s.draw(operation, index, size)
        pts.append(s.phi(z))
        wts.append(np.abs(s.h(z)) ** s.p * M / s.n)
        done += size
        index += 1
    return PushforwardMeasure(np.concatenate(pts), np.concatenate(wts))


@dataclass(frozen=True)
class ChangeOfVariables:
    lhs: Estimate
    rhs: Estimate

    @property
    def agreement(self):
        """``|lhs - rhs|`` in units of the combined standard error."""
        se = self.lhs.stderr + self.rhs.stderr
        diff = abs(self.lhs.estimate - self.rhs.estimate)
        return diff / se if se > 0 else (0.0 if diff == 0 else math.inf)

    @property
    def passed(self):
        return self.agreement <= 3.0


def change_of_variables_check(s, g):
    """``int g dmu`` (pushed-forward cloud) against ``int |h|^p g(phi) dnu`` (direct)."""
    mu = pushforward(s)
    lhs, lhs_se = mu.integrate(g)

    def G(z):
        return np.abs(s.h(z)) ** s.p * g(s.phi(z))

    rhs, rhs_se, _ = s.integrate(G, "direct")
    for v in (lhs, rhs):
        if not math.isfinite(v):
            raise ConvergenceError("non-finite change-of-variables estimate", v)
    return ChangeOfVariables(Estimate("int g dmu", lhs, lhs_se, s.n, s.window, s.seed),
                             Estimate("int |h|^p g(phi) dnu", rhs, rhs_se, s.n, s.window, s.seed))


@dataclass
class EmbeddingEstimate:
    value: float
    witness: complex
    exceeded_cap: bool
    rows: list = field(default_factory=list)  # (z, quotient, stderr, window)


def embedding_constant_estimate(s, alpha_test, z_grid, windows=None, cap=CAP, eps=1e-8):
    """Grid sup of ``int |k_z|^p dmu / ||k_z||^p`` for ``B^2_alpha_test`` kernels.

    ``windows`` optionally maps an anchor ``z`` to its own truncation window
    (``(X, Y)``); by default every anchor uses the sampler's window.
    """

    threshold = min_alpha_membership(s.p, s.space.R)
    if not alpha_test > threshold and not (alpha_test == -1 and threshold == -1):
        raise ValueError(f"alpha_test = {alpha_test} does not exceed the membership threshold {threshold:g}")
    rows = []
    best, arg = -math.inf, None
    for i, z in enumerate(map(complex, z_grid)):
        sampler = s
        if windows is not None:
            sampler = PullbackMeasureSampler(s.space, s.phi, s.h, s.p, s.seed, s.n, windows(z))

        def G(zeta):
            k = closed_form_kernel(alpha_test, z, sampler.phi(zeta))
            return np.abs(sampler.h(zeta)) ** sampler.p * np.abs(k) ** sampler.p

        num, se, _ = sampler.integrate(G, f"embedding:{i}")

        def kp(zeta):
            return np.abs(closed_form_kernel(alpha_test, z, zeta)) ** s.p

        den, _ = _nu_integral(s.space, kp, eps, ((z.imag, z.real),), 1e-8)
        q = num / den
        rows.append((z, q, se / den, sampler.window))
        if q > best:
            best, arg = q, z
    return EmbeddingEstimate(best, arg, best > cap, rows)


def carleson_square_mass(space, z):
    """``nu(Q(z))`` for the square ``Q(z)`` of depth ``Re z`` and height ``2 Re z``."""
    x = complex(z).real
    if not x > 0:
        raise ValueError("anchor must lie in the right half-plane")
    return space.measure.cdf(x) * 2.0 * x
