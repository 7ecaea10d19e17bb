"""Young-function calculus: evaluation, inversion, convex conjugation, growth checks.

A Young function is an even, continuous, convex map with value 0 only at 0 and
superlinear growth.  This module provides a small family of parametric kinds,
numeric Legendre-Fenchel conjugation, and grid-sampled certificates for the
classical growth conditions (doubling, submultiplicative, supermultiplicative,
ordering between two functions).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BracketFailure,
    ConfigError,
    DifferentiationFailure,
    NonInvertible,
    NotSuperlinear,
)

__all__ = [
    "YoungFunction",
    "GridSpec",
    "GrowthCertificate",
    "ProductConvexityReport",
    "YoungInequalityReport",
    "power",
    "scaled_power",
    "conjugate_power",
    "exp_type",
    "log_type",
    "piecewise_linear",
    "from_config",
    "to_config",
    "evaluate",
    "inverse",
    "conjugate_closed_form",
    "conjugate_numeric",
    "check_delta2",
    "check_delta_prime",
    "check_nabla_prime",
    "check_ordering",
    "check_product_convexity",
    "young_inequality_check",
]

# Default tolerances and grids; chosen for double-precision headroom.
BISECT_TOL = 1e-10
CONJUGATE_TOL = 1e-8
SAFETY_FACTOR = 1.01

_KINDS = ("power", "scaled_power", "conjugate_power", "exp_type", "log_type", "piecewise_linear")


@dataclass(frozen=True)
class YoungFunction:
    """A parametric convex function on the line, evaluated on |x|.

    Kinds:
      power            |x|**p, p > 1
      scaled_power     |x|**p / p, p > 1
      conjugate_power  the exact convex conjugate of |x|**p: (p-1) p**(-q) |y|**q
      exp_type         exp(|x|) - |x| - 1
      log_type         (1+|y|) log(1+|y|) - |y|   (conjugate of exp_type)
      piecewise_linear convex piecewise-linear interpolant; grows only linearly,
                       so it is flagged non-superlinear and rejected by every
                       operation that needs a true Young function
    """

    kind: str
    p: float | None = None
    breakpoints: tuple[float, ...] = ()
    slopes: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ConfigError(f"young.kind: unknown kind {self.kind!r}")
        if self.kind in ("power", "scaled_power", "conjugate_power"):
            if self.p is None or not self.p > 1:
                raise ConfigError(f"young.p: need p > 1 for kind {self.kind!r}, got {self.p}")
        if self.kind == "piecewise_linear":
            bp, sl = self.breakpoints, self.slopes
            if len(bp) != len(sl) or not bp:
                raise ConfigError("young.breakpoints/slopes: need equal, nonzero lengths")
            if bp[0] != 0.0:
                raise ConfigError("young.breakpoints: first abscissa must be 0")
            if any(b2 <= b1 for b1, b2 in zip(bp, bp[1:])):
                raise ConfigError("young.breakpoints: must be strictly increasing")
            if any(s < 0 for s in sl) or any(s2 < s1 for s1, s2 in zip(sl, sl[1:])):
                raise ConfigError("young.slopes: must be nonnegative and nondecreasing")

    @property
    def superlinear(self) -> bool:
        """True when value/x diverges, i.e. the function is a true Young function."""
        return self.kind != "piecewise_linear"

    def __call__(self, x):
        return evaluate(self, x)

    def inverse(self, t, tol: float = BISECT_TOL):
        return inverse(self, t, tol)


def power(p: float) -> YoungFunction:
    return YoungFunction("power", p=float(p))


def scaled_power(p: float) -> YoungFunction:
    return YoungFunction("scaled_power", p=float(p))


def conjugate_power(p: float) -> YoungFunction:
    """The exact conjugate of |x|**p, kept symbolically so roundtrips stay closed-form."""
    return YoungFunction("conjugate_power", p=float(p))


def exp_type() -> YoungFunction:
    return YoungFunction("exp_type")


def log_type() -> YoungFunction:
    return YoungFunction("log_type")


def piecewise_linear(breakpoints, slopes) -> YoungFunction:
    return YoungFunction(
        "piecewise_linear",
        breakpoints=tuple(float(b) for b in breakpoints),
        slopes=tuple(float(s) for s in slopes),
    )


def from_config(fragment: dict) -> YoungFunction:
    """Build a YoungFunction from a config fragment like {"kind": "scaled_power", "p": 2.0}."""
    if not isinstance(fragment, dict) or "kind" not in fragment:
        raise ConfigError("young: expected an object with a 'kind' field")
    kind = fragment["kind"]
    if kind in ("power", "scaled_power", "conjugate_power"):
        if "p" not in fragment:
            raise ConfigError(f"young.p: required for kind {kind!r}")
        return YoungFunction(kind, p=float(fragment["p"]))
    if kind in ("exp_type", "log_type"):
        return YoungFunction(kind)
    if kind == "piecewise_linear":
        try:
            return piecewise_linear(fragment["breakpoints"], fragment["slopes"])
        except KeyError as exc:
            raise ConfigError(f"young.{exc.args[0]}: required for piecewise_linear") from exc
    raise ConfigError(f"young.kind: unknown kind {kind!r}")


def to_config(phi: YoungFunction) -> dict:
    if phi.kind in ("power", "scaled_power", "conjugate_power"):
        return {"kind": phi.kind, "p": phi.p}
    if phi.kind == "piecewise_linear":
        return {"kind": phi.kind, "breakpoints": list(phi.breakpoints), "slopes": list(phi.slopes)}
    return {"kind": phi.kind}


def _conj_power_params(p: float) -> tuple[float, float]:
    """Coefficient and exponent of the conjugate of |x|**p: c*|y|**q."""
    q = p / (p - 1.0)
    return (p - 1.0) * p ** (-q), q


def evaluate(phi: YoungFunction, x):
    """Evaluate phi at |x|.  Accepts scalars or ndarrays; exact for closed-form kinds."""
    ax = np.abs(np.asarray(x, dtype=float))
    with np.errstate(over="ignore"):
        if phi.kind == "power":
            out = ax**phi.p
        elif phi.kind == "scaled_power":
            out = ax**phi.p / phi.p
        elif phi.kind == "conjugate_power":
            c, q = _conj_power_params(phi.p)
            out = c * ax**q
        elif phi.kind == "exp_type":
            out = np.expm1(ax) - ax
        elif phi.kind == "log_type":
            out = (1.0 + ax) * np.log1p(ax) - ax
        else:  # piecewise_linear
            bp = np.asarray(phi.breakpoints)
            sl = np.asarray(phi.slopes)
            seg = np.clip(ax[..., None] - bp, 0.0, None)
            seg_len = np.append(np.diff(bp), np.inf)
            out = np.sum(sl * np.minimum(seg, seg_len), axis=-1)
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out)
    return out


def _plc_sup(phi: YoungFunction) -> float:
    """Supremum of a piecewise-linear kind (inf unless every slope is zero)."""
    return 0.0 if all(s == 0.0 for s in phi.slopes) else math.inf


def inverse(phi: YoungFunction, t, tol: float = BISECT_TOL):
    """Nonnegative x with |phi(x) - t| <= tol * max(1, t).

    Closed forms are used where available; otherwise bracketing plus bisection
    on [0, inf), valid because phi is continuous and strictly increasing where
    it is positive.  Scalars and ndarrays of targets are both accepted.  A
    target of +inf maps to +inf: it arises when a modular overflows double
    precision, and the convention keeps downstream ratios conservatively small.
    """
    scalar = np.isscalar(t) or np.ndim(t) == 0
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0) or np.any(np.isnan(tt)):
        raise ValueError("inverse target must be nonnegative and not nan")
    if phi.kind == "power":
        out = tt ** (1.0 / phi.p)
    elif phi.kind == "scaled_power":
        out = (phi.p * tt) ** (1.0 / phi.p)
    elif phi.kind == "conjugate_power":
        c, q = _conj_power_params(phi.p)
        out = (tt / c) ** (1.0 / q)
    else:
        if not phi.superlinear and np.any(tt > _plc_sup(phi)):
            raise NonInvertible(f"target exceeds the range of {phi.kind}")
        out = _bisect_inverse(phi, tt, tol)
    return float(out) if scalar else out


def _bisect_inverse(phi: YoungFunction, tt: np.ndarray, tol: float) -> np.ndarray:
    flat = np.atleast_1d(tt).astype(float).copy()
    infinite = ~np.isfinite(flat)
    flat[infinite] = 1.0  # placeholder; overwritten with inf below
    hi = np.ones_like(flat)
    for _ in range(200):
        mask = evaluate(phi, hi) < flat
        if not mask.any():
            break
        hi[mask] *= 2.0
    lo = np.zeros_like(flat)
    scale = np.maximum(1.0, flat)
    # The returned point must be the exact iterate the tolerance test saw, so
    # the candidate midpoint is evaluated before the bracket moves past it.
    mid = 0.5 * (lo + hi)
    out = mid
    for _ in range(200):
        val = evaluate(phi, mid)
        high = val > flat
        hi = np.where(high, mid, hi)
        lo = np.where(high, lo, mid)
        out = mid
        mid = 0.5 * (lo + hi)
        if np.all(np.abs(val - flat) <= tol * scale):
            break
        if np.all(np.abs(mid - out) <= 1e-16 * np.maximum(1.0, np.abs(out))):
            break  # bracket at machine resolution; tol is unreachably small
    out = out.copy()
    out[flat == 0.0] = 0.0
    out[infinite] = np.inf
    return out.reshape(tt.shape)


_CONJUGATE_TABLE = {
    "scaled_power": lambda phi: scaled_power(phi.p / (phi.p - 1.0)),
    "power": lambda phi: conjugate_power(phi.p),
    "conjugate_power": lambda phi: power(phi.p),
    "exp_type": lambda phi: log_type(),
    "log_type": lambda phi: exp_type(),
}


def conjugate_closed_form(phi: YoungFunction) -> YoungFunction | None:
    """Return the complementary Young function when a closed form is registered."""
    builder = _CONJUGATE_TABLE.get(phi.kind)
    return builder(phi) if builder is not None else None


def conjugate_numeric(
    phi: YoungFunction,
    y: float,
    xmax_hint: float = 1.0,
    tol: float = CONJUGATE_TOL,
    max_doublings: int = 512,
) -> float:
    """sup over x >= 0 of x*y - phi(x), by ternary search on the concave objective.

    The bracket is grown geometrically from xmax_hint until the objective
    decreases at the right endpoint; failure to bracket within max_doublings
    signals that phi grows at most linearly (BracketFailure).
    """
    y = float(y)
    if y < 0:
        raise ValueError("conjugate argument must be nonnegative")
    if y == 0.0:
        return 0.0

    def obj(x: float) -> float:
        v = x * y - evaluate(phi, x)
        return v if math.isfinite(v) else -math.inf

    hi = max(float(xmax_hint), 1e-12)
    prev = obj(hi)
    for _ in range(max_doublings):
        nxt = obj(2.0 * hi)
        if nxt < prev:
            hi *= 2.0
            break
        hi *= 2.0
        prev = nxt
    else:
        raise BracketFailure(
            "objective never decreased within the doubling budget; "
            "the function appears to grow at most linearly"
        )

    lo = 0.0
    best = max(0.0, obj(hi))
    for _ in range(2000):
        if hi - lo <= tol * max(1.0, lo):
            break
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        v1, v2 = obj(m1), obj(m2)
        best = max(best, v1, v2)
        if v1 < v2:
            lo = m1
        elif v1 > v2:
            hi = m2
        else:
            lo, hi = m1, m2
    best = max(best, obj(0.5 * (lo + hi)))
    return best


@dataclass(frozen=True)
class GridSpec:
    """Sampling grid for growth-condition checks (log-spaced by default)."""

    lo: float = 1e-3
    hi: float = 1e3
    n: int = 2048
    log: bool = True

    def points(self, lo_floor: float = 0.0, n: int | None = None) -> np.ndarray:
        lo = max(self.lo, lo_floor)
        n = self.n if n is None else n
        if self.log:
            return np.logspace(math.log10(lo), math.log10(self.hi), n)
        return np.linspace(lo, self.hi, n)

    def scaled(self, factor: int) -> "GridSpec":
        return GridSpec(self.lo, self.hi, self.n * factor, self.log)


@dataclass(frozen=True)
class GrowthCertificate:
    """A sampled growth constant together with the threshold it was checked above.

    `observed` is the raw grid supremum (or the bisected constant); `constant`
    includes the safety factor and is what the certificate guarantees on the
    grid.  Instances are only ever constructed after the validation sweep.
    """

    kind: str  # delta2 | delta_prime | nabla_prime | ordering
    constant: float
    threshold: float
    observed: float


def _stable_sup(sups: list[float], window: float = 0.01) -> bool:
    if any(not math.isfinite(s) for s in sups):
        return False
    return all(abs(b - a) <= window * max(abs(a), 1e-300) for a, b in zip(sups, sups[1:]))


def check_delta2(
    phi: YoungFunction, x0: float = 0.0, grid: GridSpec = GridSpec()
) -> GrowthCertificate | None:
    """Certificate for the doubling condition phi(2x) <= k*phi(x) above x0.

    k is the grid supremum of the ratio (safety factor applied), accepted only
    when stable under two grid doublings.  Grids start strictly above zero, so
    behaviour exactly at x0 = 0 is not probed.
    """
    sups = []
    for factor in (1, 2, 4):
        xs = grid.points(lo_floor=x0, n=grid.n * factor)
        with np.errstate(over="ignore", invalid="ignore"):
            ratio = evaluate(phi, 2.0 * xs) / evaluate(phi, xs)
        if not np.all(np.isfinite(ratio)):
            return None
        sups.append(float(ratio.max()))
    if not _stable_sup(sups):
        return None
    k = sups[-1] * SAFETY_FACTOR
    xs = grid.points(lo_floor=x0, n=grid.n * 4)
    if not np.all(evaluate(phi, 2.0 * xs) <= k * evaluate(phi, xs)):
        return None
    return GrowthCertificate("delta2", k, max(x0, grid.lo), sups[-1])


def _pair_grid(grid: GridSpec, lo_floor: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    xs = grid.points(lo_floor=lo_floor, n=n)
    return xs[:, None], xs[None, :]


def check_delta_prime(
    phi: YoungFunction, x0: float = 0.0, grid: GridSpec = GridSpec(n=128)
) -> GrowthCertificate | None:
    """Certificate for phi(x*y) <= c*phi(x)*phi(y) over a 2D grid above x0."""
    sups = []
    for factor in (1, 2, 4):
        x, y = _pair_grid(grid, x0, grid.n * factor)
        with np.errstate(over="ignore", invalid="ignore"):
            ratio = evaluate(phi, x * y) / (evaluate(phi, x) * evaluate(phi, y))
        if not np.all(np.isfinite(ratio)):
            return None
        sups.append(float(ratio.max()))
    if not _stable_sup(sups):
        return None
    c = sups[-1] * SAFETY_FACTOR
    x, y = _pair_grid(grid, x0, grid.n * 4)
    if not np.all(evaluate(phi, x * y) <= c * evaluate(phi, x) * evaluate(phi, y)):
        return None
    return GrowthCertificate("delta_prime", c, max(x0, grid.lo), sups[-1])


def check_nabla_prime(
    phi: YoungFunction, y0: float = 0.0, grid: GridSpec = GridSpec(n=128)
) -> GrowthCertificate | None:
    """Certificate for phi(b*x*y) >= phi(x)*phi(y): smallest b found by bisection."""
    x, y = _pair_grid(grid, y0, grid.n)
    rhs = evaluate(phi, x) * evaluate(phi, y)

    def holds(b: float) -> bool:
        with np.errstate(over="ignore"):
            return bool(np.all(evaluate(phi, b * x * y) >= rhs))

    hi = 1.0
    for _ in range(200):
        if holds(hi):
            break
        hi *= 2.0
    else:
        return None
    lo = hi / 2.0 if hi > 1.0 else 0.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if holds(mid):
            hi = mid
        else:
            lo = mid
    b = hi * SAFETY_FACTOR
    if not holds(b):
        return None
    return GrowthCertificate("nabla_prime", b, max(y0, grid.lo), hi)


def check_ordering(
    phi1: YoungFunction,
    phi2: YoungFunction,
    x0: float = 0.0,
    grid: GridSpec = GridSpec(),
    candidates: np.ndarray | None = None,
) -> GrowthCertificate | None:
    """Smallest a on a log candidate grid with phi2(x) <= phi1(a*x) above x0.

    The winning candidate must survive extending the sample range upward twice;
    a constant that keeps drifting as the range grows certifies nothing.
    """
    if candidates is None:
        candidates = np.logspace(-3, 3, 241)  # odd count so a = 1 is on the grid

    def smallest(hi: float) -> float | None:
        xs = GridSpec(grid.lo, hi, grid.n, grid.log).points(lo_floor=x0)
        lhs = evaluate(phi2, xs)
        for a in candidates:
            with np.errstate(over="ignore"):
                if np.all(lhs <= evaluate(phi1, a * xs)):
                    return float(a)
        return None

    found = [smallest(grid.hi * factor) for factor in (1.0, 4.0, 16.0)]
    if any(a is None for a in found) or len(set(found)) != 1:
        return None
    return GrowthCertificate("ordering", found[0], max(x0, grid.lo), found[0])


@dataclass(frozen=True)
class ProductConvexityReport:
    """Result of the mixed second-order determinant check on (x, y) -> phi(x)*psi(y)."""

    holds: bool
    worst_point: tuple[float, float]
    worst_value: float


def _derivatives_fd(phi: YoungFunction, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Central finite differences for phi', phi'' with step proportional to x."""
    # Relative step 1e-3 keeps the O((h/x)^2) truncation error near 1e-6 while
    # staying far above the round-off floor for these smooth closed forms.
    h = xs * 1e-3 if xs[0] > 0 else np.full_like(xs, 1e-5)
    f0 = evaluate(phi, xs)
    fp = evaluate(phi, xs + h)
    fm = evaluate(phi, xs - h)
    d1 = (fp - fm) / (2.0 * h)
    d2 = (fp - 2.0 * f0 + fm) / (h * h)
    return f0, d1, d2


def check_product_convexity(
    phi: YoungFunction,
    psi: YoungFunction,
    grid: GridSpec = GridSpec(n=256),
    tol: float = 1e-8,
) -> ProductConvexityReport:
    """Check phi''(x) psi''(y) phi(x) psi(y) - (phi'(x) psi'(y))**2 >= 0 on the grid.

    This is the determinant part of joint convexity for the product function;
    derivatives come from central differences, so piecewise-linear kinds are
    rejected.  The report names the minimizing grid point either way.
    """
    if phi.kind == "piecewise_linear" or psi.kind == "piecewise_linear":
        raise DifferentiationFailure("piecewise_linear kinds are not twice differentiable")
    xs = grid.points(lo_floor=1e-6)
    f, f1, f2 = _derivatives_fd(phi, xs)
    g, g1, g2 = _derivatives_fd(psi, xs)
    det = f2[:, None] * g2[None, :] * f[:, None] * g[None, :] - (f1[:, None] * g1[None, :]) ** 2
    i, j = np.unravel_index(np.argmin(det), det.shape)
    worst = float(det[i, j])
    scale = max(1.0, float(np.abs(det).max()))
    return ProductConvexityReport(worst >= -tol * scale, (float(xs[i]), float(xs[j])), worst)


@dataclass(frozen=True)
class YoungInequalityReport:
    """Sampled check of x*y <= phi(x) + psi(y) for a conjugate pair."""

    holds: bool
    max_violation: float
    worst_pair: tuple[float, float]
    samples: int = field(default=0)


def young_inequality_check(
    phi: YoungFunction,
    psi: YoungFunction,
    samples: int = 10_000,
    seed: int = 0,
    hi: float = 100.0,
    tol: float = 1e-9,
) -> YoungInequalityReport:
    """Sample (x, y) in [0, hi]^2 and report the worst violation of the product bound.

    Assumes psi is the conjugate of phi; with that pairing the inequality is an
    identity-tight bound and the sampled violation should never exceed tol
    (relative to the right-hand side).
    """
    rng = np.random.default_rng(seed)
    xs = rng.uniform(0.0, hi, samples)
    ys = rng.uniform(0.0, hi, samples)
    rhs = evaluate(phi, xs) + evaluate(psi, ys)
    violation = xs * ys - rhs
    rel = violation / np.maximum(1.0, rhs)
    k = int(np.argmax(rel))
    worst = float(rel[k])
    return YoungInequalityReport(worst <= tol, worst, (float(xs[k]), float(ys[k])), samples)
