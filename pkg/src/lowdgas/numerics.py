"""Shared numerical kernels for the gas-thermodynamics solvers.

Everything in this module is dimensionless plumbing: Gauss-Legendre
quadrature on finite and semi-infinite domains, damped fixed-point
iteration, bracketed root finding, Richardson-extrapolated finite
differences, and the error-function family including the scaled
complement ``exp(x**2) * erfc(x)`` which stays finite for large ``x``.

All operations are pure: no hidden state, no global tolerance registry,
and every routine is safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "QuadratureRule",
    "FixedPointConfig",
    "BracketError",
    "ConvergenceError",
    "EvaluationError",
    "gauss_legendre",
    "composite_rule",
    "semi_infinite_rule",
    "integrate",
    "solve_fixed_point",
    "find_root",
    "derivative",
    "golden_section_max",
    "erf_family",
    "erfcx",
]

_SQRT_PI = math.sqrt(math.pi)


# ---------------------------------------------------------------------------
# errors
# ---------------------------------------------------------------------------

class EvaluationError(ValueError):
    """A function returned a non-finite value where a finite one was required.

    The offending abscissa is attached as ``node``.
    """

    def __init__(self, message: str, node: float):
        super().__init__(message)
        self.node = node


class ConvergenceError(RuntimeError):
    """An iteration exhausted its budget.  Carries the last iterate and
    the residual it stalled at (``best`` / ``residual``)."""

    def __init__(self, message: str, best=None, residual: float = math.nan):
        super().__init__(message)
        self.best = best
        self.residual = residual


class BracketError(ValueError):
    """A root bracket does not actually bracket a sign change."""


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for ``integral(f) ~ sum(w_i * f(x_i))``.

    ``domain`` is ``(a, b)`` with ``b`` possibly ``math.inf``; for a
    semi-infinite rule the nodes form a geometric panel ladder and
    :func:`integrate` stops extending once further panels stop
    contributing.  ``panels`` holds the node count of each panel (empty
    for a single-block rule).
    """

    nodes: np.ndarray
    weights: np.ndarray
    domain: tuple[float, float]
    panels: tuple[int, ...] = ()

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        a, b = self.domain
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise ValueError("nodes and weights must be 1-d arrays of equal length")
        if np.any(np.diff(nodes) <= 0.0):
            raise ValueError("quadrature nodes must be strictly increasing")
        if nodes.size and (nodes[0] <= a or (math.isfinite(b) and nodes[-1] >= b)):
            raise ValueError("quadrature nodes must lie strictly inside the domain")
        if np.any(weights <= 0.0):
            raise ValueError("quadrature weights must be positive")
        if math.isfinite(b):
            length = b - a
            if abs(float(weights.sum()) - length) > 1e-12 * max(abs(length), 1.0):
                raise ValueError("weights of a finite-domain rule must sum to the domain length")

    def __len__(self) -> int:
        return self.nodes.size


def gauss_legendre(n: int, a: float = -1.0, b: float = 1.0) -> QuadratureRule:
    """Gauss-Legendre rule with ``n`` nodes mapped onto ``[a, b]``.

    Exact for polynomials of degree ``2n - 1``.
    """
    if n < 1:
        raise ValueError("need at least one node")
    if not (math.isfinite(a) and math.isfinite(b)) or b <= a:
        raise ValueError(f"invalid finite interval ({a}, {b})")
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return QuadratureRule(a + half * (x + 1.0), half * w, (a, b))


def composite_rule(edges: Sequence[float], n: int = 16) -> QuadratureRule:
    """Composite Gauss-Legendre rule: ``n`` nodes on each panel of ``edges``."""
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0.0):
        raise ValueError("edges must be a strictly increasing sequence of at least two points")
    x, w = np.polynomial.legendre.leggauss(n)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        nodes.append(lo + half * (x + 1.0))
        weights.append(half * w)
    return QuadratureRule(
        np.concatenate(nodes),
        np.concatenate(weights),
        (float(edges[0]), float(edges[-1])),
        panels=(n,) * (edges.size - 1),
    )


def semi_infinite_rule(a: float, scale: float, n: int = 24, max_panels: int = 48) -> QuadratureRule:
    """Panel ladder for ``[a, inf)``: first panel of width ``scale``, each
    subsequent panel twice as wide.

    :func:`integrate` walks the ladder and stops once panel contributions
    fall below ``1e-14`` of the accumulated total, so the (large) nominal
    coverage is never fully evaluated for a decaying integrand.
    """
    if not math.isfinite(a):
        raise ValueError("lower bound must be finite")
    if scale <= 0.0 or not math.isfinite(scale):
        raise ValueError("scale must be positive and finite")
    edges = a + scale * (2.0 ** np.arange(max_panels + 1) - 1.0)
    x, w = np.polynomial.legendre.leggauss(n)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        nodes.append(lo + half * (x + 1.0))
        weights.append(half * w)
    return QuadratureRule(
        np.concatenate(nodes),
        np.concatenate(weights),
        (a, math.inf),
        panels=(n,) * max_panels,
    )


def _check_finite(values: np.ndarray, nodes: np.ndarray) -> None:
    bad = ~np.isfinite(values)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise EvaluationError(
            f"integrand returned {values[i]!r} at node {nodes[i]!r}", float(nodes[i])
        )


def integrate(f: Callable[[np.ndarray], np.ndarray], rule: QuadratureRule) -> float:
    """``sum(w_i * f(x_i))`` over the rule, deterministically.

    ``f`` must accept an ndarray of abscissae and return values of the
    same shape; a non-finite value raises :class:`EvaluationError` naming
    the offending node.  On a semi-infinite rule the panel ladder is
    evaluated lazily and truncated once two consecutive panels contribute
    less than ``1e-14`` of the running total.
    """
    if math.isfinite(rule.domain[1]) or not rule.panels:
        values = np.asarray(f(rule.nodes), dtype=float)
        _check_finite(values, rule.nodes)
        return float(np.dot(rule.weights, values))

    total = 0.0
    quiet = 0
    start = 0
    for count in rule.panels:
        stop = start + count
        x = rule.nodes[start:stop]
        values = np.asarray(f(x), dtype=float)
        _check_finite(values, x)
        part = float(np.dot(rule.weights[start:stop], values))
        total += part
        if abs(part) <= 1e-14 * max(abs(total), 1e-300):
            quiet += 1
            if quiet >= 2:
                break
        else:
            quiet = 0
        start = stop
    return total


# ---------------------------------------------------------------------------
# fixed point and root finding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FixedPointConfig:
    """Damped fixed-point iteration settings.

    ``damping`` in (0, 1]; each step is
    ``x <- (1 - damping) * x + damping * map(x)``.
    """

    damping: float = 0.5
    tol: float = 1e-10
    max_iter: int = 5000

    def __post_init__(self):
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must lie in (0, 1]")
        if self.tol <= 0.0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be a positive integer")


def solve_fixed_point(
    map_: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    cfg: FixedPointConfig = FixedPointConfig(),
) -> np.ndarray:
    """Solve ``x = map(x)`` by damped iteration.

    Returns ``x`` with ``sup|x - map(x)| < cfg.tol`` (a float when ``x0``
    is scalar, else an ndarray).  Raises :class:`ConvergenceError`
    (carrying the last iterate and residual) if ``cfg.max_iter`` is
    exhausted.
    """
    scalar_in = np.ndim(x0) == 0
    if scalar_in:
        scalar_map = map_
        map_ = lambda v: np.asarray([scalar_map(float(v[0]))])  # noqa: E731
    x = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    residual = math.inf
    for _ in range(cfg.max_iter):
        fx = np.asarray(map_(x), dtype=float)
        if fx.shape != x.shape:
            raise ValueError("map must preserve the shape of its argument")
        residual = float(np.max(np.abs(fx - x)))
        if not math.isfinite(residual):
            raise EvaluationError("fixed-point map produced a non-finite value", math.nan)
        if residual < cfg.tol:
            return float(x[0]) if scalar_in else x
        x += cfg.damping * (fx - x)
    raise ConvergenceError(
        f"fixed point not reached in {cfg.max_iter} iterations (residual {residual:.3e})",
        best=x,
        residual=residual,
    )


def find_root(
    f: Callable[[float], float],
    bracket: tuple[float, float],
    tol: float = 1e-12,
) -> float:
    """Root of ``f`` inside ``bracket`` by secant steps with a bisection
    fallback, so convergence is guaranteed for any continuous ``f`` with a
    sign change.

    Stops when ``|f(x)| < tol`` or the bracket width drops below ``tol``.
    Raises :class:`BracketError` when the endpoints have the same sign.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if hi < lo:
        lo, hi = hi, lo
    flo, fhi = float(f(lo)), float(f(hi))
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise BracketError(
            f"f({lo}) = {flo:.6g} and f({hi}) = {fhi:.6g} have the same sign"
        )
    for _ in range(4096):
        width = hi - lo
        if width < tol:
            break
        # secant proposal, kept only if it lands safely inside the bracket
        x = lo - flo * width / (fhi - flo)
        if not (lo + 0.01 * width < x < hi - 0.01 * width):
            x = 0.5 * (lo + hi)
        fx = float(f(x))
        if not math.isfinite(fx):
            raise EvaluationError(f"f returned {fx!r} at {x!r}", x)
        if abs(fx) < tol or fx == 0.0:
            return x
        if math.copysign(1.0, fx) == math.copysign(1.0, flo):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
        # enforce eventual bisection behaviour: if the bracket stagnates,
        # cut it in half outright
        if hi - lo > 0.75 * width:
            m = 0.5 * (lo + hi)
            fm = float(f(m))
            if abs(fm) < tol or fm == 0.0:
                return m
            if math.copysign(1.0, fm) == math.copysign(1.0, flo):
                lo, flo = m, fm
            else:
                hi, fhi = m, fm
    return lo if abs(flo) <= abs(fhi) else hi


def derivative(
    f: Callable[[float], float],
    x: float,
    scale: float = 1e-3,
) -> tuple[float, float]:
    """First derivative by central differences with one Richardson level.

    The step is ``h = scale * max(|x|, 1)``.  Returns
    ``(value, error_estimate)`` where the estimate is the (absolute)
    difference between the extrapolated and the fine-step stencil.
    """
    if scale <= 0.0:
        raise ValueError("scale must be positive")
    h = scale * max(abs(x), 1.0)
    vals = [float(f(x + s)) for s in (+h, -h, +0.5 * h, -0.5 * h)]
    for s, v in zip((+h, -h, +0.5 * h, -0.5 * h), vals):
        if not math.isfinite(v):
            raise EvaluationError(f"f returned {v!r} at {x + s!r}", x + s)
    coarse = (vals[0] - vals[1]) / (2.0 * h)
    fine = (vals[2] - vals[3]) / h
    value = (4.0 * fine - coarse) / 3.0
    return value, abs(value - fine) + 1e-300


def golden_section_max(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-8,
) -> tuple[float, float]:
    """Locate the maximum of a unimodal ``f`` on ``[lo, hi]``.

    Returns ``(argmax, max)``; plain golden-section, no derivative use.
    """
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = float(lo), float(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = float(f(c)), float(f(d))
    while b - a > tol * max(1.0, abs(a) + abs(b)):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = float(f(c))
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = float(f(d))
    x = 0.5 * (a + b)
    return x, float(f(x))


# ---------------------------------------------------------------------------
# error-function family
# ---------------------------------------------------------------------------

def _erfcx_cf(x: float) -> float:
    # Laplace continued fraction for sqrt(pi)*exp(x^2)*erfc(x), accurate to
    # full double precision for x >= 6 at this depth.
    t = 0.0
    for k in range(30, 0, -1):
        t = (0.5 * k) / (x + t)
    return 1.0 / (_SQRT_PI * (x + t))


def erfcx(x: float) -> float:
    """Scaled complementary error function ``exp(x**2) * erfc(x)``.

    Stays finite for arbitrarily large positive ``x`` (asymptotically
    ``1/(x*sqrt(pi))``); for negative ``x`` it grows like
    ``2*exp(x**2)`` and overflows below ``x ~ -26.6``, which is the
    honest value of the function there.
    """
    x = float(x)
    if x != x:  # NaN
        return x
    if x < 0.0:
        return 2.0 * math.exp(x * x) - erfcx(-x)
    if x < 6.0:
        return math.exp(x * x) * math.erfc(x)
    return _erfcx_cf(x)


def erf_family(x: float) -> tuple[float, float, float]:
    """Return ``(erf(x), erfc(x), exp(x**2)*erfc(x))``.

    ``erf + erfc == 1`` to 1e-14 and the scaled complement does not
    overflow for ``x`` up to 1e4 (and far beyond).
    """
    x = float(x)
    if not math.isfinite(x):
        if math.isnan(x):
            return (x, x, x)
        s = math.copysign(1.0, x)
        return (s, 1.0 - s, 0.0 if s > 0 else math.inf)
    return math.erf(x), math.erfc(x), erfcx(x)
