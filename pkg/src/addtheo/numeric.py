"""Complex evaluation of the supported function classes and graph sampling.

The Weierstrass function is evaluated through its Laurent expansion around the
origin,

    wp(u) = 1/u^2 + sum_{k>=2} c_k u^(2k-2),
    c_2 = g2/20,  c_3 = g3/28,
    c_k = 3 / ((2k+1)(k-3)) * sum_{m=2}^{k-2} c_m c_{k-m}   for k >= 4,

truncated at a configurable number of terms.  Sampling is restricted to a
radius window where the truncation error is far below the identity tolerances,
so no period computation is ever needed.  All randomness is derived from an
explicit seed, per sample index, so runs are reproducible and could be
parallelized without changing results.
"""

from __future__ import annotations

import cmath
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import AddTheoError, SamplingError
from .funcspec import FuncSpec, FunctionClass

Q = Fraction


@dataclass(frozen=True)
class EvalConfig:
    series_terms: int = 30
    tol: float = 1e-9
    seed: int = 0
    sample_radius: tuple = (0.05, 0.25)
    pole_guard: float = 1e6

    def __post_init__(self):
        if self.series_terms < 10:
            raise AddTheoError("series_terms must be at least 10")
        if not (0 < self.tol < 1):
            raise AddTheoError("tol must lie in (0, 1)")
        lo, hi = self.sample_radius
        if not (0 < lo < hi <= 0.5):
            raise AddTheoError("sample_radius must satisfy 0 < lo < hi <= 0.5")


@dataclass(frozen=True)
class GraphSample:
    u: complex
    v: complex
    x: complex
    y: complex
    z: complex


@lru_cache(maxsize=64)
def _wp_coefficients(g2: Fraction, g3: Fraction, terms: int):
    """Exact Laurent coefficients c_2 .. c_terms."""
    c = {2: g2 / 20, 3: g3 / 28}
    for k in range(4, terms + 1):
        acc = Q(0)
        for m in range(2, k - 1):
            acc += c[m] * c[k - m]
        c[k] = acc * Q(3, (2 * k + 1) * (k - 3))
    return tuple(complex(c[k]) for k in range(2, terms + 1))


def _check_range(u: complex, cfg: EvalConfig):
    if u == 0:
        raise AddTheoError("wp pole at u = 0")
    lo, hi = cfg.sample_radius
    r = abs(u)
    if r < lo * 0.5 or r > hi * 1.0000001:
        raise AddTheoError(
            f"|u| = {r:.4g} outside the configured evaluation range [{lo}, {hi}]"
        )


def wp_eval(g2, g3, u: complex, cfg: EvalConfig) -> complex:
    """Weierstrass wp(u) for invariants (g2, g3), truncated Laurent series."""
    _check_range(u, cfg)
    coeffs = _wp_coefficients(Q(g2), Q(g3), cfg.series_terms)
    u2 = u * u
    total = 1 / u2
    upow = u2
    for c in coeffs:
        total += c * upow
        upow *= u2
    return total


def wp_prime_eval(g2, g3, u: complex, cfg: EvalConfig) -> complex:
    """Termwise derivative of the wp series."""
    _check_range(u, cfg)
    coeffs = _wp_coefficients(Q(g2), Q(g3), cfg.series_terms)
    total = -2 / (u * u * u)
    upow = u
    for k, c in enumerate(coeffs, start=2):
        total += (2 * k - 2) * c * upow
        upow *= u * u
    return total


def phi_eval(spec: FuncSpec, u: complex, cfg: EvalConfig) -> complex:
    """Evaluate phi at u; raises near poles so callers can resample."""
    if spec.cls is FunctionClass.RATIONAL_OF_U:
        point = {"u": u}
    elif spec.cls is FunctionClass.RATIONAL_OF_EXP:
        point = {"t": cmath.exp(spec.mu_value * u)}
    else:
        point = {
            "p": wp_eval(spec.g2, spec.g3, u, cfg),
            "q": wp_prime_eval(spec.g2, spec.g3, u, cfg),
        }
    den = spec.denominator.evaluate(point)
    if abs(den) < 1e-12:
        raise AddTheoError("phi evaluated too close to a pole")
    return spec.numerator.evaluate(point) / den


def _draw(rng, cfg: EvalConfig) -> complex:
    lo, hi = cfg.sample_radius
    r = lo + (hi - lo) * rng.random()
    theta = 2 * cmath.pi * rng.random()
    return r * cmath.exp(1j * theta)


def sample_graph(spec: FuncSpec, n: int, cfg: EvalConfig, salt: int = 0):
    """Draw n deterministic samples (u, v, phi(u), phi(v), phi(u+v)).

    Each index derives its own random stream from (seed, salt, index), so the
    sample list is independent of evaluation order.  Draws whose sum leaves
    the radius window, or that land near poles, are rejected and retried; a
    rejection rate above 99% is reported as an error.
    """
    if n < 1:
        raise AddTheoError("sample count must be positive")
    lo, hi = cfg.sample_radius
    samples = []
    attempts = 0
    budget = 100 * n + 1000
    for i in range(n):
        rng = random.Random(f"{cfg.seed}:{salt}:{i}")
        while True:
            attempts += 1
            if attempts > budget:
                raise SamplingError("spec has dense poles in sampling window")
            u = _draw(rng, cfg)
            v = _draw(rng, cfg)
            s = u + v
            if not (lo <= abs(s) <= hi):
                continue
            if abs(u - v) < 1e-3:
                continue
            try:
                x = phi_eval(spec, u, cfg)
                y = phi_eval(spec, v, cfg)
                z = phi_eval(spec, s, cfg)
            except AddTheoError:
                continue
            guard = cfg.pole_guard
            if abs(x) > guard or abs(y) > guard or abs(z) > guard:
                continue
            samples.append(GraphSample(u=u, v=v, x=x, y=y, z=z))
            break
    return samples


def relative_residual(poly, point) -> float:
    """|poly(point)| scaled by the largest single-term contribution."""
    value = abs(poly.evaluate(point))
    scale = poly.term_magnitude(point)
    return value / max(scale, 1e-300)


def class_tolerance(spec: FuncSpec, override=None) -> float:
    """Default identity tolerance: 1e-9 in general, 1e-6 for the high-degree
    elliptic eliminants.  An explicit override wins."""
    if override is not None:
        return override
    return 1e-6 if spec.cls is FunctionClass.ELLIPTIC else 1e-9


def phi_derivative_numeric(spec: FuncSpec, u: complex, cfg: EvalConfig, h: float = 1e-5) -> complex:
    """Central finite difference, for independent derivative checks."""
    return (phi_eval(spec, u + h, cfg) - phi_eval(spec, u - h, cfg)) / (2 * h)
