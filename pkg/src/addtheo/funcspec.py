"""Function descriptions: parsing, canonicalization, and the order nu.

A spec file is line oriented UTF-8 with `#` comments:

    class: rational | exp | elliptic
    phi: <expression>
    mu: <a>/<b> | i | <a>/<b>*i      (exp only, optional, numeric use only)
    g2: <rat>                        (elliptic only, required)
    g3: <rat>                        (elliptic only, required)

The uniformizer symbol is `u` for the rational class, `t` for the exponential
class, and the pair `p`, `q` for the elliptic class, where q^2 = 4p^3 - g2*p - g3.

Exponential specs whose numerator and denominator are both polynomials in t^k
for some k > 1 are rewritten in the coarser uniformizer t^k (with mu scaled by
k), so that the order nu is intrinsic to the function and not to the chosen
parametrization.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ExprSyntaxError, SpecValidationError, AddTheoError
from .exprparse import parse_fraction
from .poly import MPoly, divide_exact, rem_monic
from .resultants import mgcd, resultant

Q = Fraction


class FunctionClass(enum.Enum):
    RATIONAL_OF_U = "rational"
    RATIONAL_OF_EXP = "exp"
    ELLIPTIC = "elliptic"


_UNIFORMIZER = {
    FunctionClass.RATIONAL_OF_U: ("u",),
    FunctionClass.RATIONAL_OF_EXP: ("t",),
    FunctionClass.ELLIPTIC: ("p", "q"),
}


def curve_polynomial(g2: Fraction, g3: Fraction, variables=("p", "q")) -> MPoly:
    """q^2 - (4p^3 - g2*p - g3) over the given (p, q) ring."""
    p = MPoly.var(variables, variables[0])
    q = MPoly.var(variables, variables[1])
    return q**2 - 4 * p**3 + g2 * p + g3


@dataclass(frozen=True)
class OrderData:
    nu: int
    m: int = 1


@dataclass(frozen=True)
class FuncSpec:
    cls: FunctionClass
    numerator: MPoly
    denominator: MPoly
    mu: tuple = (Q(1), Q(0))  # exact (real, imag), numeric use only
    g2: Fraction | None = None
    g3: Fraction | None = None

    @property
    def mu_value(self) -> complex:
        return complex(self.mu[0]) + 1j * complex(self.mu[1])

    @property
    def uniformizer(self):
        return _UNIFORMIZER[self.cls]

    def serialize(self) -> str:
        lines = [f"class: {self.cls.value}"]
        num = self.numerator.to_text()
        if self.denominator.is_constant() and self.denominator.constant_value() == 1:
            lines.append(f"phi: {num}")
        else:
            lines.append(f"phi: ({num})/({self.denominator.to_text()})")
        if self.cls is FunctionClass.RATIONAL_OF_EXP and self.mu != (Q(1), Q(0)):
            lines.append(f"mu: {_format_mu(self.mu)}")
        if self.cls is FunctionClass.ELLIPTIC:
            lines.append(f"g2: {_format_rat(self.g2)}")
            lines.append(f"g3: {_format_rat(self.g3)}")
        return "\n".join(lines) + "\n"


def _format_rat(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def _format_mu(mu) -> str:
    re, im = mu
    if im == 0:
        return _format_rat(re)
    if re != 0:
        raise SpecValidationError("mu must be rational or purely imaginary")
    if im == 1:
        return "i"
    return f"{_format_rat(im)}*i"


def _parse_mu(text, line):
    text = text.strip()
    try:
        if text == "i":
            return (Q(0), Q(1))
        if text.endswith("*i"):
            return (Q(0), Q(text[:-2].strip()))
        return (Q(text), Q(0))
    except (ValueError, ZeroDivisionError):
        raise ExprSyntaxError(f"invalid mu value {text!r}", line, 1)


def _parse_rat(text, line, key):
    try:
        return Q(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ExprSyntaxError(f"invalid rational for {key}: {text!r}", line, 1)


def parse_spec(text: str) -> FuncSpec:
    """Parse and validate a spec file (see module docstring for the format)."""
    fields = {}
    lines = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if ":" not in line:
            raise ExprSyntaxError("expected 'key: value'", lineno, 1)
        key, value = line.split(":", 1)
        key = key.strip()
        if key in fields:
            raise ExprSyntaxError(f"duplicate key {key!r}", lineno, 1)
        fields[key] = value.strip()
        lines[key] = lineno
    if "class" not in fields:
        raise SpecValidationError("missing 'class' line")
    cls_tag = fields.pop("class")
    try:
        cls = FunctionClass(cls_tag)
    except ValueError:
        raise SpecValidationError(
            f"unknown class {cls_tag!r} (expected rational, exp, or elliptic)"
        )
    if "phi" not in fields:
        raise SpecValidationError("missing 'phi' line")
    phi_text = fields.pop("phi")
    phi_line = lines["phi"]

    mu = (Q(1), Q(0))
    g2 = g3 = None
    if cls is FunctionClass.RATIONAL_OF_EXP:
        if "mu" in fields:
            mu = _parse_mu(fields.pop("mu"), lines["mu"])
    if cls is FunctionClass.ELLIPTIC:
        for key in ("g2", "g3"):
            if key not in fields:
                raise SpecValidationError(f"elliptic spec requires {key}")
        g2 = _parse_rat(fields.pop("g2"), lines["g2"], "g2")
        g3 = _parse_rat(fields.pop("g3"), lines["g3"], "g3")
    if fields:
        key = next(iter(fields))
        raise ExprSyntaxError(f"unexpected key {key!r} for class {cls.value}", lines[key], 1)

    variables = _UNIFORMIZER[cls]
    num, den = parse_fraction(phi_text, variables, line=phi_line)
    return make_spec(cls, num, den, mu=mu, g2=g2, g3=g3)


def make_spec(cls, num, den, mu=(Q(1), Q(0)), g2=None, g3=None) -> FuncSpec:
    """Validate and canonicalize a function description."""
    if den.is_zero():
        raise SpecValidationError("zero denominator")
    if cls is FunctionClass.ELLIPTIC:
        if g2 is None or g3 is None:
            raise SpecValidationError("elliptic spec requires g2 and g3")
        if g2**3 - 27 * g3**2 == 0:
            raise SpecValidationError("zero discriminant: g2^3 - 27*g3^2 = 0")
        curve = curve_polynomial(g2, g3)
        num = rem_monic(num, curve, "q")
        den = rem_monic(den, curve, "q")
        if den.is_zero():
            raise SpecValidationError("denominator vanishes on the curve")
    num, den = _cancel(num, den)
    if cls is FunctionClass.RATIONAL_OF_EXP:
        num, den, mu = _minimal_uniformizer(num, den, mu)
    if num.is_constant() and den.is_constant():
        raise SpecValidationError("phi is a constant function")
    return FuncSpec(cls, num, den, mu=mu, g2=g2, g3=g3)


def _cancel(num: MPoly, den: MPoly):
    """Cancel the gcd and scale to integer coefficients, joint content 1,
    positive leading denominator."""
    if num.is_zero():
        raise SpecValidationError("phi is identically zero (constant)")
    g = mgcd(num, den)
    if not g.is_constant():
        num = divide_exact(num, g)
        den = divide_exact(den, g)
    cn, cd = num.content(), den.content()
    joint = Q(math.gcd(cn.numerator * cd.denominator, cd.numerator * cn.denominator),
              cn.denominator * cd.denominator)
    scale = 1 / joint
    if den.leading_coefficient() < 0:
        scale = -scale
    return num * scale, den * scale


def _minimal_uniformizer(num: MPoly, den: MPoly, mu):
    """Rewrite t^k as t when every exponent is a multiple of k > 1."""
    exps = set()
    for poly in (num, den):
        for mono in poly.terms:
            exps.add(mono[0])
    k = 0
    for e in exps:
        k = math.gcd(k, e)
    if k <= 1:
        return num, den, mu
    def shrink(p):
        return MPoly(p.variables, {(m[0] // k,): c for m, c in p.terms.items()})
    return shrink(num), shrink(den), (mu[0] * k, mu[1] * k)


# ----------------------------------------------------------------------
# order
# ----------------------------------------------------------------------


def branch_count(spec: FuncSpec) -> int:
    """All supported descriptions are single valued functions of u."""
    return 1


def order(spec: FuncSpec) -> OrderData:
    """The order nu: how many incongruent arguments map to a generic value.

    Computed symbolically per class and cross-checked by counting preimages of
    a random value numerically; a mismatch raises, since it signals either a
    kernel bug or a degenerate description.
    """
    if spec.cls in (FunctionClass.RATIONAL_OF_U, FunctionClass.RATIONAL_OF_EXP):
        nu = max(spec.numerator.total_degree(), spec.denominator.total_degree())
    else:
        nu = _elliptic_order(spec)
    nu_numeric = _numeric_order(spec)
    if nu_numeric != nu:
        raise AddTheoError(
            f"order mismatch: symbolic {nu} vs numeric {nu_numeric} "
            "(kernel bug or degenerate spec)"
        )
    return OrderData(nu=nu, m=branch_count(spec))


def _elliptic_order(spec: FuncSpec) -> int:
    ring = ("p", "q", "c")
    c = MPoly.var(ring, "c")
    num = spec.numerator.embed(ring)
    den = spec.denominator.embed(ring)
    a = num - c * den
    if a.degree_in("q") <= 0:
        res = a * a
    else:
        curve = curve_polynomial(spec.g2, spec.g3).embed(ring)
        res = resultant(a, curve, "q")
    # discard content independent of the generic value symbol
    coeffs = [cf for cf in res.coeffs_in("c") if not cf.is_zero()]
    content = coeffs[0]
    for cf in coeffs[1:]:
        if content.is_constant():
            break
        content = mgcd(content, cf)
    if not content.is_constant():
        res = divide_exact(res, content)
    return res.degree_in("p")


def _numeric_order(spec: FuncSpec, seed=20260808) -> int:
    rng = random.Random(seed)
    c0 = complex(rng.uniform(1.0, 2.0), rng.uniform(0.5, 1.5))
    if spec.cls in (FunctionClass.RATIONAL_OF_U, FunctionClass.RATIONAL_OF_EXP):
        name = spec.uniformizer[0]
        deg = max(spec.numerator.total_degree(), spec.denominator.total_degree())
        ncoef = [0j] * (deg + 1)
        for m, coeff in spec.numerator.terms.items():
            ncoef[m[0]] += complex(coeff)
        for m, coeff in spec.denominator.terms.items():
            ncoef[m[0]] -= c0 * complex(coeff)
        roots = np.roots(ncoef[::-1])
        count = 0
        for r in roots:
            nv = spec.numerator.evaluate({name: r})
            dv = spec.denominator.evaluate({name: r})
            if abs(nv - c0 * dv) < 1e-6 * max(1.0, abs(nv), abs(dv)):
                count += 1
        return count
    # elliptic: count curve points (p, q) with phi(p, q) = c0
    g2, g3 = complex(spec.g2), complex(spec.g3)
    ring = ("p", "q", "c")
    a = spec.numerator.embed(ring) - MPoly.var(ring, "c") * spec.denominator.embed(ring)
    if a.degree_in("q") <= 0:
        res = a * a
    else:
        curve = curve_polynomial(spec.g2, spec.g3).embed(ring)
        res = resultant(a, curve, "q")
    coeffs = res.coeffs_in("p")
    poly = [cf.evaluate({"c": c0, "q": 0.0}) for cf in coeffs]
    roots = np.roots(poly[::-1])
    count = 0
    for pv in roots:
        f = 4 * pv**3 - g2 * pv - g3
        qv = f**0.5
        for sign in (1, -1):
            nv = spec.numerator.evaluate({"p": pv, "q": sign * qv})
            dv = spec.denominator.evaluate({"p": pv, "q": sign * qv})
            if abs(nv - c0 * dv) < 1e-6 * max(1.0, abs(nv), abs(dv)):
                count += 1
                break
    return count
