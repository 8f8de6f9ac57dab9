"""Polynomial factorization over the rationals.

Univariate polynomials go through the classical route: reduce modulo a good
prime, split with distinct-degree and equal-degree factorization, lift the
modular factors with linear Hensel steps past the Mignotte bound, and
recombine subsets with trial division.

Multivariate polynomials are factored as univariate in the greatest variable:
specialize the remaining variables at a point that preserves the degree and
keeps the image square-free, factor the image, lift the factors back as
truncated power series in the shifted variables, and recombine.  A generic
linear substitution first forces the leading coefficient in the main variable
to be constant, so the lifted factors stay monic.  Every candidate
factorization is certified by exact division before it is accepted.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from .errors import AddTheoError
from .poly import MPoly, divide_exact
from .resultants import squarefree
from .unipoly import (
    q_divmod as _q_divmod,
    q_gcdext as _q_gcdext,
    q_mul as _q_mul,
    q_rem as _q_rem,
    q_scale as _q_scale,
    q_trim as _q_trim,
)

Q = Fraction

_FACTOR_SEED = 0x5EED


# ----------------------------------------------------------------------
# dense arithmetic mod a prime (lists low -> high, ints in [0, p))
# ----------------------------------------------------------------------


def _p_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _p_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _p_trim([v % p for v in out])


def _p_sub(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] = (out[i] - x) % p
    return _p_trim(out)


def _p_monic(a, p):
    if not a:
        return a
    inv = pow(a[-1], p - 2, p)
    return [(x * inv) % p for x in a]


def _p_divmod(a, b, p):
    a = a[:]
    if not b:
        raise ZeroDivisionError
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        c = (a[-1] * inv) % p
        k = len(a) - len(b)
        q[k] = c
        if c:
            for j in range(len(b)):
                a[k + j] = (a[k + j] - c * b[j]) % p
        a.pop()
        _p_trim(a)
    return _p_trim(q), _p_trim(a)


def _p_rem(a, b, p):
    return _p_divmod(a, b, p)[1]


def _p_gcd(a, b, p):
    a, b = a[:], b[:]
    while b:
        a, b = b, _p_rem(a, b, p)
    return _p_monic(a, p)


def _p_powmod(base, exp, mod, p):
    result = [1]
    base = _p_rem(base, mod, p)
    while exp:
        if exp & 1:
            result = _p_rem(_p_mul(result, base, p), mod, p)
        base = _p_rem(_p_mul(base, base, p), mod, p)
        exp >>= 1
    return result


def _p_deriv(a, p):
    return _p_trim([(i * c) % p for i, c in enumerate(a)][1:])


# ----------------------------------------------------------------------
# factorization mod p
# ----------------------------------------------------------------------


def _distinct_degree(f, p):
    """Split monic square-free f mod p into (product, degree) pieces."""
    out = []
    h = [0, 1]
    x = [0, 1]
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = _p_powmod(h, p, f, p)
        g = _p_gcd(_p_sub(h, x, p), f, p)
        if len(g) > 1:
            out.append((g, d))
            f, _ = _p_divmod(f, g, p)
            h = _p_rem(h, f, p)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _equal_degree(f, d, p, rng):
    """Cantor-Zassenhaus split of a product of degree-d irreducibles."""
    n = len(f) - 1
    if n == d:
        return [f]
    exponent = (p**d - 1) // 2
    while True:
        a = [rng.randrange(p) for _ in range(n)]
        a = _p_trim(a)
        if len(a) <= 1:
            continue
        g = _p_gcd(a, f, p)
        if 1 < len(g) < len(f):
            left, right = g, _p_divmod(f, g, p)[0]
        else:
            t = _p_powmod(a, exponent, f, p)
            t = _p_sub(t, [1], p)
            g = _p_gcd(t, f, p)
            if not (1 < len(g) < len(f)):
                continue
            left, right = g, _p_divmod(f, g, p)[0]
        return _equal_degree(left, d, p, rng) + _equal_degree(right, d, p, rng)


def _factor_mod_p(f, p, seed):
    """Monic square-free f mod p -> list of monic irreducible factors."""
    rng = random.Random(f"{seed}:{p}:{len(f)}")
    out = []
    for part, d in _distinct_degree(f, p):
        out.extend(_equal_degree(part, d, p, rng))
    out.sort()
    return out


# ----------------------------------------------------------------------
# univariate factorization over Z / Q
# ----------------------------------------------------------------------


def _primes(start=3):
    n = start
    while True:
        for d in range(2, int(math.isqrt(n)) + 1):
            if n % d == 0:
                break
        else:
            yield n
        n += 2


def _choose_prime(f):
    lc = f[-1]
    for p in _primes():
        if p > 50000:
            raise AddTheoError("no suitable prime found for factorization")
        if lc % p == 0:
            continue
        fp = _p_trim([c % p for c in f])
        if len(fp) != len(f):
            continue
        if len(_p_gcd(fp, _p_deriv(fp, p), p)) == 1:
            return p


def _hensel_lift(f, factors, p, bound):
    """Lift f = lc * prod(factors) from mod p to mod p^k >= bound (linear)."""
    lc = f[-1]
    k = 1
    modulus = p
    while modulus < bound:
        k += 1
        modulus *= p
    # Bezout data mod p: sigma_i = (prod_{j != i} g_j)^{-1} mod (g_i, p)
    sigmas = []
    for i, gi in enumerate(factors):
        others = [1]
        for j, gj in enumerate(factors):
            if j != i:
                others = _p_rem(_p_mul(others, gj, p), gi, p)
        g, s, _ = _pp_gcdext(others, gi, p)
        if len(g) != 1:
            raise AddTheoError("modular factors are not coprime")
        inv_g = pow(g[0], p - 2, p)
        sigmas.append(_p_rem([(c * inv_g) % p for c in s], gi, p))
    lc_inv = pow(lc % p, p - 2, p)
    lifted = [g[:] for g in factors]
    current = p
    for _ in range(k - 1):
        nxt = current * p
        prod = [lc % nxt]
        for g in lifted:
            prod = [v % nxt for v in _z_mul(prod, g)]
        err = _z_sub(f, prod)
        err = [(c % nxt) for c in err]
        # center first so the division by the current modulus is exact
        if any(_center(c, nxt) % current for c in err):
            raise AddTheoError("hensel lift lost divisibility")
        e_over = _p_trim([(_center(c, nxt) // current) % p for c in err])
        for i, gi in enumerate(lifted):
            gi_p = _p_trim([c % p for c in gi])
            delta = _p_rem(_p_mul(_p_mul(e_over, [lc_inv], p), sigmas[i], p), gi_p, p)
            for j, dc in enumerate(delta):
                dc = _center(dc, p)
                gi[j] = (gi[j] + current * dc) % nxt
        current = nxt
    return lifted, current


def _pp_gcdext(a, b, p):
    r0, r1 = a[:], b[:]
    s0, s1 = [1], []
    while r1:
        quo, rem = _p_divmod(r0, r1, p)
        r0, r1 = r1, rem
        s0, s1 = s1, _p_sub(s0, _p_mul(quo, s1, p), p)
    return r0, s0, None


def _z_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _z_sub(a, b):
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] -= x
    return out


def _center(c, m):
    c %= m
    if c > m // 2:
        c -= m
    return c


def _z_content(f):
    g = 0
    for c in f:
        g = math.gcd(g, abs(c))
    return g or 1


def _z_primitive(f):
    g = _z_content(f)
    sign = -1 if f[-1] < 0 else 1
    return [c * sign // g for c in f]


def factor_univariate_q(coeffs, seed=_FACTOR_SEED):
    """Factor a square-free univariate polynomial with Fraction coefficients.

    Returns primitive integer-coefficient irreducible factors (low to high,
    positive leading coefficient); the rational scalar is dropped.
    """
    den = 1
    for c in coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    f = [int(c * den) for c in coeffs]
    f = _z_primitive(f)
    n = len(f) - 1
    if n <= 0:
        return []
    if n == 1:
        return [f]
    p = _choose_prime(f)
    fp = _p_monic(_p_trim([c % p for c in f]), p)
    modular = _factor_mod_p(fp, p, seed)
    if len(modular) == 1:
        return [f]
    height = max(abs(c) for c in f)
    mignotte = math.isqrt(n + 1) + 1
    bound = 2 * mignotte * (2**n) * height * abs(f[-1]) + 1
    lifted, modulus = _hensel_lift(f, modular, p, bound)
    return _recombine(f, lifted, modulus)


def _recombine(f, lifted, modulus):
    out = []
    remaining = f[:]
    idxs = list(range(len(lifted)))
    size = 1
    while 2 * size <= len(idxs):
        found = False
        for subset in itertools.combinations(idxs, size):
            cand = [remaining[-1] % modulus]
            for i in subset:
                cand = [v % modulus for v in _z_mul(cand, lifted[i])]
            cand = [_center(c, modulus) for c in cand]
            cand = _z_primitive(_p_trim(cand) or [1])
            if len(cand) - 1 < 1:
                continue
            quo, rem = _q_divmod([Q(c) for c in remaining], [Q(c) for c in cand])
            if not rem and all(c.denominator == 1 for c in quo):
                out.append(cand)
                remaining = _z_primitive([int(c) for c in quo])
                idxs = [i for i in idxs if i not in subset]
                found = True
                break
        if not found:
            size += 1
    if len(remaining) > 1:
        out.append(_z_primitive(remaining))
    return out


# ----------------------------------------------------------------------
# multivariate factorization
# ----------------------------------------------------------------------


def _occurring(p: MPoly):
    return [v for v in p.variables if p.uses(v)]


def _uni_coeffs(p: MPoly, name: str):
    out = []
    for c in p.coeffs_in(name):
        if not c.is_constant():
            raise AddTheoError("polynomial is not univariate")
        out.append(c.constant_value())
    return out


def _uni_to_mpoly(coeffs, variables, name):
    return MPoly.from_coeffs(variables, name, [Q(c) for c in coeffs])


def _is_squarefree_uni(coeffs):
    d = _q_trim([i * c for i, c in enumerate(coeffs)][1:])
    g, _, _ = _q_gcdext(coeffs, d)
    return len(g) == 1


def _point_candidates(names, rng):
    """Deterministic stream of small, diverse specialization points."""
    yield {n: Q(0) for n in names}
    i = 0
    while True:
        span = 3 + i // 12
        yield {n: Q(rng.randint(-span, span)) for n in names}
        i += 1


def _others_degree(p: MPoly, main_idx: int) -> int:
    if p.is_zero():
        return -1
    return max(sum(m) - m[main_idx] for m in p.terms)


def _mul_trunc(a: MPoly, b: MPoly, main_idx: int, bound: int) -> MPoly:
    """Product with terms of others-degree > bound dropped."""
    res = {}
    for m1, c1 in a.terms.items():
        d1 = sum(m1) - m1[main_idx]
        if d1 > bound:
            continue
        for m2, c2 in b.terms.items():
            if d1 + sum(m2) - m2[main_idx] > bound:
                continue
            m = tuple(e1 + e2 for e1, e2 in zip(m1, m2))
            s = res.get(m)
            if s is None:
                res[m] = c1 * c2
            else:
                s = s + c1 * c2
                if s:
                    res[m] = s
                else:
                    del res[m]
    return MPoly(a.variables, res, _clean=False)


def factor(p: MPoly, seed=_FACTOR_SEED):
    """Complete factorization into canonical irreducibles over Q.

    Returns a list of (irreducible, multiplicity); the rational scalar is
    dropped, so the product of the factors equals canonicalize(p).
    """
    if p.is_zero() or p.is_constant():
        raise AddTheoError("factorization needs a non-constant input")
    out = []
    for sf, mult in squarefree(p):
        for irr in _factor_squarefree(sf, seed):
            out.append((irr, mult))
    out.sort(key=lambda fm: fm[0].sort_key())
    merged = []
    for f, m in out:
        if merged and merged[-1][0] == f:
            merged[-1] = (f, merged[-1][1] + m)
        else:
            merged.append((f, m))
    return merged


def is_irreducible(p: MPoly, seed=_FACTOR_SEED) -> bool:
    fs = factor(p, seed)
    return len(fs) == 1 and fs[0][1] == 1


def _factor_squarefree(g: MPoly, seed=_FACTOR_SEED):
    g = g.canonicalize()
    occ = _occurring(g)
    if not occ:
        raise AddTheoError("constant slipped into factorization")
    if len(occ) == 1:
        name = occ[0]
        factors = factor_univariate_q(_uni_coeffs(g, name), seed)
        return [
            _uni_to_mpoly(f, g.variables, name).canonicalize() for f in factors
        ]
    main = occ[-1]
    main_idx = g.variables.index(main)
    others = occ[:-1]
    rng = random.Random(f"{seed}:multivar:{len(g.terms)}")

    for attempt in range(24):
        work, undo_shear = _shear_to_constant_lc(g, main, others, attempt)
        if work is None:
            continue
        found = _try_factor_monic(work, main, main_idx, others, rng, seed)
        if found is None:
            continue
        result = []
        for f in found:
            f = undo_shear(f)
            result.append(f.canonicalize())
        prod = MPoly.const(g.variables, 1)
        for f in result:
            prod = prod * f
        if prod.canonicalize() == g:
            result.sort(key=lambda q: q.sort_key())
            return result
    raise AddTheoError("multivariate factorization did not converge")


def _shear_to_constant_lc(g: MPoly, main, others, attempt):
    """Substitute w -> w + r*main until the main leading coefficient is
    constant; returns the substituted polynomial and the inverse map."""
    lc = g.coeffs_in(main)[-1]
    if lc.is_constant():
        return g, lambda f: f
    rng = random.Random(f"shear:{attempt}")
    shears = {w: rng.randint(1, 3 + attempt) for w in others}
    main_var = MPoly.var(g.variables, main)
    fwd = {w: MPoly.var(g.variables, w) + shears[w] * main_var for w in others}
    work = g.substitute(fwd)
    if not work.coeffs_in(main)[-1].is_constant():
        return None, None
    back = {w: MPoly.var(g.variables, w) - shears[w] * main_var for w in others}

    def undo(f):
        return f.substitute(back)

    return work, undo


def _try_factor_monic(work: MPoly, main, main_idx, others, rng, seed):
    """Factor a polynomial whose main-variable leading coefficient is
    constant.  Returns non-constant factors of `work`, or None to retry."""
    n = work.degree_in(main)
    lc = work.coeffs_in(main)[-1].constant_value()
    monic = work * (1 / lc)
    for point in itertools.islice(_point_candidates(others, rng), 60):
        image = monic.substitute({w: point[w] for w in others})
        coeffs = _uni_coeffs(image, main)
        if len(coeffs) - 1 != n:
            continue
        if not _is_squarefree_uni(coeffs):
            continue
        base_factors = factor_univariate_q(coeffs, seed)
        if len(base_factors) == 1:
            return [work]
        shift = {w: MPoly.var(work.variables, w) + point[w] for w in others}
        unshift = {w: MPoly.var(work.variables, w) - point[w] for w in others}
        shifted = monic.substitute(shift)
        prec = _others_degree(shifted, main_idx)
        lifted = _lift_factors(shifted, base_factors, main, main_idx, prec)
        if lifted is None:
            continue
        combos = _recombine_multivar(shifted, lifted, main_idx, prec)
        if combos is None:
            continue
        return [f.substitute(unshift) for f in combos]
    return None


def _lift_factors(shifted: MPoly, base_factors, main, main_idx, prec):
    """Hensel lift monic univariate factors to truncated series factors."""
    variables = shifted.variables
    monics = []
    for f in base_factors:
        inv = Q(1) / Q(f[-1])
        monics.append([Q(c) * inv for c in f])
    sigmas = []
    for i, gi in enumerate(monics):
        others_prod = [Q(1)]
        for j, gj in enumerate(monics):
            if j != i:
                others_prod = _q_rem(_q_mul(others_prod, gj), gi)
        g, s, _ = _q_gcdext(others_prod, gi)
        if len(g) != 1:
            return None
        sigmas.append(_q_rem(_q_scale(s, 1 / g[0]), gi))
    lifted = [_uni_to_mpoly(m, variables, main) for m in monics]
    for level in range(1, prec + 1):
        prod = MPoly.const(variables, 1)
        for f in lifted:
            prod = _mul_trunc(prod, f, main_idx, level)
        err = shifted - prod
        groups = {}
        for m, c in err.terms.items():
            d = sum(m) - m[main_idx]
            if d != level:
                continue
            key = m[:main_idx] + (0,) + m[main_idx + 1 :]
            groups.setdefault(key, {})[m[main_idx]] = c
        for key, bucket in groups.items():
            e = [bucket.get(k, Q(0)) for k in range(max(bucket) + 1)]
            for i, gi in enumerate(monics):
                delta = _q_rem(_q_mul(e, sigmas[i]), gi)
                if not delta:
                    continue
                add = {}
                for deg, c in enumerate(delta):
                    if c:
                        mono = key[:main_idx] + (deg,) + key[main_idx + 1 :]
                        add[mono] = c
                lifted[i] = lifted[i] + MPoly(variables, add, _clean=False)
    return lifted


def _recombine_multivar(shifted: MPoly, lifted, main_idx, prec):
    out = []
    remaining = shifted
    idxs = list(range(len(lifted)))
    size = 1
    while 2 * size <= len(idxs):
        found = False
        for subset in itertools.combinations(idxs, size):
            cand = MPoly.const(shifted.variables, 1)
            for i in subset:
                cand = _mul_trunc(cand, lifted[i], main_idx, prec)
            quo = divide_exact(remaining, cand)
            if quo is not None:
                out.append(cand)
                remaining = quo
                idxs = [i for i in idxs if i not in subset]
                found = True
                break
        if not found:
            size += 1
    if remaining.is_constant():
        if not out:
            return None
    else:
        out.append(remaining)
    return out
