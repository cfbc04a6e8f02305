"""Arithmetic and factorization for polynomials over F_q, q = p^f.

Field elements are integers in [0, q) encoding base-p digit vectors: the
element sum_i c_i t^i corresponds to sum_i c_i p^i, where t is the class of
X in F_p[X]/(modulus).  Polynomials over F_q are tuples of such integers,
ascending degree, with a nonzero last entry (the zero polynomial is ()).

Factorization is squarefree-part extraction, distinct-degree splitting via
X^(q^i) mod g, then randomized equal-degree splitting (Cantor-Zassenhaus,
trace construction in characteristic 2) driven by an explicit seed so runs
are reproducible.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import NotSquarefree, TooLarge

COUNT_GUARD = 10**7
MODULUS_NORM_GUARD = 10**4


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class SplittingType:
    """Factorization pattern (r_1, ..., r_n) of a squarefree monic polynomial:
    r_j irreducible factors of degree j.  Equivalently an S_n cycle type."""

    r: tuple

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(v) for v in self.r))
        if any(v < 0 for v in self.r):
            raise ValueError("splitting type entries must be non-negative")
        if sum((i + 1) * v for i, v in enumerate(self.r)) != len(self.r):
            raise ValueError(f"sum of i*r_i must equal n, got {self.r}")

    @property
    def n(self):
        return len(self.r)

    def __iter__(self):
        return iter(self.r)

    def __getitem__(self, i):
        return self.r[i]

    def __repr__(self):
        return f"SplittingType{self.r}"


def all_splitting_types(n: int):
    """Every (r_1, ..., r_n) with sum i*r_i = n, lexicographically."""
    out = []

    def rec(i, remaining, acc):
        if i > n:
            if remaining == 0:
                out.append(SplittingType(tuple(acc)))
            return
        for v in range(remaining // i + 1):
            rec(i + 1, remaining - i * v, acc + [v])

    rec(1, n, [])
    return sorted(out, key=lambda s: s.r)


class FqField:
    """The finite field F_q, q = p^f, as F_p[X]/(modulus)."""

    def __init__(self, p: int, f: int = 1, modulus=None):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if f < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.f = f
        self.q = p**f
        if modulus is None:
            if f == 1:
                modulus = (0, 1)
            else:
                modulus = _lex_min_irreducible(p, f)
        self.modulus = tuple(int(c) % p for c in modulus[:-1]) + (1,)
        if len(self.modulus) != f + 1:
            raise ValueError("modulus degree must equal f")
        if f > 1 and not _is_irreducible_fp(p, self.modulus):
            raise ValueError(f"modulus {self.modulus} is reducible over F_{p}")
        # reduction of t^f .. t^(2f-2) for products
        red = tuple((-c) % p for c in self.modulus[:f])
        table = []
        cur = list(red)
        table.append(tuple(cur))
        for _ in range(f - 2):
            shifted = [0] + cur[:-1]
            lead = cur[-1]
            cur = [(shifted[i] + lead * red[i]) % p for i in range(f)]
            table.append(tuple(cur))
        self._red_table = table

    # -- element codec ---------------------------------------------------------

    def _digits(self, a):
        p, f = self.p, self.f
        out = []
        for _ in range(f):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def _undigits(self, ds):
        a = 0
        for c in reversed(ds):
            a = a * self.p + c
        return a

    # -- field operations --------------------------------------------------------

    def add(self, a, b):
        p = self.p
        if self.f == 1:
            return (a + b) % p
        da, db = self._digits(a), self._digits(b)
        return self._undigits([(x + y) % p for x, y in zip(da, db)])

    def sub(self, a, b):
        p = self.p
        if self.f == 1:
            return (a - b) % p
        da, db = self._digits(a), self._digits(b)
        return self._undigits([(x - y) % p for x, y in zip(da, db)])

    def neg(self, a):
        if self.f == 1:
            return (-a) % self.p
        return self._undigits([(-x) % self.p for x in self._digits(a)])

    def mul(self, a, b):
        p, f = self.p, self.f
        if f == 1:
            return (a * b) % p
        da, db = self._digits(a), self._digits(b)
        conv = [0] * (2 * f - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    if y:
                        conv[i + j] += x * y
        out = [c % p for c in conv[:f]]
        for k in range(f, 2 * f - 1):
            ck = conv[k] % p
            if ck:
                tbl = self._red_table[k - f]
                for j in range(f):
                    out[j] = (out[j] + ck * tbl[j]) % p
        return self._undigits(out)

    def pow(self, a, e):
        acc = 1
        base = a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        return self.pow(a, self.q - 2)

    def frobenius_root(self, a):
        """p-th root: a^(q/p)."""
        return self.pow(a, self.q // self.p)

    def trace(self, a):
        """Absolute trace F_q -> F_p: sum of the Frobenius orbit."""
        acc = 0
        cur = a
        for _ in range(self.f):
            acc = self.add(acc, cur)
            cur = self.pow(cur, self.p)
        assert acc < self.p, "trace must land in the prime field"
        return acc

    def elements(self):
        return range(self.q)

    @property
    def key(self):
        return (self.p, self.f, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FqField) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        if self.f == 1:
            return f"FqField(p={self.p})"
        return f"FqField(q={self.p}^{self.f}, modulus={self.modulus})"


@lru_cache(maxsize=None)
def _lex_min_irreducible(p: int, f: int):
    """Deterministic modulus choice: the lexicographically least monic
    irreducible of degree f over F_p (by (c_0, ..., c_{f-1}))."""
    if p**f > MODULUS_NORM_GUARD:
        raise TooLarge(f"no modulus table beyond q = {MODULUS_NORM_GUARD}")
    from itertools import product
    for tail in product(range(p), repeat=f):
        cand = tuple(tail) + (1,)
        if _is_irreducible_fp(p, cand):
            return cand
    raise AssertionError("unreachable: irreducibles of every degree exist")


def _is_irreducible_fp(p, poly):
    """Rabin irreducibility test over F_p."""
    F = FqField(p, 1)
    f = len(poly) - 1
    if f == 1:
        return True
    x_poly = (0, 1)
    h = poly_powmod(F, x_poly, p**f, poly)
    if poly_sub(F, h, x_poly):
        return False
    for ell in {e for e in _prime_divisors(f)}:
        h = poly_powmod(F, x_poly, p ** (f // ell), poly)
        g = poly_gcd(F, poly_sub(F, h, x_poly), poly)
        if poly_deg(g) != 0:
            return False
    return True


def _prime_divisors(n):
    out = []
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


@lru_cache(maxsize=None)
def make_fq(q: int) -> FqField:
    """F_q with the deterministic modulus table (q = p^f <= 10^4)."""
    m = q
    p = None
    for cand in range(2, q + 1):
        if m % cand == 0:
            p = cand
            break
    f = 0
    while m > 1:
        if m % p:
            raise ValueError(f"{q} is not a prime power")
        m //= p
        f += 1
    return FqField(p, f)


# -- polynomial helpers (tuples, ascending, trailing nonzero) -------------------


def poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_deg(c):
    return len(c) - 1


def poly_add(F, a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, y in enumerate(b):
        out[i] = F.add(out[i], y)
    return poly_trim(out)


def poly_sub(F, a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, y in enumerate(b):
        out[i] = F.sub(out[i], y)
    return poly_trim(out)


def poly_mul(F, a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
    return poly_trim(out)


def poly_divmod(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    db, dlead = poly_deg(b), b[-1]
    inv_lead = F.inv(dlead)
    q = [0] * max(0, len(a) - db)
    while len(a) - 1 >= db and a:
        da = len(a) - 1
        c = F.mul(a[-1], inv_lead)
        q[da - db] = c
        for j in range(db + 1):
            a[da - db + j] = F.sub(a[da - db + j], F.mul(c, b[j]))
        while a and a[-1] == 0:
            a.pop()
    return poly_trim(q), poly_trim(a)


def poly_mod(F, a, b):
    return poly_divmod(F, a, b)[1]


def poly_monic(F, a):
    if not a or a[-1] == 1:
        return poly_trim(a)
    inv = F.inv(a[-1])
    return poly_trim([F.mul(c, inv) for c in a])


def poly_gcd(F, a, b):
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_mod(F, a, b)
    return poly_monic(F, a)


def poly_powmod(F, base, e, mod):
    acc = (1,)
    base = poly_mod(F, base, mod)
    while e:
        if e & 1:
            acc = poly_mod(F, poly_mul(F, acc, base), mod)
        base = poly_mod(F, poly_mul(F, base, base), mod)
        e >>= 1
    return acc


def poly_deriv(F, a):
    out = []
    for i in range(1, len(a)):
        out.append(F.mul(a[i], i % F.p))
    return poly_trim(out)


def poly_eval(F, a, x):
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def _pth_root_poly(F, g):
    """Inverse of the Frobenius on a polynomial with zero derivative:
    g(X) = h(X^p)^? ... g = w(X)^p recovered coefficientwise."""
    p = F.p
    out = []
    for i in range(0, len(g), p):
        out.append(F.frobenius_root(g[i]))
    return poly_trim(out)


def _ddf(F, s):
    """Distinct-degree splitting of a squarefree monic s: list of
    (product_of_factors, degree)."""
    out = []
    v = s
    h = poly_mod(F, (0, 1), v)
    i = 0
    while poly_deg(v) >= 2 * (i + 1):
        i += 1
        h = poly_powmod(F, h, F.q, v)
        d = poly_gcd(F, poly_sub(F, h, (0, 1)), v)
        if poly_deg(d) > 0:
            out.append((d, i))
            v, _ = poly_divmod(F, v, d)
            h = poly_mod(F, h, v)
    if poly_deg(v) > 0:
        out.append((v, poly_deg(v)))
    return out


def _random_poly(F, rng, max_deg):
    while True:
        c = [rng.randrange(F.q) for _ in range(max_deg + 1)]
        t = poly_trim(c)
        if poly_deg(t) >= 1:
            return t


def _edf(F, g, degree, rng):
    """Split a product of distinct irreducibles of equal degree."""
    if poly_deg(g) == degree:
        return [poly_monic(F, g)]
    out = []
    stack = [g]
    while stack:
        cur = stack.pop()
        if poly_deg(cur) == degree:
            out.append(poly_monic(F, cur))
            continue
        while True:
            h = _random_poly(F, rng, poly_deg(cur) - 1)
            if F.p == 2:
                # trace construction over F_2
                t = h
                acc = h
                steps = degree * F.f
                for _ in range(steps - 1):
                    t = poly_mod(F, poly_mul(F, t, t), cur)
                    acc = poly_add(F, acc, t)
                w = acc
            else:
                e = (F.q**degree - 1) // 2
                w = poly_sub(F, poly_powmod(F, h, e, cur), (1,))
            d = poly_gcd(F, w, cur)
            if 0 < poly_deg(d) < poly_deg(cur):
                rest, rem = poly_divmod(F, cur, d)
                assert not rem
                stack.append(d)
                stack.append(rest)
                break
    return out


def _seed_for(g, seed):
    key = seed & 0x7FFFFFFF
    for c in g:
        key = (key * 1000003 + c + 1) % (1 << 61)
    return key


def factor(F: FqField, g, seed: int = 0):
    """Full factorization of a nonzero polynomial over F_q.

    Returns a sorted list of (monic irreducible factor, multiplicity); the
    product (with the leading unit of g) reproduces g.  Randomized choices in
    equal-degree splitting are driven deterministically by seed.
    """
    g = poly_trim(g)
    if not g:
        raise ValueError("cannot factor the zero polynomial")
    rng = random.Random(_seed_for(g, seed))
    result = {}
    _factor_monic(F, poly_monic(F, g), rng, result)
    return sorted(result.items(), key=lambda kv: (poly_deg(kv[0]), kv[0]))


def _factor_monic(F, g, rng, result):
    if poly_deg(g) <= 0:
        return
    gp = poly_deriv(F, g)
    if not gp:
        # g = w(X)^p
        h = _pth_root_poly(F, g)
        sub = {}
        _factor_monic(F, h, rng, sub)
        for phi, m in sub.items():
            result[phi] = result.get(phi, 0) + m * F.p
        return
    u = poly_gcd(F, g, gp)
    s, rem = poly_divmod(F, g, u)
    assert not rem
    remainder = g
    for prod, deg in _ddf(F, poly_monic(F, s)):
        for phi in _edf(F, prod, deg, rng):
            m = 0
            while True:
                qt, r = poly_divmod(F, remainder, phi)
                if r:
                    break
                remainder = qt
                m += 1
            result[phi] = result.get(phi, 0) + m
    # remainder now holds factors whose multiplicity is divisible by p
    _factor_monic(F, poly_monic(F, remainder), rng, result)


def splitting_type(F: FqField, g, n: int, seed: int = 0) -> SplittingType:
    """Splitting type of a monic squarefree degree-n polynomial over F_q."""
    g = poly_trim(g)
    if poly_deg(g) != n or g[-1] != 1:
        raise ValueError("expected a monic polynomial of the stated degree")
    if poly_deg(poly_gcd(F, g, poly_deriv(F, g))) != 0:
        raise NotSquarefree(f"gcd(g, g') is nontrivial for {g}")
    r = [0] * n
    for phi, mult in factor(F, g, seed=seed):
        assert mult == 1
        r[poly_deg(phi) - 1] += mult
    return SplittingType(tuple(r))


@lru_cache(maxsize=None)
def count_all_types(F: FqField, n: int):
    """Exact counts of monic degree-n polynomials over F_q by splitting type,
    plus the non-squarefree remainder under the key None."""
    if F.q**n > COUNT_GUARD:
        raise TooLarge(f"q^n = {F.q**n} exceeds enumeration guard {COUNT_GUARD}")
    from itertools import product
    counts = {}
    bad = 0
    for tail in product(range(F.q), repeat=n):
        g = tuple(tail) + (1,)
        try:
            st = splitting_type(F, g, n)
        except NotSquarefree:
            bad += 1
            continue
        counts[st] = counts.get(st, 0) + 1
    counts[None] = bad
    return counts


def count_type(F: FqField, n: int, r: SplittingType) -> int:
    """|X_{n,r}| by brute-force enumeration of all monic degree-n polynomials."""
    if not isinstance(r, SplittingType):
        r = SplittingType(tuple(r))
    if r.n != n:
        raise ValueError("splitting type length must equal n")
    return count_all_types(F, n).get(r, 0)
