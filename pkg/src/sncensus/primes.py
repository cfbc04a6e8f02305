"""Prime ideals of O_K, residue-field reduction, prime and ideal counting.

Under the monogenic restriction the splitting of a rational prime p follows
the factorization of the defining polynomial mod p (Dedekind): each
irreducible factor g of degree f gives a prime ideal (p, g(theta)) of norm
p^f with ramification index the multiplicity of g.

Primes above p | disc are enumerated but flagged; all splitting-type
statistics exclude them.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import ffpoly
from .errors import NotSquarefree, TooLarge
from .ofield import NumberField, OPoly

IDEAL_COUNT_GUARD = 10**7


def sieve_primes(x: int):
    """All rational primes <= x."""
    if x < 2:
        return []
    sieve = bytearray(b"\x01") * (x + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, int(x**0.5) + 1):
        if sieve[p]:
            start = p * p
            sieve[start:x + 1:p] = b"\x00" * ((x - start) // p + 1)
    return [i for i, v in enumerate(sieve) if v]


@dataclass(frozen=True)
class PrimeIdeal:
    """A prime of O_K above p with local factor g: the ideal (p, g(theta))."""

    p: int
    local_factor: tuple  # monic irreducible over F_p, ascending coefficients
    e: int
    f: int
    norm: int
    divides_disc: bool

    @property
    def unramified(self):
        return self.e == 1 and not self.divides_disc

    def __repr__(self):
        return (f"PrimeIdeal(p={self.p}, f={self.f}, e={self.e}, "
                f"norm={self.norm})")


@lru_cache(maxsize=None)
def primes_above(K: NumberField, p: int):
    """Dedekind splitting of p in O_K, sorted by (norm, local factor)."""
    Fp = ffpoly.FqField(p)
    reduced = ffpoly.poly_trim(tuple(c % p for c in K.defining_poly))
    # The defining polynomial is monic, so the reduction keeps full degree.
    assert ffpoly.poly_deg(reduced) == K.degree
    divides = (K.disc % p == 0)
    out = []
    for g, mult in ffpoly.factor(Fp, reduced):
        deg = ffpoly.poly_deg(g)
        out.append(PrimeIdeal(p=p, local_factor=g, e=mult, f=deg,
                              norm=p**deg, divides_disc=divides))
    assert sum(P.e * P.f for P in out) == K.degree
    return sorted(out, key=lambda P: (P.norm, P.local_factor))


@lru_cache(maxsize=None)
def prime_ideals_upto(K: NumberField, x: int):
    """All prime ideals with norm <= x, sorted by (norm, p, local factor)."""
    out = []
    for p in sieve_primes(int(x)):
        for P in primes_above(K, p):
            if P.norm <= x:
                out.append(P)
    return sorted(out, key=lambda P: (P.norm, P.p, P.local_factor))


def pi_K(K: NumberField, x) -> int:
    """Number of prime ideals of norm <= x (all e and f)."""
    return len(prime_ideals_upto(K, int(x)))


@lru_cache(maxsize=None)
def residue_field(P: PrimeIdeal) -> ffpoly.FqField:
    return ffpoly.FqField(P.p, P.f, modulus=P.local_factor)


@lru_cache(maxsize=None)
def _theta_image_powers(K: NumberField, P: PrimeIdeal):
    """Powers theta^k mod P for k = 0..d-1, as residue-field elements."""
    F = residue_field(P)
    if P.f == 1:
        img = (-P.local_factor[0]) % P.p
    else:
        img = P.p  # encodes t, the class of X in F_p[X]/(local_factor)
    pows = [1]
    for _ in range(K.degree - 1):
        pows.append(F.mul(pows[-1], img))
    return tuple(pows)


def reduce_elem(K: NumberField, P: PrimeIdeal, coords):
    F = residue_field(P)
    pows = _theta_image_powers(K, P)
    acc = 0
    for k, c in enumerate(coords):
        c %= P.p
        if c:
            acc = F.add(acc, F.mul(c, pows[k]))
    return acc


def reduce_poly(f: OPoly, P: PrimeIdeal):
    """Coefficientwise reduction O_K[X] -> F_{q_P}[X]; monic of the same degree."""
    K = f.field
    out = [reduce_elem(K, P, c.coords) for c in f.coeffs]
    out.append(1)
    return tuple(out)


_TYPE_CACHE = {}


def reduction_type(f: OPoly, P: PrimeIdeal):
    """Splitting type of f mod P, or None when the reduction is not squarefree.

    Reductions repeat heavily across a census sweep, so results are cached
    per (field, prime, degree) keyed by the reduced coefficient tuple.
    """
    K = f.field
    n = f.degree
    cache = _TYPE_CACHE.setdefault((K.key, P, n), {})
    reduced = reduce_poly(f, P)
    hit = cache.get(reduced, _TYPE_CACHE)
    if hit is not _TYPE_CACHE:
        return hit
    F = residue_field(P)
    try:
        st = ffpoly.splitting_type(F, reduced, n)
    except NotSquarefree:
        st = None
    cache[reduced] = st
    return st


class IdealCounter:
    """a_K(m) = number of ideals of O_K of norm m, for m <= x."""

    def __init__(self, K: NumberField, x: int, counts):
        self.K = K
        self.x = x
        self.counts = counts  # numpy array, index by norm; counts[0] unused

    def a(self, m: int) -> int:
        return int(self.counts[m])

    def cumulative(self):
        return np.cumsum(self.counts)

    def total(self) -> int:
        return int(self.counts.sum())


def ideal_counts(K: NumberField, x: int) -> IdealCounter:
    """Exact multiplicative sieve over prime-ideal norms up to x."""
    x = int(x)
    if x > IDEAL_COUNT_GUARD:
        raise TooLarge(f"ideal counting capped at {IDEAL_COUNT_GUARD}")
    a = np.zeros(x + 1, dtype=np.int64)
    if x >= 1:
        a[1] = 1
    sqrt_x = int(x**0.5)
    for P in prime_ideals_upto(K, x):
        q = P.norm
        if q > sqrt_x:
            # single power contributes; numpy buffers overlapping operands
            a[q::q] += a[1:x // q + 1]
        else:
            orig = a.copy()
            qj = q
            while qj <= x:
                a[qj::qj] += orig[1:x // qj + 1]
                qj *= q
    return IdealCounter(K, x, a)
