"""Frobenius splitting-type statistics over a census population and a numeric
check of the large-sieve inequality.

pi_{f,r}(x) counts unramified primes of norm <= x where f reduces to a
squarefree polynomial of splitting type r; deviations are measured against
delta(r) * pi_K(x).  Non-squarefree or ramified reductions never contribute a
splitting type and are tallied separately.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from . import census as census_mod
from . import densities, primes
from .errors import TooLarge
from .ffpoly import SplittingType, poly_deg, poly_eval, poly_gcd, poly_trim
from .ofield import NumberField, OPoly

LARGE_SIEVE_NORM_GUARD = 64
LARGE_SIEVE_POP_GUARD = 10**5
SELBERG_GUARD = 10**6


def default_x(K: NumberField, N: int) -> int:
    """The x ~ N^(d/2) cutoff policy used throughout the sieve experiments."""
    return max(2, math.ceil(N ** (K.degree / 2)))


def _unramified_upto(K: NumberField, x: int):
    return [P for P in primes.prime_ideals_upto(K, int(x)) if P.unramified]


def pi_f_r(f: OPoly, r, x) -> int:
    """Number of unramified primes of norm <= x where f mod P is squarefree
    of splitting type r."""
    if not isinstance(r, SplittingType):
        r = SplittingType(tuple(r))
    count = 0
    for P in _unramified_upto(f.field, x):
        if primes.reduction_type(f, P) == r:
            count += 1
    return count


def pi_f_breakdown(f: OPoly, x):
    """(counts by splitting type, number of norm <= x primes contributing no
    type: ramified in K or non-squarefree reduction)."""
    counts = {}
    bad = 0
    for P in primes.prime_ideals_upto(f.field, int(x)):
        if not P.unramified:
            bad += 1
            continue
        st = primes.reduction_type(f, P)
        if st is None:
            bad += 1
        else:
            counts[st] = counts.get(st, 0) + 1
    return counts, bad


def _root_count(F, g) -> int:
    """Distinct roots of g in F_q, independent of the factorization path."""
    if F.q <= 512:
        return sum(1 for a in range(F.q) if poly_eval(F, g, a) == 0)
    # gcd with X^q - X via modular exponentiation
    from .ffpoly import poly_powmod, poly_sub
    xq = poly_powmod(F, (0, 1), F.q, g)
    return poly_deg(poly_gcd(F, poly_sub(F, xq, (0, 1)), g))


def pi_f(f: OPoly, x) -> int:
    """Sum over unramified primes of norm <= x, with squarefree reduction, of
    the number of roots of f in the residue field."""
    total = 0
    F = None
    for P in _unramified_upto(f.field, x):
        if primes.reduction_type(f, P) is None:
            continue
        F = primes.residue_field(P)
        total += _root_count(F, primes.reduce_poly(f, P))
    return total


@dataclass
class DeviationReport:
    field_label: str
    n: int
    N: int
    x: int
    r: tuple
    population: int
    pi_K: int
    delta_r: Fraction
    sum_sq: Fraction
    ratio: float
    exceptional_count: int
    exceptional_threshold: float
    rows: list = dataclass_field(default_factory=list)

    def to_dict(self):
        return {
            "field": self.field_label,
            "n": self.n,
            "N": self.N,
            "x": self.x,
            "r": list(self.r),
            "population": self.population,
            "pi_K": self.pi_K,
            "delta_r": [self.delta_r.numerator, self.delta_r.denominator],
            "sum_sq": float(self.sum_sq),
            "ratio": self.ratio,
            "exceptional_count": self.exceptional_count,
            "exceptional_threshold": self.exceptional_threshold,
        }


def _deviation_fold(spec, part, num_parts, r, x, keep_rows):
    K = spec.field
    pk = primes.pi_K(K, x)
    expected = densities.delta_r(r).value * pk
    unram = _unramified_upto(K, x)
    threshold = math.sqrt(x) * math.log(x) if x > 1 else 0.0
    sum_sq = Fraction(0)
    exceptional = 0
    rows = []
    for f in census_mod.enumerate_polys(spec, part=part, num_parts=num_parts):
        cnt = 0
        for P in unram:
            if primes.reduction_type(f, P) == r:
                cnt += 1
        D = cnt - expected
        sum_sq += D * D
        if abs(D) > threshold:
            exceptional += 1
        if keep_rows:
            rows.append((f.coord_rows(), cnt, float(D)))
    return sum_sq, exceptional, rows


def deviation_sweep(spec: census_mod.CensusSpec, r, x,
                    keep_rows: bool = False, workers: int = 1) -> DeviationReport:
    """Exact deviations D_f = pi_{f,r}(x) - delta(r) pi_K(x) for every f.

    Reports the mean-square ratio sum D_f^2 / (N^{nd} pi_K(x)) and the count
    of |D_f| > sqrt(x) log x exceptions.  Per-polynomial work is independent;
    partitions merge by summation.
    """
    if not isinstance(r, SplittingType):
        r = SplittingType(tuple(r))
    K = spec.field
    x = int(x)
    pk = primes.pi_K(K, x)
    delta = densities.delta_r(r).value
    threshold = math.sqrt(x) * math.log(x) if x > 1 else 0.0
    parts = census_mod.fold_partitions(_deviation_fold, spec, workers=workers,
                                       extra=(r, x, keep_rows))
    sum_sq = sum((p[0] for p in parts), Fraction(0))
    exceptional = sum(p[1] for p in parts)
    rows = [row for p in parts for row in p[2]]
    norm = spec.N ** (spec.n * K.degree) * pk
    ratio = float(sum_sq / norm) if norm else float("inf")
    return DeviationReport(
        field_label=K.label, n=spec.n, N=spec.N, x=x, r=r.r,
        population=spec.population, pi_K=pk, delta_r=delta,
        sum_sq=sum_sq, ratio=ratio, exceptional_count=exceptional,
        exceptional_threshold=threshold, rows=rows)


@dataclass
class AvoidanceReport:
    field_label: str
    n: int
    N: int
    x: int
    R: list
    E: int
    population: int

    def to_dict(self):
        return {
            "field": self.field_label,
            "n": self.n,
            "N": self.N,
            "x": self.x,
            "R": [list(r) for r in self.R],
            "E": self.E,
            "population": self.population,
        }


def avoidance(spec: census_mod.CensusSpec, R, x) -> AvoidanceReport:
    """E_R(N): polynomials showing no splitting type from R modulo any
    unramified prime of norm <= x."""
    Rset = {r if isinstance(r, SplittingType) else SplittingType(tuple(r))
            for r in R}
    K = spec.field
    unram = _unramified_upto(K, x)
    count = 0
    for f in census_mod.enumerate_polys(spec):
        for P in unram:
            if primes.reduction_type(f, P) in Rset:
                break
        else:
            count += 1
    return AvoidanceReport(field_label=K.label, n=spec.n, N=spec.N, x=int(x),
                           R=sorted(r.r for r in Rset), E=count,
                           population=spec.population)


def selberg_sum(K: NumberField, gamma, t, x):
    """Sum of gamma^omega(a) over squarefree ideals of norm <= x whose prime
    factors all have norm >= t.  Exact when gamma is rational."""
    x = int(x)
    if x > SELBERG_GUARD:
        raise TooLarge(f"selberg sum capped at x = {SELBERG_GUARD}")
    gamma = Fraction(gamma)
    norms = [P.norm for P in primes.prime_ideals_upto(K, x) if P.norm >= t]
    norms.sort()
    total = Fraction(0)

    def rec(idx, cap, weight):
        nonlocal total
        total += weight
        for i in range(idx, len(norms)):
            q = norms[i]
            if q > cap:
                break
            rec(i + 1, cap // q, weight * gamma)

    rec(0, x, Fraction(1))
    return total


# -- large sieve -------------------------------------------------------------------


@lru_cache(maxsize=None)
def _character_table(F_key, p, f, modulus):
    """chi[a][u] = e(Tr(a*u)/p) for the additive characters of F_q."""
    from .ffpoly import FqField
    F = FqField(p, f, modulus=modulus)
    q = F.q
    tau = 2.0 * math.pi
    traces = [[F.trace(F.mul(a, u)) for u in range(q)] for a in range(q)]
    return [[cmath.exp(1j * tau * traces[a][u] / p) for u in range(q)]
            for a in range(q)]


@dataclass
class LargeSieveReport:
    field_label: str
    n: int
    N: int
    x: int
    trials: int
    seed: int
    max_ratio: float
    mean_ratio: float
    bound_constant: float

    def to_dict(self):
        return {
            "field": self.field_label, "n": self.n, "N": self.N, "x": self.x,
            "trials": self.trials, "seed": self.seed,
            "max_ratio": self.max_ratio, "mean_ratio": self.mean_ratio,
            "bound_constant": self.bound_constant,
        }


def large_sieve_check(K: NumberField, n: int, N: int, x: int, trials: int,
                      seed: int, weights=None) -> LargeSieveReport:
    """Brute-force the character sums of the sieve inequality.

    For weights c on {xi in O_K^n : H(xi) <= N} computes
    sum_{q_P <= x} sum_{sigma proper mod P} |S(sigma)|^2 and the ratio
    against (N^{nd} + x^{2n}) * sum |c|^2; reports the max over trials.
    """
    d = K.degree
    pop = (2 * N + 1) ** (n * d)
    if pop > LARGE_SIEVE_POP_GUARD:
        raise TooLarge(f"weight population {pop} exceeds guard")
    plist = primes.prime_ideals_upto(K, int(x))
    if any(P.norm > LARGE_SIEVE_NORM_GUARD for P in plist):
        raise TooLarge(f"character brute force capped at norm "
                       f"{LARGE_SIEVE_NORM_GUARD}")

    # residue classes of each xi per prime
    xi_coords = list(product(range(-N, N + 1), repeat=n * d))
    classes = []
    for P in plist:
        pows = primes._theta_image_powers(K, P)
        F = primes.residue_field(P)
        cls = []
        for flat in xi_coords:
            key = 0
            mult = 1
            for block in range(n):
                coords = flat[block * d:(block + 1) * d]
                acc = 0
                for k, c in enumerate(coords):
                    c %= P.p
                    if c:
                        acc = F.add(acc, F.mul(c, pows[k]))
                key += acc * mult
                mult *= F.q
            cls.append(key)
        classes.append((P, np.asarray(cls)))

    rng = np.random.default_rng(seed)
    denom_const = N ** (n * d) + x ** (2 * n)
    ratios = []
    for trial in range(trials):
        if weights is not None:
            c = np.asarray(weights, dtype=complex)
        else:
            c = rng.standard_normal(len(xi_coords)) \
                + 1j * rng.standard_normal(len(xi_coords))
        c_norm = float(np.sum(np.abs(c) ** 2))
        total = 0.0
        for P, cls in classes:
            F = primes.residue_field(P)
            qn = F.q ** n
            W = np.zeros(qn, dtype=complex)
            np.add.at(W, cls, c)
            chi = _character_table(F.key, P.p, P.f, F.modulus)
            # proper characters mod P: all nontrivial additive characters
            for a_vec in product(range(F.q), repeat=n):
                if all(a == 0 for a in a_vec):
                    continue
                S = 0.0 + 0.0j
                for key in range(qn):
                    w = W[key]
                    if w == 0:
                        continue
                    val = 1.0 + 0.0j
                    kk = key
                    for a in a_vec:
                        u = kk % F.q
                        kk //= F.q
                        val *= chi[a][u]
                    S += w * val
                total += abs(S) ** 2
        ratios.append(total / (denom_const * c_norm) if c_norm else 0.0)
        if weights is not None:
            break
    return LargeSieveReport(
        field_label=K.label, n=n, N=N, x=int(x), trials=len(ratios),
        seed=seed, max_ratio=max(ratios), mean_ratio=sum(ratios) / len(ratios),
        bound_constant=denom_const)
