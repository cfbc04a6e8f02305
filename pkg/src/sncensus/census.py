"""Exhaustive enumeration of the height-bounded monic polynomial population
and its exact counting functions: rho_k, rho, T-counts and L-counts.

Enumeration is lexicographic over the flat coordinate vector with the lowest
coefficient varying fastest, so sweeps are reproducible and partitionable by
the leading coordinate.  Reducibility is decided by exact divisor search with
proven coefficient boxes; residue-field irreducibility witnesses are used
only as a pre-filter.

For K = Q and n <= 3 the counts have closed inclusion-exclusion forms over
candidate roots; those fast paths are exact and are cross-checked against the
exhaustive search in the test suite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache
from itertools import product

import numpy as np

from . import primes
from .errors import TooLarge
from .ofield import (NumberField, OElem, OPoly, embedding_root_bounds,
                     opoly_divmod_monic)

ENUMERATION_GUARD = 10**9
EXHAUSTIVE_RHO_GUARD = 2 * 10**6
FACTOR_SEARCH_GUARD = 2 * 10**6
PREFILTER_PRIME_COUNT = 6


@dataclass(frozen=True)
class CensusSpec:
    field: NumberField
    n: int
    N: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("polynomial degree must be >= 1")
        if self.N < 0:
            raise ValueError("height bound must be >= 0")

    @property
    def population(self) -> int:
        return (2 * self.N + 1) ** (self.n * self.field.degree)

    def guard(self, limit=ENUMERATION_GUARD):
        if self.population > limit:
            raise TooLarge(
                f"population (2N+1)^(nd) = {self.population} exceeds guard {limit}")


@dataclass
class CensusReport:
    spec_label: str
    field_label: str
    basis: list
    n: int
    N: int
    total: int
    rho_k: dict
    rho: int | None
    T_table: dict
    L_table: dict
    meta: dict = dataclass_field(default_factory=dict)

    def to_dict(self):
        return {
            "spec": self.spec_label,
            "field": self.field_label,
            "basis": self.basis,
            "n": self.n,
            "N": self.N,
            "total": self.total,
            "rho_k": {str(k): v for k, v in sorted(self.rho_k.items())},
            "rho": self.rho,
            "T_table": {k: v for k, v in sorted(self.T_table.items())},
            "L_table": {k: v for k, v in sorted(self.L_table.items())},
            "meta": self.meta,
        }


# -- enumeration -----------------------------------------------------------------


def enumerate_polys(spec: CensusSpec, part: int | None = None,
                    num_parts: int = 1):
    """Yield every monic degree-n polynomial of height <= N exactly once.

    Order is lexicographic over the flat coordinate vector (alpha_0 first
    coordinate fastest).  With part/num_parts the slowest coordinate range is
    split into contiguous chunks; chunk concatenation reproduces the full
    sweep.
    """
    spec.guard()
    K = spec.field
    d = K.degree
    nd = spec.n * d
    N = spec.N
    rng = range(-N, N + 1)
    if nd == 0:
        return
    if part is None:
        lead_values = rng
    else:
        if not 0 <= part < num_parts:
            raise ValueError("partition index out of range")
        values = list(rng)
        chunk = math.ceil(len(values) / num_parts)
        lead_values = values[part * chunk:(part + 1) * chunk]
    for lead in lead_values:
        for rest in product(rng, repeat=nd - 1):
            vec = rest[::-1] + (lead,)
            coeffs = [K.element(vec[i * d:(i + 1) * d])
                      for i in range(spec.n)]
            yield OPoly(K, coeffs)


def fold_partitions(fold, spec: CensusSpec, workers: int = 1,
                    num_parts: int | None = None, extra=()):
    """Run fold(spec, part, num_parts, *extra) over enumeration partitions.

    Partition results must merge associatively and commutatively; callers get
    the list in partition order, so identical results are guaranteed for any
    worker count.  workers > 1 uses a process pool.
    """
    if num_parts is None:
        num_parts = max(1, workers)
    args = [(spec, i, num_parts, *extra) for i in range(num_parts)]
    if workers <= 1:
        return [fold(*a) for a in args]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fold, *zip(*args)))


# -- integer interval helpers (exact) ----------------------------------------------


_EMPTY = (1, 0)


def _constrain(lo, hi, u, v, N):
    """Intersect integer interval [lo, hi] with {b : |u + v*b| <= N}.

    lo/hi may be None for unbounded; returns the canonical empty interval
    (1, 0) when infeasible.
    """
    if v == 0:
        return (lo, hi) if abs(u) <= N else _EMPTY
    a, b = -N - u, N - u
    if v > 0:
        nlo = -((-a) // v)
        nhi = b // v
    else:
        nlo = -((-b) // v)
        nhi = a // v
    if lo is not None:
        nlo = max(nlo, lo)
    if hi is not None:
        nhi = min(nhi, hi)
    return (nlo, nhi)


def _interval_count(lo, hi):
    if lo is None or hi is None:
        raise ValueError("unbounded interval in exact count")
    return max(0, hi - lo + 1)


# -- T-counts ----------------------------------------------------------------------


def _t_count_int(n: int, N: int, nu: int) -> int:
    """Exact |{f monic deg n, ht <= N, (X + nu) | f}| over Z.

    Quotient parametrization: f = (X + nu) (X^{n-1} + b_{n-2} X^{n-2} + ...
    + b_0) with constraints |b_{n-2} + nu| <= N, |b_{i-1} + nu b_i| <= N,
    |nu b_0| <= N.  All levels except the last are free boxes; the last is an
    interval intersection.
    """
    if nu == 0:
        return (2 * N + 1) ** (n - 1)
    if n == 1:
        return 1 if abs(nu) <= N else 0

    def level(i, prev):
        # count choices of b_{i-1}, ..., b_0 given b_i = prev
        lo, hi = _constrain(None, None, nu * prev, 1, N)  # |b_{i-1} + nu b_i| <= N
        if i - 1 == 0:
            lo, hi = _constrain(lo, hi, 0, nu, N)  # |nu b_0| <= N
            return _interval_count(lo, hi)
        return sum(level(i - 1, b) for b in range(lo, hi + 1))

    if n == 2:
        lo, hi = _constrain(None, None, nu, 1, N)  # |b_0 + nu| <= N
        lo, hi = _constrain(lo, hi, 0, nu, N)
        return _interval_count(lo, hi)
    lo, hi = _constrain(None, None, nu, 1, N)  # b_{n-2}
    return sum(level(n - 2, b) for b in range(lo, hi + 1))


def _box_iter(centers, N):
    """Integer boxes [-N - c_j, N - c_j] per coordinate."""
    return product(*[range(-N - c, N - c + 1) for c in centers])


def _t_count_generic(spec: CensusSpec, nu: OElem) -> int:
    K = spec.field
    n, N = spec.n, spec.N
    d = K.degree
    if nu.is_zero():
        return (2 * N + 1) ** (d * (n - 1))
    if n == 1:
        return 1 if nu.height() <= N else 0

    def final_count(center_elem):
        # count beta_0 with ht(beta_0 + center) <= N and ht(nu*beta_0) <= N
        cnt = 0
        for b in _box_iter(center_elem.coords, N):
            prod_coords = K._mul_coords(nu.coords, b)
            if max(abs(c) for c in prod_coords) <= N:
                cnt += 1
        return cnt

    def level(i, prev_beta):
        center = nu * prev_beta
        if i - 1 == 0:
            return final_count(center)
        total = 0
        for b in _box_iter(center.coords, N):
            total += level(i - 1, OElem(K, b))
        return total

    if n == 2:
        cnt = 0
        for b in _box_iter(nu.coords, N):
            prod_coords = K._mul_coords(nu.coords, b)
            if max(abs(c) for c in prod_coords) <= N:
                cnt += 1
        return cnt
    total = 0
    for b in _box_iter(nu.coords, N):  # beta_{n-2} from |b + nu| <= N
        total += level(n - 2, OElem(K, b))
    return total


def T_count(spec: CensusSpec, nu: OElem) -> int:
    """Exact number of census polynomials with linear factor (X + nu)."""
    if spec.field.degree == 1:
        return _t_count_int(spec.n, spec.N, nu.coords[0])
    return _t_count_generic(spec, nu)


def units_up_to_height(K: NumberField, H: int):
    """All units of O_K with height <= H (box search on |norm| = 1)."""
    d = K.degree
    out = []
    for coords in product(range(-H, H + 1), repeat=d):
        if all(c == 0 for c in coords):
            continue
        if abs(K._norm_coords(coords)) == 1:
            out.append(K.element(coords))
    return out


def unit_T_sum(spec: CensusSpec) -> int:
    """Sum of T_count over units; T vanishes beyond height n*N, so the
    enumeration cutoff ht(nu) <= n*N is exhaustive."""
    return sum(T_count(spec, u)
               for u in units_up_to_height(spec.field, spec.n * spec.N))


# -- L-counts ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def _sum_distribution(n: int, N: int):
    """counts[s + n*N] = #{(x_1..x_n) in [-N,N]^n : sum x_i = s}, exact."""
    width = 2 * N + 1
    base = np.ones(width, dtype=object)
    acc = base
    for _ in range(n - 1):
        acc = np.convolve(acc, base)
    return acc


def L_count(spec: CensusSpec, h) -> int:
    """Exact |L_n(N, h)|: product over basis coordinates of the number of
    n-tuples in [-N, N] with the prescribed coordinate sum."""
    K = spec.field
    if isinstance(h, int):
        h = (h,)
    h = tuple(int(v) for v in h)
    if len(h) != K.degree:
        raise ValueError(f"h must have length d = {K.degree}")
    dist = _sum_distribution(spec.n, spec.N)
    total = 1
    shift = spec.n * spec.N
    for hk in h:
        idx = hk + shift
        total *= int(dist[idx]) if 0 <= idx < len(dist) else 0
    return total


# -- reducibility ------------------------------------------------------------------


def _subset_sums(degrees):
    mask = 1
    for deg in degrees:
        mask |= mask << deg
    return mask


def _prefilter_passes(f: OPoly, k: int, max_primes=PREFILTER_PRIME_COUNT):
    """False when some unramified squarefree reduction rules out a degree-k
    factor (no subset of local factor degrees sums to k)."""
    K = f.field
    found = 0
    for P in primes.prime_ideals_upto(K, 60):
        if not P.unramified:
            continue
        st = primes.reduction_type(f, P)
        if st is None:
            continue
        degrees = [j for j, rj in enumerate(st.r, start=1) for _ in range(rj)]
        if not (_subset_sums(degrees) >> k) & 1:
            return False
        found += 1
        if found >= max_primes:
            break
    return True


def _divisors(m: int):
    m = abs(m)
    out = []
    i = 1
    while i * i <= m:
        if m % i == 0:
            out.append(i)
            if i != m // i:
                out.append(m // i)
        i += 1
    return out


def _has_linear_factor_q(f: OPoly) -> bool:
    """Rational-integer root search via the divisor criterion (d = 1)."""
    a0 = f.coeffs[0].coords[0]
    if a0 == 0:
        return True
    Z = f.field
    for t in _divisors(a0):
        for cand in (t, -t):
            if f.evaluate(Z.from_int(cand)).is_zero():
                return True
    return False


def has_factor_of_degree(f: OPoly, k: int, prefilter: bool = True) -> bool:
    """Exact test for a monic degree-k factor of f over O_K.

    Candidate factor coefficients are enumerated inside proven boxes from the
    per-embedding root bounds (coefficient j of a degree-k factor is an
    elementary symmetric function of k roots, so |sigma_i| <= C(k, k - j) *
    B_i^(k-j)); each candidate is checked by exact division.
    """
    n = f.degree
    if not 1 <= k <= n // 2:
        raise ValueError(f"k must satisfy 1 <= k <= n/2, got k={k}, n={n}")
    K = f.field
    if K.degree == 1 and k == 1:
        return _has_linear_factor_q(f)
    if prefilter and not _prefilter_passes(f, k):
        return False

    bounds = embedding_root_bounds(f, use_binomials=True)
    boxes = []
    size = 1
    for j in range(k):  # coefficient of X^j in g: e_{k-j} of k roots
        m = k - j
        coeff_bounds = [math.comb(k, m) * b ** m for b in bounds]
        box = K.coord_box(coeff_bounds)
        boxes.append(box)
        for bj in box:
            size *= 2 * bj + 1
        if size > FACTOR_SEARCH_GUARD:
            raise TooLarge(f"factor search space {size} exceeds guard")

    ranges = [range(-b, b + 1) for box in boxes for b in box]
    d = K.degree
    for flat in product(*ranges):
        g = OPoly(K, [K.element(flat[j * d:(j + 1) * d]) for j in range(k)])
        _, rem = opoly_divmod_monic(f, g)
        if all(c.is_zero() for c in rem):
            return True
    return False


def is_reducible(f: OPoly, prefilter: bool = True) -> bool:
    return any(has_factor_of_degree(f, k, prefilter=prefilter)
               for k in range(1, f.degree // 2 + 1))


# -- rho ---------------------------------------------------------------------------


def _root_candidate_range(N: int) -> int:
    # integer roots of monic f with ht(f) <= N obey the Cauchy bound
    return N + 1


def _linear_ie_counts_q(n: int, N: int):
    """Inclusion-exclusion over distinct integer roots for K = Q, n in {2, 3}.

    Returns (rho_1, count of f with >= 2 distinct roots).
    """
    R = _root_candidate_range(N)
    s1 = sum(_t_count_int(n, N, -t) for t in range(-R, R + 1))

    def pair_count(t1, t2):
        p1, p0 = -(t1 + t2), t1 * t2
        if n == 2:
            return 1 if abs(p1) <= N and abs(p0) <= N else 0
        # n == 3: f = (X^2 + p1 X + p0)(X + b)
        lo, hi = _constrain(None, None, p1, 1, N)   # alpha_2 = p1 + b
        lo, hi = _constrain(lo, hi, p0, p1, N)      # alpha_1 = p0 + p1 b
        lo, hi = _constrain(lo, hi, 0, p0, N)       # alpha_0 = p0 b
        return _interval_count(lo, hi)

    s2 = 0
    for t1 in range(-R, R + 1):
        for t2 in range(t1 + 1, R + 1):
            s2 += pair_count(t1, t2)

    if n == 2:
        return s1 - s2, s2

    s3 = 0
    for t1 in range(-R, R + 1):
        for t2 in range(t1 + 1, R + 1):
            e1p, e2p = t1 + t2, t1 * t2
            # constraints on t3: |e1p + t3| <= N, |e2p + e1p t3| <= N,
            # |e2p t3| <= N, t3 > t2
            lo, hi = _constrain(t2 + 1, None, e1p, 1, N)
            lo, hi = _constrain(lo, hi, e2p, e1p, N)
            lo, hi = _constrain(lo, hi, 0, e2p, N)
            if hi is None:
                raise AssertionError("t3 interval must be bounded")
            s3 += _interval_count(lo, hi)
    rho1 = s1 - s2 + s3
    multi = s2 - 2 * s3
    return rho1, multi


def linear_factor_count(spec: CensusSpec):
    """(rho_1, #f with two or more distinct linear factors), exact."""
    if spec.field.degree == 1 and spec.n in (2, 3):
        return _linear_ie_counts_q(spec.n, spec.N)
    raise TooLarge("closed-form linear-factor count only for K = Q, n <= 3; "
                   "use rho() on an enumerable population")


def rho(spec: CensusSpec, exhaustive: bool | None = None):
    """Exact (rho_k table, rho) for the census population.

    Fast inclusion-exclusion path for K = Q with n in {2, 3} (where every
    reducible polynomial has a linear factor); exhaustive divisor search
    elsewhere, guarded by population size.
    """
    n = spec.n
    fast_available = spec.field.degree == 1 and n in (2, 3)
    if exhaustive is None:
        use_fast = fast_available
    elif exhaustive:
        use_fast = False
    else:
        if not fast_available:
            raise TooLarge("closed-form rho only for K = Q with n in {2, 3}")
        use_fast = True
    if use_fast:
        rho1, _ = _linear_ie_counts_q(n, spec.N)
        return {1: rho1}, rho1
    spec.guard(EXHAUSTIVE_RHO_GUARD)
    rho_k = {k: 0 for k in range(1, n // 2 + 1)}
    reducible = 0
    for f in enumerate_polys(spec):
        any_factor = False
        for k in rho_k:
            if has_factor_of_degree(f, k):
                rho_k[k] += 1
                any_factor = True
        if any_factor:
            reducible += 1
    return rho_k, reducible


def run_census(spec: CensusSpec, t_height_cap: int | None = None,
               meta: dict | None = None) -> CensusReport:
    """Assemble the standard census report: totals, rho, unit and zero
    T-counts, and L-counts at h = 0 and h = (1, ..., 1)."""
    K = spec.field
    d = K.degree
    rho_k, rho_total = rho(spec)
    T_table = {str([0] * d): T_count(spec, K.zero())}
    cap = t_height_cap if t_height_cap is not None else spec.n * spec.N
    for u in units_up_to_height(K, min(cap, spec.n * spec.N)):
        T_table[str(list(u.coords))] = T_count(spec, u)
    L_table = {
        str([0] * d): L_count(spec, (0,) * d),
        str([1] * d): L_count(spec, (1,) * d),
    }
    return CensusReport(
        spec_label=f"census(field={K.label}, n={spec.n}, N={spec.N})",
        field_label=K.label,
        basis=K.basis_description(),
        n=spec.n,
        N=spec.N,
        total=spec.population,
        rho_k=rho_k,
        rho=rho_total,
        T_table=T_table,
        L_table=L_table,
        meta=meta or {},
    )
