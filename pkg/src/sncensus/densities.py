"""Exact splitting-type and cycle-type densities, and subgroup certificates.

delta(r) is the proportion of S_n with cycle type r and the leading density
of squarefree factorizations of type r over F_q.  All densities are exact
rationals; floating point appears only in the asymptotic trend report.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import TooLarge
from .ffpoly import SplittingType, all_splitting_types

LEMMA7_GUARD = 6


@dataclass(frozen=True)
class Density:
    value: Fraction
    provenance: str

    def __post_init__(self):
        if not 0 <= self.value <= 1:
            raise ValueError(f"density out of [0,1]: {self.value}")

    def __float__(self):
        return float(self.value)


def _primes_in(lo, hi):
    """Primes p with lo < p <= hi."""
    out = []
    for p in range(max(2, math.floor(lo) + 1), math.floor(hi) + 1):
        if p > lo and all(p % d for d in range(2, int(p**0.5) + 1)):
            out.append(p)
    return out


def delta_r(r) -> Density:
    """delta(r) = prod_i 1 / (i^{r_i} r_i!)."""
    if not isinstance(r, SplittingType):
        r = SplittingType(tuple(r))
    val = Fraction(1)
    for i, ri in enumerate(r, start=1):
        val /= Fraction(i**ri * math.factorial(ri))
    return Density(val, "formula")


def delta_T(n: int) -> Density:
    """Density of elements with exactly one 2-cycle and no other even cycle."""
    if n < 2:
        raise ValueError("n must be >= 2")
    j = 2 if n % 2 == 0 else 3
    m = n - j
    val = Fraction(math.factorial(m),
                   2 ** (m + 1) * math.factorial(m // 2) ** 2)
    return Density(val, "closed-form")


def delta_P(n: int) -> Density:
    """Density of elements containing a p-cycle for some prime p > n/2."""
    if n < 2:
        raise ValueError("n must be >= 2")
    val = sum((Fraction(1, p) for p in _primes_in(Fraction(n, 2), n)),
              Fraction(0))
    return Density(val, "closed-form")


@lru_cache(maxsize=None)
def cycle_type_counts(n: int):
    """Exact S_n census: cycle type -> number of permutations (n <= 8)."""
    if n > 8:
        raise TooLarge("brute-force S_n census capped at n = 8")
    counts = {}
    for perm in itertools.permutations(range(n)):
        r = _cycle_type(perm)
        counts[r] = counts.get(r, 0) + 1
    return counts


def _cycle_type(perm):
    n = len(perm)
    seen = [False] * n
    r = [0] * n
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        cur = start
        while not seen[cur]:
            seen[cur] = True
            cur = perm[cur]
            length += 1
        r[length - 1] += 1
    return tuple(r)


def delta_r_brute(r) -> Density:
    if not isinstance(r, SplittingType):
        r = SplittingType(tuple(r))
    n = r.n
    counts = cycle_type_counts(n)
    return Density(Fraction(counts.get(r.r, 0), math.factorial(n)),
                   "brute-force")


def type_sets(n: int):
    """The sets T (one 2-cycle, no other even cycle) and P (a p-cycle for a
    prime p > n/2), generated from their definitions."""
    T = set()
    P = set()
    ps = _primes_in(Fraction(n, 2), n)
    for st in all_splitting_types(n):
        r = st.r
        if r[1] == 1 and all(r[k] == 0 for k in range(3, n, 2)):
            T.add(st)
        if any(r[p - 1] >= 1 for p in ps):
            P.add(st)
    return T, P


def delta_T_brute(n: int) -> Density:
    counts = cycle_type_counts(n)
    T, _ = type_sets(n)
    tot = sum(counts.get(st.r, 0) for st in T)
    return Density(Fraction(tot, math.factorial(n)), "brute-force")


def delta_P_brute(n: int) -> Density:
    counts = cycle_type_counts(n)
    _, P = type_sets(n)
    tot = sum(counts.get(st.r, 0) for st in P)
    return Density(Fraction(tot, math.factorial(n)), "brute-force")


def stirling_trend(n: int) -> float:
    """delta_T(n) * sqrt(2 pi n); approaches 1 for large n."""
    return float(delta_T(n).value) * math.sqrt(2 * math.pi * n)


# -- subgroup enumeration (Lemma-7-style certificate) ---------------------------


def _perm_mul(a, b):
    # (a*b)(x) = a(b(x))
    return tuple(a[b[i]] for i in range(len(a)))


@lru_cache(maxsize=None)
def _sn_elements(n: int):
    return tuple(itertools.permutations(range(n)))


def _closure(gens, mult):
    """Subgroup generated by gens, as a frozenset of element indices.
    Index 0 is the identity (elements are sorted with it first).

    Worklist over right-multiplication by generators; words in the
    generators of a finite group already form a subgroup."""
    group = {0}
    work = [0]
    while work:
        x = work.pop()
        row = mult[x]
        for g in gens:
            y = row[g]
            if y not in group:
                group.add(y)
                work.append(y)
    return frozenset(group)


@lru_cache(maxsize=None)
def _group_tables(n: int):
    elements = sorted(_sn_elements(n), key=lambda p: (p != tuple(range(n)), p))
    index = {p: i for i, p in enumerate(elements)}
    mult = [[index[_perm_mul(a, b)] for b in elements] for a in elements]
    return elements, index, mult


def all_subgroups(n: int):
    """Every subgroup of S_n (n <= 6), by incremental closure growth.

    Covers the same lattice as deduplicated closures of generator subsets of
    size <= 3 (subgroups of S_n for n <= 6 are at most 3-generated) but grows
    one generator at a time, extending each known subgroup H only by one
    representative per right coset Hg, since <H, g> = <H, hg> for h in H.
    """
    if n > LEMMA7_GUARD:
        raise TooLarge(f"subgroup enumeration capped at n = {LEMMA7_GUARD}")
    elements, index, mult = _group_tables(n)
    order = len(elements)
    full = frozenset(range(order))
    trivial = frozenset({0})
    known = {trivial: ()}
    frontier = [(trivial, ())]
    while frontier:
        new = []
        for H, gens in frontier:
            if len(H) == order:
                continue
            rows = [mult[h] for h in H]
            seen = set(H)
            for g in range(1, order):
                if g in seen:
                    continue
                for hrow in rows:
                    seen.add(hrow[g])
                # index-2 subgroups extend straight to the full group
                C = full if len(H) * 2 == order else _closure(gens + (g,), mult)
                if C not in known:
                    known[C] = gens + (g,)
                    new.append((C, gens + (g,)))
        frontier = new
    return sorted(known, key=lambda H: (len(H), sorted(H)))


def lemma7_check(n: int):
    """Enumerate subgroups of S_n and verify: every transitive subgroup that
    contains a transposition and a pure p-cycle (p prime, p > n/2) is S_n.

    Returns a certificate dict with the transitive subgroups, their orders and
    witness flags.
    """
    elements, index, mult = _group_tables(n)
    ps = _primes_in(Fraction(n, 2), n)
    transposition_types = {tuple(1 if k == 1 else (n - 2 if k == 0 else 0)
                                 for k in range(n))}
    pure_pcycle_types = {tuple((n - p if k == 0 else 0) if k != p - 1 else 1
                               for k in range(n)) for p in ps}

    subgroups = all_subgroups(n)
    transitive_rows = []
    holds = True
    for H in subgroups:
        perms = [elements[i] for i in H]
        orbit = {p[0] for p in perms}
        if len(orbit) != n:
            continue
        types = {_cycle_type(p) for p in perms}
        has_t = bool(types & transposition_types)
        has_p = bool(types & pure_pcycle_types)
        is_sn = len(H) == math.factorial(n)
        if has_t and has_p and not is_sn:
            holds = False
        transitive_rows.append({
            "order": len(H),
            "has_transposition": has_t,
            "has_prime_cycle": has_p,
            "is_sn": is_sn,
        })
    return {
        "n": n,
        "subgroup_count": len(subgroups),
        "transitive": transitive_rows,
        "holds": holds,
    }
