"""Discriminants, iterated discriminants, and Galois resolvents.

poly_disc is the exact Sylvester-resultant discriminant over O_K.  Resolvents
are built numerically from high-precision roots over every embedding and
rounded back to power-basis coordinates; integrality of the rounded result is
guaranteed by the symmetric-function argument, and a residual gate catches
precision failures.  For the cyclic-cubic resolvent an exact symmetric
-function form is also provided and cross-checked against the numeric route.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dataclass_field

import mpmath as mp
import sympy

from .errors import DegenerateFamily, PrecisionExhausted, TooLarge
from .ofield import NumberField, OElem, OPoly, opoly_divmod_monic

RESOLVENT_DEGREE_GUARD = 5
ITERATED_DEGREE_GUARD = 5
ROUND_OK = 1e-6
ROUND_AMBIGUOUS = 1e-2


def _sylvester_det_opoly(f_coeffs, g_coeffs, field):
    """Resultant of two O_K[X] polynomials via Bareiss on the Sylvester
    matrix; exact division happens inside O_K."""
    n = len(f_coeffs) - 1
    m = len(g_coeffs) - 1
    size = n + m
    zero = field.zero()
    rows = []
    frev = list(reversed(f_coeffs))
    grev = list(reversed(g_coeffs))
    for i in range(m):
        rows.append([zero] * i + frev + [zero] * (size - n - 1 - i))
    for i in range(n):
        rows.append([zero] * i + grev + [zero] * (size - m - 1 - i))

    sign = 1
    prev = field.one()
    mat = rows
    for k in range(size - 1):
        if mat[k][k].is_zero():
            for i in range(k + 1, size):
                if not mat[i][k].is_zero():
                    mat[k], mat[i] = mat[i], mat[k]
                    sign = -sign
                    break
            else:
                return zero
        pivot = mat[k][k]
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                num = mat[i][j] * pivot - mat[i][k] * mat[k][j]
                coords = field.exact_div_coords(num.coords, prev.coords)
                assert coords is not None, "Bareiss division must be exact"
                mat[i][j] = OElem(field, coords)
            mat[i][k] = zero
        prev = pivot
    det = mat[size - 1][size - 1]
    return det if sign == 1 else -det


def poly_disc(f: OPoly) -> OElem:
    """Discriminant d_f = (-1)^(n(n-1)/2) Res(f, f'), exact in O_K."""
    field = f.field
    n = f.degree
    if n == 1:
        return field.one()
    full = list(f.coeffs_full())
    deriv = [f.coeffs[k] * k for k in range(1, n)] + [field.from_int(n)]
    res = _sylvester_det_opoly(full, deriv, field)
    if (n * (n - 1) // 2) % 2 == 1:
        res = -res
    return res


def iterated_disc(n: int, coeffs=None):
    """Discriminant (in the constant coefficient) of the discriminant of
    X^n + a_{n-1} X^{n-1} + ... + a_1 X + a_0.

    coeffs optionally fixes a_1 .. a_{n-1} (ints or sympy expressions, given
    as a dict {index: value}); a_0 always stays symbolic.  Returns a sympy
    expression in the remaining coefficients.  Raises DegenerateFamily if the
    result is identically zero.
    """
    if n > ITERATED_DEGREE_GUARD:
        raise TooLarge(f"iterated discriminant capped at degree "
                       f"{ITERATED_DEGREE_GUARD}")
    if n < 2:
        raise ValueError("need degree >= 2")
    X = sympy.Symbol("X")
    a0 = sympy.Symbol("a0")
    syms = {k: sympy.Symbol(f"a{k}") for k in range(1, n)}
    if coeffs:
        for k, v in coeffs.items():
            if not 1 <= k <= n - 1:
                raise ValueError(f"coefficient index {k} out of range")
            syms[k] = sympy.sympify(v)
    fam = X**n + a0 + sum(syms[k] * X**k for k in range(1, n))
    d_f = sympy.discriminant(fam, X)
    D = sympy.expand(sympy.discriminant(sympy.Poly(d_f, a0)))
    if D == 0:
        raise DegenerateFamily(
            f"iterated discriminant vanished identically for n={n}, "
            f"coeffs={coeffs}")
    return D


def iterated_disc_resultant_identity(n: int) -> bool:
    """Check Res_{a0}(d_f, d d_f/d a0) = +- lc * D symbolically for degree n."""
    X = sympy.Symbol("X")
    a0 = sympy.Symbol("a0")
    syms = [sympy.Symbol(f"a{k}") for k in range(1, n)]
    fam = X**n + a0 + sum(s * X**k for k, s in enumerate(syms, start=1))
    d_f = sympy.Poly(sympy.discriminant(fam, X), a0)
    res = sympy.resultant(d_f.as_expr(), sympy.diff(d_f.as_expr(), a0), a0)
    D = sympy.discriminant(d_f)
    lc = d_f.LC()
    return sympy.simplify(res - lc * D) == 0 or sympy.simplify(res + lc * D) == 0


# -- permutation / coset helpers -----------------------------------------------


def perm_mul(a, b):
    return tuple(a[b[i]] for i in range(len(a)))


def subgroup_closure(generators, n):
    """Elements of the subgroup of S_n generated by the given permutation
    tuples (0-based images)."""
    identity = tuple(range(n))
    gens = [tuple(g) for g in generators]
    for g in gens:
        if sorted(g) != list(range(n)):
            raise ValueError(f"not a permutation of 0..{n-1}: {g}")
    group = {identity}
    work = [identity]
    while work:
        x = work.pop()
        for g in gens:
            y = perm_mul(x, g)
            if y not in group:
                group.add(y)
                work.append(y)
    return sorted(group)


def coset_representatives(group, n):
    """Left coset representatives of the subgroup inside S_n, by orbit scan."""
    gset = set(group)
    seen = set()
    reps = []
    for sigma in itertools.permutations(range(n)):
        if sigma in seen:
            continue
        reps.append(sigma)
        for tau in gset:
            seen.add(perm_mul(sigma, tau))
    return reps


@dataclass
class Resolvent:
    field_label: str
    n: int
    group_order: int
    index: int
    coset_reps: list
    phi: OPoly
    residual: float
    meta: dict = dataclass_field(default_factory=dict)


def build_resolvent(f: OPoly, generators) -> Resolvent:
    """Galois resolvent of f for the subgroup generated by `generators`,
    with respect to the invariant sum_{tau in G} prod_i X_{tau(i)}^i.

    Numeric roots over every embedding of K are combined per coset, the
    product is expanded, and each coefficient vector is solved back to
    power-basis coordinates and rounded; residual >= 1e-6 raises
    PrecisionExhausted.
    """
    K = f.field
    n = f.degree
    if n > RESOLVENT_DEGREE_GUARD:
        raise TooLarge(f"resolvent construction capped at degree "
                       f"{RESOLVENT_DEGREE_GUARD}")
    disc = poly_disc(f)
    if disc.is_zero():
        raise ValueError("resolvent needs separable f (disc != 0)")
    group = subgroup_closure(generators, n)
    reps = coset_representatives(group, n)
    m = len(reps)
    d = K.degree

    with mp.workdps(K.precision + 20):
        coeff_vectors = [[] for _ in range(m + 1)]
        for j in range(d):
            emb_coeffs = []
            for c in reversed(f.coeffs_full()):
                emb_coeffs.append(K.embed_coords(c.coords, j))
            roots = mp.polyroots(emb_coeffs, maxsteps=500, extraprec=140)
            roots = sorted((mp.mpc(r) for r in roots),
                           key=lambda z: (z.real, z.imag))
            # orbit sums per coset
            zvals = []
            for sigma in reps:
                acc = mp.mpc(0)
                for tau in group:
                    composed = perm_mul(sigma, tau)
                    term = mp.mpc(1)
                    for pos in range(n):
                        term *= roots[composed[pos]] ** (pos + 1)
                    acc += term
                zvals.append(acc)
            poly = [mp.mpc(1)]
            for z in zvals:
                poly = [a - z * b for a, b in
                        zip(poly + [mp.mpc(0)], [mp.mpc(0)] + poly)]
            # poly is descending; collect ascending non-leading coefficients
            asc = list(reversed(poly))
            for idx in range(m):
                coeff_vectors[idx].append(asc[idx])

        phi_coeffs = []
        residual = 0.0
        for idx in range(m):
            vec = mp.matrix(coeff_vectors[idx])
            sol = mp.lu_solve(K._embed_matrix, vec)
            coords = []
            for j in range(d):
                v = sol[j]
                rounded = int(mp.nint(v.real))
                err = abs(v - rounded)
                residual = max(residual, float(err))
                coords.append(rounded)
            phi_coeffs.append(K.element(coords))
        if residual >= ROUND_OK:
            raise PrecisionExhausted(
                f"resolvent rounding residual {residual:.3e} "
                + ("is ambiguous" if residual < ROUND_AMBIGUOUS
                   else "contradicts integrality"))

    phi = OPoly(K, phi_coeffs)
    return Resolvent(field_label=K.label, n=n, group_order=len(group),
                     index=m, coset_reps=reps, phi=phi, residual=residual,
                     meta={"f": f.coord_rows()})


def okay_roots(phi: OPoly):
    """All roots of a monic O_K polynomial that lie in O_K (exact box search)."""
    from .ofield import root_coord_box
    K = phi.field
    box = root_coord_box(phi)
    roots = []
    seen = set()
    for coords in itertools.product(*[range(-b, b + 1) for b in box]):
        if coords in seen:
            continue
        seen.add(coords)
        cand = K.element(coords)
        if phi.evaluate(cand).is_zero():
            roots.append(cand)
    return roots


def resolvent_has_ok_root(res: Resolvent) -> bool:
    return bool(okay_roots(res.phi))


# -- exact cyclic-cubic resolvent ------------------------------------------------

A3_GENERATORS = ((1, 2, 0),)


def a3_resolvent_exact(f: OPoly) -> OPoly:
    """The quadratic resolvent of a cubic for the cyclic subgroup, computed
    exactly from symmetric functions of the roots.

    With e1, e2, e3 the elementary symmetric polynomials of the roots,
        z^2 - (e1 e2 e3 - 3 e3^2) z + (9 e3^4 + e1^3 e3^3
                                       - 6 e1 e2 e3^3 + e2^3 e3^2),
    which matches the numeric construction for the same invariant.
    """
    if f.degree != 3:
        raise ValueError("cyclic-cubic resolvent needs degree 3")
    K = f.field
    a0, a1, a2 = f.coeffs
    e1, e2, e3 = -a2, a1, -a0
    e3sq = e3 * e3
    s = e1 * e2 * e3 - 3 * e3sq
    p = 9 * (e3sq * e3sq) + (e1 * e1 * e1) * (e3 * e3sq) \
        - 6 * e1 * e2 * (e3 * e3sq) + (e2 * e2 * e2) * e3sq
    return OPoly(K, [p, -s])


def quadratic_has_ok_root(phi: OPoly) -> bool:
    """Exact O_K-root test for a monic quadratic over the rationals fast path,
    box search otherwise."""
    K = phi.field
    if phi.degree != 2:
        raise ValueError("expected a quadratic")
    if K.degree == 1:
        c0, c1 = phi.coeffs[0].coords[0], phi.coeffs[1].coords[0]
        disc = c1 * c1 - 4 * c0
        if disc < 0:
            return False
        s = math.isqrt(disc)
        if s * s != disc:
            return False
        return (-c1 + s) % 2 == 0
    return bool(okay_roots(phi))


def a3_agreement_sweep(K: NumberField, N: int):
    """Exhaustively compare, over all irreducible cubics of height <= N, the
    resolvent route (cyclic resolvent has an O_K root) against the
    discriminant route (disc is a square).  Returns (checked, mismatches).

    Uses the exact symmetric-function resolvent so the sweep stays integer
    arithmetic; the numeric construction is validated separately.
    """
    from . import census as census_mod
    from . import galois as galois_mod

    spec = census_mod.CensusSpec(K, 3, N)
    spec.guard(census_mod.EXHAUSTIVE_RHO_GUARD * 100)
    checked = 0
    mismatches = 0
    if K.degree == 1:
        for a in range(-N, N + 1):
            for b in range(-N, N + 1):
                for c in range(-N, N + 1):
                    if _cubic_reducible_q(a, b, c):
                        continue
                    disc = (18 * a * b * c - 4 * a**3 * c + a * a * b * b
                            - 4 * b**3 - 27 * c * c)
                    s = math.isqrt(disc) if disc >= 0 else -1
                    disc_square = disc >= 0 and s * s == disc
                    # exact resolvent z^2 - e z + g with e1=-a, e2=b, e3=-c
                    e1, e2, e3 = -a, b, -c
                    e = e1 * e2 * e3 - 3 * e3 * e3
                    g = (9 * e3**4 + e1**3 * e3**3 - 6 * e1 * e2 * e3**3
                         + e2**3 * e3**2)
                    dphi = e * e - 4 * g
                    t = math.isqrt(dphi) if dphi >= 0 else -1
                    has_root = dphi >= 0 and t * t == dphi and (e + t) % 2 == 0
                    checked += 1
                    if has_root != disc_square:
                        mismatches += 1
        return checked, mismatches
    for f in census_mod.enumerate_polys(spec):
        if census_mod.is_reducible(f):
            continue
        disc_square = galois_mod.is_square_in_ok(poly_disc(f)) is not None
        has_root = quadratic_has_ok_root(a3_resolvent_exact(f))
        checked += 1
        if has_root != disc_square:
            mismatches += 1
    return checked, mismatches


def _cubic_reducible_q(a, b, c):
    if c == 0:
        return True
    m = abs(c)
    i = 1
    while i * i <= m:
        if m % i == 0:
            for t in (i, -i, m // i, -(m // i)):
                if ((t + a) * t + b) * t + c == 0:
                    return True
        i += 1
    return False


def theorem2_sweep(K: NumberField, n: int, generators, N_grid,
                   x_max: int = 500, slope_tolerance: float = 0.25):
    """Measure N_n(N, G) across a height grid and fit the log-log slope
    against the index bound d(n - 1 + 1/[S_n : G]).

    Counting uses the exact small-degree classifier; the expected group label
    is derived from the generated subgroup.
    """
    from . import galois as galois_mod

    if n not in (3, 4):
        raise ValueError("exponent sweep implemented for n in {3, 4}")
    group = subgroup_closure(generators, n)
    index = math.factorial(n) // len(group)
    label = galois_mod.group_label_from_order(n, len(group), group)
    d = K.degree
    bound = d * (n - 1 + 1.0 / index)

    rows = []
    for N in sorted(N_grid):
        counts = galois_mod.group_census(K, n, N, x_max=x_max)
        rows.append({"N": N, "count": counts.get(label, 0),
                     "counts": counts})
    xs = [math.log(r["N"]) for r in rows]
    ys = [math.log(max(1, r["count"])) for r in rows]
    mean_x = sum(xs) / len(xs)
    mean_y = sum(ys) / len(ys)
    denom = sum((x - mean_x) ** 2 for x in xs)
    slope = (sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys)) / denom
             if denom else float("nan"))
    return {
        "field": K.label, "n": n, "group": label, "index": index,
        "bound_exponent": bound, "slope": slope,
        "slope_ok": slope <= bound + slope_tolerance,
        "rows": [{"N": r["N"], "count": r["count"]} for r in rows],
    }
