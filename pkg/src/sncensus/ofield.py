"""Exact arithmetic in the integer ring of a fixed monogenic number field.

A field K = Q(theta) of degree d is described by a monic irreducible integer
polynomial; elements of O_K are integer coordinate vectors in the power basis
(1, theta, ..., theta^(d-1)).  Ring arithmetic (add, mul, norm, height) is
exact integer arithmetic throughout; complex embeddings are mpmath values
used only for size bounds and for resolvent rounding.

Only power-basis (monogenic) fields are supported, so prime splitting follows
the defining polynomial modulo p for every p not dividing the discriminant.
The class number is a configured input, validated only for the shipped
presets.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import mpmath as mp
import sympy

from .errors import PrecisionFailure, ReduciblePolynomial

DEFAULT_PRECISION = 50

_PRESET_FILES = {
    "Q": "q.json",
    "Q(i)": "gaussian.json",
    "Q(sqrt2)": "sqrt2.json",
    "Q(sqrt-5)": "sqrt_minus5.json",
}


def _int_det(rows):
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    n = len(rows)
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


class NumberField:
    """A monogenic number field with ordered power basis and numeric embeddings.

    Immutable after construction; all operations are pure, so instances are
    safe to share across threads and processes.
    """

    def __init__(self, defining_poly, class_number=1, label=None,
                 precision=DEFAULT_PRECISION):
        coeffs = tuple(int(c) for c in defining_poly)
        if len(coeffs) < 2:
            raise ValueError("defining polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            raise ValueError("defining polynomial must be monic")
        if class_number < 1:
            raise ValueError("class number must be a positive integer")
        d = len(coeffs) - 1

        x = sympy.Symbol("x")
        poly = sympy.Poly(sum(c * x**k for k, c in enumerate(coeffs)), x)
        if not poly.is_irreducible:
            raise ReduciblePolynomial(
                f"defining polynomial {coeffs} factors over the rationals")

        self.defining_poly = coeffs
        self.degree = d
        self.class_number = int(class_number)
        self.label = label or f"deg{d}:{list(coeffs)}"
        self.precision = int(precision)
        self.disc = int(sympy.discriminant(poly))

        n_real = poly.count_roots()
        self.signature = (n_real, (d - n_real) // 2)
        assert self.signature[0] + 2 * self.signature[1] == d

        # theta^k coordinates for k = 0 .. 2d-2, used to fold products back
        # into the power basis.
        reduction = [-c for c in coeffs[:d]]  # theta^d = reduction . basis
        table = [[1 if i == k else 0 for i in range(d)] for k in range(d)]
        if d >= 1:
            cur = list(reduction)
            table.append(list(cur))
            for _ in range(d - 2):
                shifted = [0] + cur[:-1]
                lead = cur[-1]
                cur = [shifted[i] + lead * reduction[i] for i in range(d)]
                table.append(list(cur))
        self._pow_table = [tuple(row) for row in table[: 2 * d - 1]]

        self._compute_embeddings()
        self._zero = OElem(self, (0,) * d)
        self._one = OElem(self, (1,) + (0,) * (d - 1))

    def _compute_embeddings(self):
        d = self.degree
        with mp.workdps(self.precision + 15):
            if d == 1:
                roots = [mp.mpc(-self.defining_poly[0])]
            else:
                coeffs_desc = [mp.mpf(c) for c in reversed(self.defining_poly)]
                roots = [mp.mpc(r) for r in
                         mp.polyroots(coeffs_desc, maxsteps=500, extraprec=120)]
                sep = min(abs(a - b) for i, a in enumerate(roots)
                          for b in roots[i + 1:])
                if sep < mp.mpf(10) ** (-(self.precision - 5)):
                    raise PrecisionFailure(
                        "roots of defining polynomial cannot be separated "
                        f"at {self.precision} digits")
            roots.sort(key=lambda z: (z.real, z.imag))
            self.embeddings = tuple(roots)
            # theta^k per embedding, k = 0 .. d-1 (the basis images).
            self._theta_powers = tuple(
                tuple(r**k for k in range(d)) for r in roots)
            V = mp.matrix(d, d)
            for i in range(d):
                for k in range(d):
                    V[i, k] = self._theta_powers[i][k]
            self._embed_matrix = V
            self._embed_inv = mp.inverse(V)
            # row sums of |V^-1|: coordinate bounds from embedding bounds.
            self._inv_abs_rows = tuple(
                tuple(abs(self._embed_inv[j, i]) for i in range(d))
                for j in range(d))
            # C_{K,i} = sum_k |sigma_i(omega_k)|
            self._embedding_scale = tuple(
                sum(abs(p) for p in pows) for pows in self._theta_powers)

    # -- element construction ------------------------------------------------

    def element(self, coords):
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.degree:
            raise ValueError(
                f"expected {self.degree} coordinates, got {len(coords)}")
        return OElem(self, coords)

    def from_int(self, m):
        return OElem(self, (int(m),) + (0,) * (self.degree - 1))

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def theta(self):
        if self.degree == 1:
            return self.from_int(-self.defining_poly[0])
        return OElem(self, (0, 1) + (0,) * (self.degree - 2))

    # -- coordinate arithmetic -----------------------------------------------

    def _mul_coords(self, a, b):
        d = self.degree
        if d == 1:
            return (a[0] * b[0],)
        conv = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        out = list(conv[:d])
        for k in range(d, 2 * d - 1):
            ck = conv[k]
            if ck:
                tbl = self._pow_table[k]
                for j in range(d):
                    if tbl[j]:
                        out[j] += ck * tbl[j]
        return tuple(out)

    def _norm_coords(self, a):
        d = self.degree
        if d == 1:
            return a[0]
        cols = []
        cur = a
        cols.append(cur)
        theta_coords = (0, 1) + (0,) * (d - 2)
        for _ in range(d - 1):
            cur = self._mul_coords(cur, theta_coords)
            cols.append(cur)
        rows = [[cols[j][i] for j in range(d)] for i in range(d)]
        return _int_det(rows)

    def exact_div_coords(self, a, b):
        """Coordinates of a/b when the quotient lies in O_K, else None."""
        d = self.degree
        if d == 1:
            if b[0] == 0 or a[0] % b[0] != 0:
                return None
            return (a[0] // b[0],)
        cols = []
        cur = b
        theta_coords = (0, 1) + (0,) * (d - 2)
        cols.append(cur)
        for _ in range(d - 1):
            cur = self._mul_coords(cur, theta_coords)
            cols.append(cur)
        mat = [[Fraction(cols[j][i]) for j in range(d)] + [Fraction(a[i])]
               for i in range(d)]
        # Gaussian elimination over Q.
        for k in range(d):
            piv = None
            for i in range(k, d):
                if mat[i][k] != 0:
                    piv = i
                    break
            if piv is None:
                return None
            mat[k], mat[piv] = mat[piv], mat[k]
            pk = mat[k][k]
            mat[k] = [v / pk for v in mat[k]]
            for i in range(d):
                if i != k and mat[i][k] != 0:
                    fac = mat[i][k]
                    mat[i] = [mat[i][j] - fac * mat[k][j] for j in range(d + 1)]
        sol = [mat[i][d] for i in range(d)]
        if any(v.denominator != 1 for v in sol):
            return None
        return tuple(int(v) for v in sol)

    def embed_coords(self, coords, i):
        pows = self._theta_powers[i]
        with mp.workdps(self.precision + 15):
            return mp.fsum((c * pows[k] for k, c in enumerate(coords) if c),
                           absolute=False)

    def coord_box(self, embedding_bounds):
        """Integer coordinate bounds |a_j| <= box_j implied by per-embedding
        absolute-value bounds on an element of O_K."""
        d = self.degree
        out = []
        with mp.workdps(self.precision + 15):
            for j in range(d):
                s = mp.fsum(self._inv_abs_rows[j][i] * embedding_bounds[i]
                            for i in range(d))
                out.append(int(mp.floor(s * (1 + mp.mpf("1e-30")) + mp.mpf("1e-30"))))
        return tuple(out)

    # -- misc ------------------------------------------------------------------

    @property
    def key(self):
        return (self.defining_poly, self.class_number)

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"NumberField({self.label}, poly={list(self.defining_poly)})"

    def basis_description(self):
        d = self.degree
        return ["1"] + [f"theta^{k}" if k > 1 else "theta" for k in range(1, d)]


class OElem:
    """Element of O_K as an integer coordinate vector in the power basis."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        self.field = field
        self.coords = coords

    def __add__(self, other):
        return OElem(self.field, tuple(a + b for a, b in
                                       zip(self.coords, other.coords)))

    def __sub__(self, other):
        return OElem(self.field, tuple(a - b for a, b in
                                       zip(self.coords, other.coords)))

    def __neg__(self):
        return OElem(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, int):
            return OElem(self.field, tuple(a * other for a in self.coords))
        return OElem(self.field, self.field._mul_coords(self.coords, other.coords))

    __rmul__ = __mul__

    def __pow__(self, k):
        acc = self.field.one()
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def __eq__(self, other):
        return isinstance(other, OElem) and self.coords == other.coords \
            and self.field.key == other.field.key

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"OElem{self.coords}"

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def height(self):
        return max(abs(c) for c in self.coords)

    def norm(self):
        return self.field._norm_coords(self.coords)

    def embeddings(self):
        return tuple(self.field.embed_coords(self.coords, i)
                     for i in range(self.field.degree))


def height(alpha: OElem) -> int:
    """max_i |a_i| over the power-basis coordinates."""
    return alpha.height()


def norm(alpha: OElem) -> int:
    """Exact field norm: determinant of the multiplication-by-alpha matrix."""
    return alpha.norm()


def embed(alpha: OElem, i: int):
    """Numeric value of sigma_i(alpha); i is 1-based."""
    if not 1 <= i <= alpha.field.degree:
        raise ValueError(f"embedding index {i} out of range")
    return alpha.field.embed_coords(alpha.coords, i - 1)


def make_field(defining_poly, class_number=1, label=None,
               precision=DEFAULT_PRECISION) -> NumberField:
    return NumberField(defining_poly, class_number=class_number, label=label,
                       precision=precision)


def load_field(config) -> NumberField:
    """Build a field from a JSON config dict or a path to one.

    Expected keys: defining_poly ([c0, ..., 1]), class_number, label.
    """
    if isinstance(config, (str, bytes)):
        with open(config, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    return make_field(config["defining_poly"],
                      class_number=config.get("class_number", 1),
                      label=config.get("label"))


@lru_cache(maxsize=None)
def preset(label: str) -> NumberField:
    """One of the shipped preset fields: Q, Q(i), Q(sqrt2), Q(sqrt-5)."""
    if label not in _PRESET_FILES:
        raise KeyError(f"unknown preset {label!r}; have {sorted(_PRESET_FILES)}")
    data = resources.files("sncensus.presets").joinpath(_PRESET_FILES[label])
    return load_field(json.loads(data.read_text()))


class OPoly:
    """Monic polynomial over O_K: X^n + alpha_{n-1} X^{n-1} + ... + alpha_0.

    coeffs holds (alpha_0, ..., alpha_{n-1}); the leading 1 is implicit.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        elems = []
        for c in coeffs:
            if isinstance(c, OElem):
                elems.append(c)
            elif isinstance(c, int):
                elems.append(field.from_int(c))
            else:
                elems.append(field.element(c))
        self.field = field
        self.coeffs = tuple(elems)

    @property
    def degree(self):
        return len(self.coeffs)

    def height(self):
        if not self.coeffs:
            return 0
        return max(c.height() for c in self.coeffs)

    def coeffs_full(self):
        """(alpha_0, ..., alpha_{n-1}, 1)."""
        return self.coeffs + (self.field.one(),)

    def evaluate(self, beta: OElem) -> OElem:
        acc = self.field.one()
        for k in range(self.degree - 1, -1, -1):
            acc = acc * beta + self.coeffs[k]
        return acc

    def divmod_linear(self, nu: OElem):
        """Quotient and remainder of division by (X + nu); both exact.

        Synthetic division at the root -nu: the Horner partials are the
        quotient coefficients (monic leading term dropped).
        """
        t = -nu
        partials = [self.field.one()]  # descending: q_{n-2}, ..., q_0
        acc = self.field.one()
        for k in range(self.degree - 1, 0, -1):
            acc = acc * t + self.coeffs[k]
            partials.append(acc)
        rem = acc * t + self.coeffs[0]
        quot_coeffs = list(reversed(partials))[:-1]  # ascending, drop the lead 1
        return OPoly(self.field, quot_coeffs), rem

    def __eq__(self, other):
        return isinstance(other, OPoly) and self.coeffs == other.coeffs \
            and self.field.key == other.field.key

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"OPoly(deg={self.degree}, coeffs={[c.coords for c in self.coeffs]})"

    def coord_rows(self):
        return [list(c.coords) for c in self.coeffs]


def opoly_mul(f_coeffs, g_coeffs, field):
    """Product of two coefficient tuples of OElem (not necessarily monic)."""
    out = [field.zero() for _ in range(len(f_coeffs) + len(g_coeffs) - 1)]
    for i, a in enumerate(f_coeffs):
        if a.is_zero():
            continue
        for j, b in enumerate(g_coeffs):
            if not b.is_zero():
                out[i + j] = out[i + j] + a * b
    return out


def opoly_divmod_monic(f: OPoly, g: OPoly):
    """Division of monic f by monic g in O_K[X]; exact quotient/remainder."""
    field = f.field
    r = list(f.coeffs_full())
    n, k = f.degree, g.degree
    if k > n:
        raise ValueError("divisor degree exceeds dividend degree")
    gfull = g.coeffs_full()
    q = [field.zero()] * (n - k + 1)
    for i in range(n - k, -1, -1):
        c = r[i + k]
        if c.is_zero():
            q[i] = c
            continue
        q[i] = c
        for j in range(k + 1):
            r[i + j] = r[i + j] - c * gfull[j]
    rem = r[:k]
    return q, rem


def embedding_root_bounds(f: OPoly, use_binomials=True):
    """Per-embedding upper bounds on |sigma_i(beta)| for any root beta of f.

    |sigma_i(beta)| <= (2^(1/n)-1)^-1 * max_k |sigma_i(alpha_{n-k}) / C(n,k)|^(1/k),
    optionally without the binomial denominators (a weaker, still valid bound).
    """
    field = f.field
    n = f.degree
    d = field.degree
    with mp.workdps(field.precision + 15):
        scale = 1 / (mp.power(2, mp.mpf(1) / n) - 1)
        bounds = []
        for i in range(d):
            best = mp.mpf(0)
            for k in range(1, n + 1):
                alpha = f.coeffs[n - k]
                if alpha.is_zero():
                    continue
                v = abs(field.embed_coords(alpha.coords, i))
                if use_binomials:
                    v = v / math.comb(n, k)
                v = v ** (mp.mpf(1) / k)
                if v > best:
                    best = v
            bounds.append(scale * best)
        return bounds


def root_norm_bound(f: OPoly) -> int:
    """Integer bound B with |N(beta)| <= B for every root beta in O_K of f."""
    field = f.field
    with mp.workdps(field.precision + 15):
        bounds = embedding_root_bounds(f, use_binomials=False)
        prod = mp.mpf(1)
        for b in bounds:
            prod *= b
        if prod == 0:
            return 0
        return int(mp.ceil(prod * (1 + mp.mpf("1e-30"))))


def root_coord_box(f: OPoly):
    """Coordinate box containing every O_K root of f (sharp binomial bounds)."""
    bounds = embedding_root_bounds(f, use_binomials=True)
    return f.field.coord_box(bounds)
