"""Pure Sullivan models, their degree data and their cohomology rings.

For a pure model with as many odd as even generators and finite
cohomology, the cohomology is concentrated in even degrees and equals the
quotient of the polynomial ring on the even generators by the ideal of the
differentials. Everything here works degree by degree on that quotient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError
from .poly import (GeneratorSet, Monomial, Polynomial, format_polynomial,
                   monomials_of_degree)
from .qlinalg import QMatrix, SparseEchelon, congruence_diagonalize, determinant, rank_mod_p


@dataclass(frozen=True, order=True)
class DegreeTuple:
    """Exponent data of a candidate F0 space.

    Even generators sit in degrees ``2*a[i]``, odd ones in ``2*b[i] - 1``.
    """

    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self):
        a, b = tuple(self.a), tuple(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if len(a) != len(b):
            raise InputError("a and b must have the same length")
        if any(x < 1 for x in a) or any(x > y for x, y in zip(a, a[1:])):
            raise InputError(f"a={a} must be positive and nondecreasing")
        if any(x < 2 for x in b) or any(x > y for x, y in zip(b, b[1:])):
            raise InputError(f"b={b} must be >= 2 and nondecreasing")
        for ai, bi in zip(a, b):
            if bi < 2 * ai:
                raise InputError(f"b={b} violates b_i >= 2 a_i against a={a}")

    @classmethod
    def from_degrees(cls, degrees: Sequence[int]) -> "DegreeTuple":
        """Parse the display form ``(deg x_1..deg x_k, deg y_1..deg y_k)``."""
        degrees = list(degrees)
        if not degrees or len(degrees) % 2:
            raise InputError(f"degree list {degrees} must have even positive length")
        k = len(degrees) // 2
        ev, od = degrees[:k], degrees[k:]
        if any(d % 2 for d in ev) or any(d % 2 == 0 for d in od):
            raise InputError(f"{degrees}: first half must be even, second half odd")
        return cls(tuple(d // 2 for d in ev), tuple((d + 1) // 2 for d in od))

    @property
    def k(self) -> int:
        return len(self.a)

    @property
    def dimension(self) -> int:
        return 2 * sum(bi - ai for ai, bi in zip(self.a, self.b))

    @property
    def even_degrees(self) -> tuple[int, ...]:
        return tuple(2 * x for x in self.a)

    @property
    def odd_degrees(self) -> tuple[int, ...]:
        return tuple(2 * x - 1 for x in self.b)

    def degrees(self) -> tuple[int, ...]:
        return self.even_degrees + self.odd_degrees

    def chi(self) -> Fraction:
        return euler_characteristic(self)

    def __str__(self):
        return "(" + ",".join(str(d) for d in self.degrees()) + ")"


def euler_characteristic(t: DegreeTuple) -> Fraction:
    """Homotopy Euler characteristic: product of b_i / a_i."""
    chi = Fraction(1)
    for ai, bi in zip(t.a, t.b):
        chi *= Fraction(bi, ai)
    return chi


@dataclass(frozen=True)
class PoincareSeries:
    is_polynomial: bool
    coefficients: tuple[int, ...]  # indexed by degree; empty when not polynomial

    @property
    def total(self) -> int:
        return sum(self.coefficients)

    def is_nonnegative(self) -> bool:
        return self.is_polynomial and all(c >= 0 for c in self.coefficients)


def _divide_by_one_minus(num: list[int], c: int) -> list[int] | None:
    """Exact quotient of ``num`` by ``1 - t^c`` or None if the remainder is nonzero."""
    # -t^c + 1 has leading coefficient -1: long division from the top stays integral
    rem = list(num)
    deg = len(rem) - 1
    while deg >= 0 and rem[deg] == 0:
        deg -= 1
    if deg < 0:
        return [0]
    if deg < c:
        return None
    q = [0] * (deg - c + 1)
    for top in range(deg, c - 1, -1):
        coef = rem[top]
        if coef == 0:
            continue
        qc = -coef
        q[top - c] = qc
        rem[top] -= -qc
        rem[top - c] -= qc
    if any(rem[:c]):
        return None
    return q


def poincare_series(t: DegreeTuple) -> PoincareSeries:
    """Hilbert series prod(1 - t^{2b_i}) / prod(1 - t^{2a_i}) by long division."""
    num = [1]
    for bi in t.b:
        e = 2 * bi
        new = [0] * (len(num) + e)
        for i, v in enumerate(num):
            new[i] += v
            new[i + e] -= v
        num = new
    for ai in t.a:
        num = _divide_by_one_minus(num, 2 * ai)
        if num is None:
            return PoincareSeries(False, ())
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return PoincareSeries(True, tuple(num))


# ---------- pure models ----------

@dataclass(frozen=True)
class PureModel:
    """Pure Sullivan algebra: closed even generators, odd ones with d y in Q[x].

    Differentials must be homogeneous of degree ``odd_degree + 1`` and
    decomposable (no linear terms), as in a minimal model.
    """

    gens: GeneratorSet
    odd_degrees: tuple[int, ...]
    differentials: tuple[Polynomial, ...]
    odd_names: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "odd_degrees", tuple(self.odd_degrees))
        object.__setattr__(self, "differentials", tuple(self.differentials))
        names = tuple(self.odd_names) or tuple(f"y{i + 1}" for i in range(len(self.odd_degrees)))
        object.__setattr__(self, "odd_names", names)
        if len(self.differentials) != len(self.odd_degrees) or len(names) != len(self.odd_degrees):
            raise InputError("odd generators, names and differentials differ in number")
        if set(names) & set(self.gens.names) or len(set(names)) != len(names):
            raise InputError("generator names must be distinct")
        for name, deg, dy in zip(names, self.odd_degrees, self.differentials):
            if deg < 3 or deg % 2 == 0:
                raise InputError(f"odd generator {name} has degree {deg}, need odd >= 3")
            if dy.gens != self.gens:
                raise InputError(f"differential of {name} uses another generator set")
            for mono in dy.terms:
                if self.gens.degree_of(mono) != deg + 1:
                    raise InputError(
                        f"d{name} = {dy} is not homogeneous of degree {deg + 1}")
                if sum(mono) < 2:
                    raise InputError(f"d{name} = {dy} has a linear term (model not minimal)")

    @classmethod
    def build(cls, even_degrees: Sequence[int], odd_degrees: Sequence[int],
              differentials: Sequence[str | Polynomial], names: Sequence[str] | None = None,
              odd_names: Sequence[str] | None = None) -> "PureModel":
        from .poly import parse_polynomial

        gens = GeneratorSet(tuple(names), tuple(even_degrees)) if names else \
            GeneratorSet.standard(even_degrees)
        if len(odd_degrees) != len(differentials):
            raise InputError("need one differential per odd generator")
        diffs = []
        for deg, dy in zip(odd_degrees, differentials):
            if isinstance(dy, str):
                dy = parse_polynomial(dy, gens, deg + 1)
            diffs.append(dy)
        return cls(gens, tuple(odd_degrees), tuple(diffs), tuple(odd_names or ()))

    @property
    def k(self) -> int:
        return len(self.gens)

    @property
    def is_balanced(self) -> bool:
        return len(self.odd_degrees) == len(self.gens)

    def _require_balanced(self):
        if not self.is_balanced:
            raise InputError("model needs as many odd as even generators")

    def degree_tuple(self) -> DegreeTuple:
        self._require_balanced()
        return DegreeTuple(tuple(sorted(d // 2 for d in self.gens.degrees)),
                           tuple(sorted((d + 1) // 2 for d in self.odd_degrees)))

    @property
    def formal_dimension(self) -> int:
        self._require_balanced()
        return sum(self.odd_degrees) + len(self.odd_degrees) - 2 * sum(
            d // 2 for d in self.gens.degrees)

    def presentation(self, order: str = "lex") -> "Presentation":
        n = self.formal_dimension if self.is_balanced else None
        return Presentation(self.gens, self.differentials, formal_dimension=n, order=order)

    def canonical(self) -> "PureModel":
        """Same model with odd generators sorted by degree (stable)."""
        perm = sorted(range(len(self.odd_degrees)), key=lambda i: self.odd_degrees[i])
        return PureModel(self.gens, tuple(self.odd_degrees[i] for i in perm),
                         tuple(self.differentials[i] for i in perm),
                         tuple(self.odd_names[i] for i in perm))

    def describe(self) -> list[str]:
        return [f"d{n} = {format_polynomial(p)}" for n, p in zip(self.odd_names, self.differentials)]


def product_model(*models: PureModel) -> PureModel:
    """Tensor product of pure models, generators renamed x1.., y1.. in order.

    Even generators are merged in stable degree order, so the result again
    has nondecreasing even degrees.
    """
    even = []
    for mi, m in enumerate(models):
        for i, d in enumerate(m.gens.degrees):
            even.append((d, mi, i))
    even.sort(key=lambda t: t[0])
    gens = GeneratorSet.standard([d for d, _, _ in even])
    where = {(mi, i): j for j, (_, mi, i) in enumerate(even)}
    odd = []
    for mi, m in enumerate(models):
        for deg, dy in zip(m.odd_degrees, m.differentials):
            terms = {}
            for mono, c in dy.terms.items():
                e = [0] * len(gens)
                for i, x in enumerate(mono):
                    e[where[mi, i]] = x
                terms[tuple(e)] = c
            odd.append((deg, Polynomial(gens, terms, deg + 1)))
    odd.sort(key=lambda t: t[0])
    return PureModel(gens, tuple(d for d, _ in odd), tuple(p for _, p in odd))


# ---------- quotient rings ----------

@dataclass
class _Slice:
    degree: int
    monomials: list[Monomial]
    index: dict[Monomial, int]
    echelon: SparseEchelon
    basis: list[Monomial]      # non-pivot monomials, in column order
    basis_index: dict[Monomial, int]


class Presentation:
    """Graded quotient Q[x_1..x_k] / (relations), computed lazily per degree.

    In each degree the ideal slice is spanned by all products of monomials
    with relations that land there. Monomial columns are ordered by
    descending lex (``order="lex"``) or its reverse (``order="revlex"``);
    the cohomology basis is the non-pivot monomials, which gives a
    deterministic normal form.
    """

    def __init__(self, gens: GeneratorSet, relations: Iterable[Polynomial],
                 formal_dimension: int | None = None, order: str = "lex"):
        if order not in ("lex", "revlex"):
            raise ValueError(f"unknown monomial order {order!r}")
        rels = []
        for r in relations:
            if r.gens != gens:
                raise InputError("relation over a different generator set")
            if r.is_zero():
                continue
            if not r.is_homogeneous():
                raise InputError(f"relation {r} is not homogeneous")
            rels.append(r)
        self.gens = gens
        self.relations = tuple(rels)
        self.order = order
        self._formal_dimension = formal_dimension
        self._slices: dict[int, _Slice] = {}

    @property
    def max_generator_degree(self) -> int:
        return max(self.gens.degrees, default=0)

    def _slice(self, d: int) -> _Slice:
        s = self._slices.get(d)
        if s is not None:
            return s
        monos = monomials_of_degree(self.gens, d)
        if self.order == "revlex":
            monos = monos[::-1]
        index = {m: i for i, m in enumerate(monos)}
        ech = SparseEchelon()
        for rel in self.relations:
            e = rel.degree()
            if e is None or e > d:
                continue
            rterms = list(rel.terms.items())
            for m in monomials_of_degree(self.gens, d - e):
                row = {}
                for rm, c in rterms:
                    row[index[tuple(a + b for a, b in zip(m, rm))]] = c
                ech.add(row)
                if len(ech) == len(monos):
                    break
            if len(ech) == len(monos):
                break
        ech.finalize()
        pivots = set(ech.pivots)
        basis = [m for i, m in enumerate(monos) if i not in pivots]
        s = _Slice(d, monos, index, ech, basis, {m: i for i, m in enumerate(basis)})
        self._slices[d] = s
        return s

    def slice_rows(self, d: int) -> tuple[list[Monomial], list[dict[int, Fraction]]]:
        """Monomials of degree ``d`` and all monomial-times-relation rows over them."""
        monos = monomials_of_degree(self.gens, d)
        if self.order == "revlex":
            monos = monos[::-1]
        index = {m: i for i, m in enumerate(monos)}
        rows = []
        for rel in self.relations:
            e = rel.degree()
            if e is None or e > d:
                continue
            for m in monomials_of_degree(self.gens, d - e):
                rows.append({index[tuple(a + b for a, b in zip(m, rm))]: c
                             for rm, c in rel.terms.items()})
        return monos, rows

    def full_rank_mod_p(self, d: int) -> bool:
        """True only if the ideal fills degree ``d`` (checked mod a prime; sound, not complete)."""
        if d in self._slices:
            return not self._slices[d].basis
        # only worth it for dense relations on moderate slices; sparse ones
        # eliminate exactly in no time
        if sum(len(r.terms) for r in self.relations) < 3 * len(self.relations) or \
                len(monomials_of_degree(self.gens, d)) > 1500:
            return False
        monos, rows = self.slice_rows(d)
        if len(rows) < len(monos):
            return False
        r = rank_mod_p(rows, len(monos))
        return r == len(monos)

    def dim(self, d: int) -> int:
        if d < 0 or d % 2:
            return 0
        return len(self._slice(d).basis)

    def basis(self, d: int) -> list[Monomial]:
        if d < 0 or d % 2:
            return []
        return list(self._slice(d).basis)

    def coordinates(self, p: Polynomial, d: int | None = None) -> list[Fraction]:
        """Coordinates of the class of the homogeneous ``p`` in ``basis(d)``."""
        if d is None:
            d = p.degree()
            if d is None:
                raise InputError("polynomial is not homogeneous")
        if d < 0 or d % 2:
            if p.terms:
                raise InputError(f"polynomial has no terms in degree {d}")
            return []
        s = self._slice(d)
        vec = {}
        for m, c in p.terms.items():
            if self.gens.degree_of(m) != d:
                raise InputError(f"term outside degree {d}")
            vec[s.index[m]] = c
        red = s.echelon.reduce(vec)
        out = [Fraction(0)] * len(s.basis)
        for col, c in red.items():
            out[s.basis_index[s.monomials[col]]] = c
        return out

    def normal_form(self, p: Polynomial) -> Polynomial:
        """Reduced representative of ``p`` supported on basis monomials."""
        by_degree: dict[int, dict] = {}
        for m, c in p.terms.items():
            by_degree.setdefault(self.gens.degree_of(m), {})[m] = c
        terms = {}
        for d, part in by_degree.items():
            coords = self.coordinates(Polynomial(self.gens, part), d)
            for b, c in zip(self._slice(d).basis, coords):
                if c:
                    terms[b] = c
        return Polynomial(self.gens, terms)

    def class_polynomial(self, d: int, coords: Sequence) -> Polynomial:
        basis = self.basis(d)
        if len(coords) != len(basis):
            raise ValueError("coordinate vector has the wrong length")
        return Polynomial(self.gens, {b: c for b, c in zip(basis, coords) if c})

    @property
    def formal_dimension(self) -> int:
        """Top nonzero degree; found by scanning when not given up front."""
        if self._formal_dimension is None:
            self._formal_dimension = self._scan_top_degree()
        return self._formal_dimension

    def _scan_top_degree(self, limit: int | None = None) -> int:
        w = self.max_generator_degree
        if limit is None:
            limit = sum(r.degree() for r in self.relations) + 2 * w + 2
        top, zeros, d = 0, 0, 2
        while d <= limit:
            if self.dim(d):
                top, zeros = d, 0
            else:
                zeros += 2
                if zeros >= w:
                    return top
            d += 2
        raise InputError("quotient does not vanish within the search limit (infinite?)")

    def betti(self, max_degree: int | None = None) -> list[int]:
        n = self.formal_dimension if max_degree is None else max_degree
        return [self.dim(d) for d in range(n + 1)]

    @property
    def top_class(self) -> Monomial:
        top = self.basis(self.formal_dimension)
        if len(top) != 1:
            raise InputError(f"top degree has dimension {len(top)}, expected 1")
        return top[0]


CohomologyPresentation = Presentation


def cohomology(m: PureModel, max_degree: int | None = None, order: str = "lex") -> Presentation:
    """Presentation of the quotient ring with slices computed up to ``max_degree``."""
    pres = m.presentation(order=order)
    top = max_degree if max_degree is not None else pres.formal_dimension
    for d in range(0, top + 1, 2):
        pres.dim(d)
    return pres


@dataclass(frozen=True)
class FiniteDimVerdict:
    passed: bool
    formal_dimension: int
    window: tuple[int, int]
    top_dimension: int
    nonzero_above: tuple[int, ...] = field(default=())

    def __bool__(self):
        return self.passed

    @property
    def justification(self) -> str:
        lo, hi = self.window
        return (f"quotient checked zero in degrees ({lo}, {hi}]; a monomial of higher degree "
                f"is a multiple of one in that window, so the quotient vanishes above {lo}")


def is_finite_dimensional(m: PureModel, presentation: Presentation | None = None) -> FiniteDimVerdict:
    """PASS iff the quotient vanishes in degrees (n, n + W] and not in degree n.

    ``n`` is the formal dimension and ``W`` the largest even generator degree.
    """
    n = m.formal_dimension
    w = max(m.gens.degrees)
    pres = presentation or m.presentation()
    # full rank mod p forces full rank over Q, so the modular test can only skip work
    nonzero = tuple(d for d in range(n + 2, n + w + 1, 2)
                    if not pres.full_rank_mod_p(d) and pres.dim(d))
    top = pres.dim(n)
    return FiniteDimVerdict(not nonzero and top > 0, n, (n, n + w), top, nonzero)


def poincare_duality_check(c: Presentation | Sequence[int]) -> bool:
    """b_n = 1 and b_d = b_{n-d}; accepts a presentation or a Betti vector."""
    betti = list(c) if not isinstance(c, Presentation) else c.betti()
    if not betti:
        return False
    return betti[-1] == 1 and betti == betti[::-1]


@dataclass(frozen=True)
class IntersectionForm:
    matrix: QMatrix
    signature: int
    basis: tuple[Monomial, ...]
    top_class: Monomial

    @property
    def diagonal(self) -> list[Fraction]:
        return congruence_diagonalize(self.matrix)

    @property
    def determinant(self) -> Fraction:
        return determinant(self.matrix) if self.matrix.rows else Fraction(1)


def intersection_form(m: PureModel, presentation: Presentation | None = None) -> IntersectionForm:
    """Middle-degree cup product pairing normalized against the top class."""
    n = m.formal_dimension
    if n % 4:
        raise InputError(f"formal dimension {n} is not divisible by 4")
    pres = presentation or m.presentation()
    verdict = is_finite_dimensional(m, pres)
    if not verdict:
        raise InputError("model does not have finite-dimensional cohomology")
    top = pres.top_class
    mid = pres.basis(n // 2)
    g = m.gens
    rows = []
    for u in mid:
        row = []
        for v in mid:
            prod = Polynomial.monomial(g, tuple(a + b for a, b in zip(u, v)))
            coords = pres.coordinates(prod, n)
            row.append(coords[0])
        rows.append(row)
    mat = QMatrix(len(mid), len(mid), [x for r in rows for x in r])
    d = congruence_diagonalize(mat)
    sig = sum(1 for x in d if x > 0) - sum(1 for x in d if x < 0)
    return IntersectionForm(mat, sig, tuple(mid), top)
