"""Negative-degree derivations of graded quotient rings and Halperin certificates.

A derivation of degree d on H = Q[x_1..x_k]/I is fixed by the images of the
generators. Since all generators are even it extends via partial
derivatives, and it is well defined exactly when

    sum_i dg/dx_i * delta(x_i)  lies in I

for every ideal generator g. That is a linear system on the coordinates of
the images. If no solution exists in any admissible degree the Meier
criterion applies; otherwise we try to split the model as a fibration and
recurse on base and fiber.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import InputError
from .model import PureModel, Presentation, is_finite_dimensional
from .poly import GeneratorSet, Polynomial, format_polynomial, partial_derivative
from .qlinalg import QMatrix, kernel_basis


@dataclass(frozen=True)
class Derivation:
    degree: int
    images: tuple[tuple[Fraction, ...], ...]
    presentation: Presentation = field(repr=False, compare=False)

    def target_degree(self, i: int) -> int:
        return self.presentation.gens.degrees[i] + self.degree

    def image(self, i: int) -> Polynomial:
        """Representative of delta(x_i) supported on basis monomials."""
        t = self.target_degree(i)
        gens = self.presentation.gens
        if not self.images[i]:
            return Polynomial.zero(gens)
        return self.presentation.class_polynomial(t, self.images[i])

    def is_zero(self) -> bool:
        return not any(any(v) for v in self.images)

    def apply(self, p: Polynomial) -> Polynomial:
        """delta(p) computed by the chain rule, not reduced."""
        out = Polynomial.zero(p.gens)
        for i in range(len(p.gens)):
            if self.images[i] and any(self.images[i]):
                out = out + partial_derivative(p, i) * self.image(i)
        return out

    def describe(self) -> list[str]:
        g = self.presentation.gens
        return [f"delta({g.names[i]}) = {format_polynomial(self.image(i))}"
                for i in range(len(g)) if self.images[i] and any(self.images[i])]


def _check_degree(d: int):
    if d >= 0 or d % 2:
        raise InputError(f"derivation degree must be negative and even, got {d}")


def _slots(pres: Presentation, d: int, include_degree_zero: bool,
           fixed_zero: Iterable[int]) -> list[int]:
    """Number of unknowns for each generator image."""
    pinned = set(fixed_zero)
    out = []
    for i, deg in enumerate(pres.gens.degrees):
        t = deg + d
        if i in pinned or t < 0 or (t == 0 and not include_degree_zero):
            out.append(0)
        else:
            out.append(pres.dim(t))
    return out


def derivation_system(pres: Presentation, d: int, include_degree_zero: bool = False,
                      fixed_zero: Iterable[int] = ()) -> tuple[QMatrix, list[int]]:
    """Constraint matrix (rows: relation coordinates, cols: image coordinates)."""
    _check_degree(d)
    gens = pres.gens
    slots = _slots(pres, d, include_degree_zero, fixed_zero)
    cols: list[tuple[int, Polynomial]] = []
    for i, s in enumerate(slots):
        if not s:
            continue
        t = gens.degrees[i] + d
        for b in pres.basis(t):
            cols.append((i, Polynomial.monomial(gens, b)))
    rows: list[list[Fraction]] = []
    for g in pres.relations:
        e = g.degree() + d
        parts = {i: partial_derivative(g, i) for i in range(len(gens)) if slots[i]}
        block = [pres.coordinates(parts[i] * b, e) if parts[i] else [Fraction(0)] * pres.dim(e)
                 for i, b in cols]
        for r in range(pres.dim(e)):
            rows.append([col[r] for col in block])
    ncols = len(cols)
    return QMatrix(len(rows), ncols, [x for r in rows for x in r]), slots


def derivation_space(pres: Presentation, d: int, include_degree_zero: bool = False,
                     fixed_zero: Iterable[int] = ()) -> list[Derivation]:
    """Basis of the degree ``d`` derivations of ``pres``."""
    mat, slots = derivation_system(pres, d, include_degree_zero, fixed_zero)
    out = []
    for v in kernel_basis(mat):
        images, pos = [], 0
        for s in slots:
            images.append(tuple(v[pos:pos + s]))
            pos += s
        out.append(Derivation(d, tuple(images), pres))
    return out


def restricted_derivation_space(pres: Presentation, d: int,
                                fixed_zero: Iterable[int]) -> list[Derivation]:
    return derivation_space(pres, d, fixed_zero=fixed_zero)


def admissible_degrees(gens: GeneratorSet) -> list[int]:
    """Even d from -2 down to -(max generator degree - 2)."""
    top = max(gens.degrees, default=0)
    return list(range(-2, -(top - 2) - 1, -2))


def leibniz_defect(delta: Derivation, u: Polynomial, v: Polynomial) -> Polynomial:
    """Normal form of delta(uv) - delta(u) v - u delta(v); zero for a derivation."""
    pres = delta.presentation
    lhs = delta.apply(u * v) - delta.apply(u) * v - u * delta.apply(v)
    return pres.normal_form(lhs)


def random_leibniz_check(delta: Derivation, trials: int = 100, seed: int = 0) -> bool:
    """delta respects products of random basis classes, evaluated through normal forms.

    Here delta is evaluated on a product by first reducing the product to its
    normal form, so this exercises well-definedness on H, not just the chain rule.
    """
    pres = delta.presentation
    gens = pres.gens
    rng = random.Random(seed)
    top = pres.formal_dimension
    degs = [d for d in range(0, top + 1, 2) if pres.dim(d)]
    for _ in range(trials):
        du, dv = rng.choice(degs), rng.choice(degs)
        u = Polynomial.monomial(gens, rng.choice(pres.basis(du)))
        v = Polynomial.monomial(gens, rng.choice(pres.basis(dv)))
        uv = pres.normal_form(u * v)
        lhs = pres.normal_form(delta.apply(uv))
        rhs = pres.normal_form(delta.apply(u) * v + u * delta.apply(v))
        if lhs != rhs:
            return False
    return True


# ---------- fibrations ----------

@dataclass(frozen=True)
class Split:
    l: int
    base_odd: tuple[int, ...]
    base: PureModel
    fiber: PureModel


def splits_as_fibration(m: PureModel) -> int | None:
    """Smallest l < k such that exactly l differentials lie in Q[x_1..x_l]."""
    s = split_model(m)
    return s.l if s else None


def split_model(m: PureModel) -> Split | None:
    """Base and fiber of the first splitting, or None.

    The odd generators whose differentials only involve x_1..x_l make up the
    base; in the usual ordering these are y_1..y_l. The fiber keeps the other
    generators with x_1..x_l set to zero.
    """
    k = m.k
    supports = [p.support_variables() for p in m.differentials]
    for l in range(1, k):
        low = set(range(l))
        base_odd = tuple(j for j, s in enumerate(supports) if s <= low)
        if len(base_odd) != l:
            continue
        keep = list(range(l))
        bg = m.gens.subset(keep)
        base = PureModel(bg, tuple(m.odd_degrees[j] for j in base_odd),
                         tuple(m.differentials[j].restrict(keep, bg) for j in base_odd),
                         tuple(m.odd_names[j] for j in base_odd))
        rest = list(range(l, k))
        fg = m.gens.subset(rest)
        fib_odd = [j for j in range(len(m.odd_degrees)) if j not in base_odd]
        fdiffs = tuple(m.differentials[j].substitute_zero(keep).restrict(rest, fg)
                       for j in fib_odd)
        try:
            fiber = PureModel(fg, tuple(m.odd_degrees[j] for j in fib_odd), fdiffs,
                              tuple(m.odd_names[j] for j in fib_odd))
        except InputError:
            continue
        return Split(l, base_odd, base, fiber)
    return None


# ---------- certificates ----------

@dataclass(frozen=True)
class HalperinCertificate:
    verdict: str                      # "DerivationFree", "SplitsAsFibration", "Inconclusive"
    model: PureModel = field(repr=False)
    dimensions: tuple[tuple[int, int], ...] = ()
    l: int | None = None
    base: "HalperinCertificate | None" = None
    fiber: "HalperinCertificate | None" = None
    witness: Derivation | None = None
    note: str = ""

    @property
    def certified(self) -> bool:
        if self.verdict == "DerivationFree":
            return True
        if self.verdict == "SplitsAsFibration":
            return bool(self.base and self.fiber and self.base.certified and self.fiber.certified)
        return False

    def lines(self, indent: int = 0) -> list[str]:
        pad = "  " * indent
        out = [f"{pad}verdict: {self.verdict}"]
        if self.model.is_balanced:
            out.append(f"{pad}tuple: {self.model.degree_tuple()}")
        out.append(f"{pad}model: {'; '.join(self.model.describe())}")
        dims = ", ".join(f"{d}:{n}" for d, n in self.dimensions)
        out.append(f"{pad}derivation dimensions: {{{dims}}}")
        if self.note:
            out.append(f"{pad}note: {self.note}")
        if self.verdict == "SplitsAsFibration":
            out.append(f"{pad}split index: {self.l}")
            out.append(f"{pad}base:")
            out.extend(self.base.lines(indent + 1))
            out.append(f"{pad}fiber:")
            out.extend(self.fiber.lines(indent + 1))
        if self.witness is not None:
            out.append(f"{pad}witness degree: {self.witness.degree}")
            for s in self.witness.describe():
                out.append(f"{pad}  {s}")
        return out

    def to_text(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def to_json(self) -> dict:
        d: dict = {"verdict": self.verdict, "certified": self.certified,
                   "model": self.model.describe(),
                   "derivation_dimensions": {str(a): b for a, b in self.dimensions}}
        if self.model.is_balanced:
            d["tuple"] = str(self.model.degree_tuple())
        if self.note:
            d["note"] = self.note
        if self.verdict == "SplitsAsFibration":
            d["split_index"] = self.l
            d["base"] = self.base.to_json()
            d["fiber"] = self.fiber.to_json()
        if self.witness is not None:
            d["witness"] = {"degree": self.witness.degree, "images": self.witness.describe()}
        return d


def presentation_check(pres: Presentation) -> tuple[tuple[tuple[int, int], ...], Derivation | None]:
    """Solution-space dimension per admissible degree, and the first basis vector found."""
    dims = []
    witness = None
    for d in admissible_degrees(pres.gens):
        basis = derivation_space(pres, d)
        dims.append((d, len(basis)))
        if basis and witness is None:
            witness = basis[0]
    return tuple(dims), witness


def halperin_check(m: PureModel) -> HalperinCertificate:
    """Meier test; on failure split as a fibration and recurse."""
    pres = m.presentation()
    if not is_finite_dimensional(m, pres):
        raise InputError("model does not have finite-dimensional cohomology")
    dims, witness = presentation_check(pres)
    if witness is None:
        return HalperinCertificate("DerivationFree", m, dims)
    split = split_model(m)
    if split is not None:
        fiber_ok = is_finite_dimensional(split.fiber)
        base_ok = is_finite_dimensional(split.base)
        if base_ok and fiber_ok:
            return HalperinCertificate("SplitsAsFibration", m, dims, split.l,
                                       halperin_check(split.base), halperin_check(split.fiber))
        return HalperinCertificate("Inconclusive", m, dims, witness=witness,
                                   note=f"split at l={split.l} has a non-finite base or fiber")
    return HalperinCertificate("Inconclusive", m, dims, witness=witness)


def halperin_check_presentation(pres: Presentation, model: PureModel) -> HalperinCertificate:
    """Meier test only, for presentations that do not come from a balanced pure model."""
    dims, witness = presentation_check(pres)
    if witness is None:
        return HalperinCertificate("DerivationFree", model, dims)
    return HalperinCertificate("Inconclusive", model, dims, witness=witness,
                               note="not a balanced pure model; no splitting attempted")
