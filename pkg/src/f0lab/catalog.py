"""Explicit pure models: rank one building blocks and hand-built realizations."""

from __future__ import annotations

from .errors import InputError
from .model import DegreeTuple, PureModel, is_finite_dimensional, product_model
from .poly import (GeneratorSet, Polynomial, format_polynomial, monomials_of_degree,
                   parse_polynomial)


def truncated(degree: int, height: int, name: str = "x") -> PureModel:
    """Q[x]/(x^height) with deg x = degree, e.g. spheres and projective spaces."""
    if height < 2:
        raise InputError("truncation height must be at least 2")
    return PureModel.build([degree], [degree * height - 1], [f"{name}^{height}"], names=[name])


def sphere(n: int) -> PureModel:
    if n % 2 or n < 2:
        raise InputError("only even spheres have F0 models")
    return truncated(n, 2)


def complex_projective(n: int) -> PureModel:
    return truncated(2, n + 1)


def quaternionic_projective(n: int) -> PureModel:
    return truncated(4, n + 1)


def model_4_6_9_11() -> PureModel:
    return PureModel.build([4, 6], [9, 11], ["x1*x2", "x1^3 + x2^2"])


def model_4_6_11_13() -> PureModel:
    return PureModel.build([4, 6], [11, 13], ["x1^3 + x2^2", "x1^2*x2"])


def model_2_6_7_11() -> PureModel:
    return PureModel.build([2, 6], [7, 11], ["x*y", "x^6 + y^2"], names=["x", "y"],
                           odd_names=["x'", "y'"])


def s6xs6_family(k) -> PureModel:
    """du' = u^2 + k v^2, dv' = u v with deg u = deg v = 6; k = 1 is S^6 x S^6."""
    gens = GeneratorSet(("u", "v"), (6, 6))
    du = Polynomial(gens, {(2, 0): 1, (0, 2): k}, 12)
    dv = Polynomial(gens, {(1, 1): 1}, 12)
    return PureModel(gens, (11, 11), (du, dv), ("u'", "v'"))


def homogeneous_repairs(text: str, gens: GeneratorSet, degree: int) -> list[Polynomial]:
    """Homogeneous candidates for a differential whose text has off-degree terms.

    Terms of the wrong degree are replaced one at a time: first by the same
    power of another generator, then by any other decomposable monomial of
    the right degree. Candidates come back in that order, deduplicated.
    """
    raw = parse_polynomial(text, gens)
    good = {m: c for m, c in raw.terms.items() if gens.degree_of(m) == degree}
    bad = [(m, c) for m, c in raw.sorted_terms() if gens.degree_of(m) != degree]
    if not bad:
        return [Polynomial(gens, good, degree)]
    pool = [m for m in monomials_of_degree(gens, degree) if sum(m) >= 2 and m not in good]
    options = []
    for m, c in bad:
        e = max(m)
        same_power = [t for t in pool if sorted(t)[-1] == e and sum(t) == e]
        rest = [t for t in pool if t not in same_power]
        options.append([(t, c) for t in same_power + rest])

    out: list[Polynomial] = []
    seen = set()

    def rec(i, terms):
        if i == len(options):
            p = Polynomial(gens, terms, degree)
            key = frozenset(p.terms.items())
            if key not in seen and p.terms:
                seen.add(key)
                out.append(p)
            return
        for t, c in options[i]:
            if t in terms:
                continue
            rec(i + 1, {**terms, t: c})

    rec(0, dict(good))
    return out


def repaired_model(even_degrees, odd_degrees, differentials, index: int,
                   names=None) -> tuple[PureModel, Polynomial]:
    """First finite-dimensional model obtained by repairing differential ``index``."""
    gens = GeneratorSet(tuple(names), tuple(even_degrees)) if names else \
        GeneratorSet.standard(even_degrees)
    fixed = [parse_polynomial(t, gens, d + 1) if i != index else None
             for i, (t, d) in enumerate(zip(differentials, odd_degrees))]
    for cand in homogeneous_repairs(differentials[index], gens, odd_degrees[index] + 1):
        diffs = list(fixed)
        diffs[index] = cand
        m = PureModel(gens, tuple(odd_degrees), tuple(diffs))
        if is_finite_dimensional(m):
            return m, cand
    raise InputError(f"no homogeneous repair of {differentials[index]!r} gives a finite model")


# literal differentials as printed; the last one is not homogeneous
LITERAL_4_4_6_7_9_11 = ("x1^2", "x2*x3", "x2^3 + x2^2")


def model_4_4_6_7_9_11() -> PureModel:
    m, _ = repaired_model([4, 4, 6], [7, 9, 11], LITERAL_4_4_6_7_9_11, 2)
    return m


def explicit_models() -> dict[DegreeTuple, list[PureModel]]:
    """Hand-built realizations for tuples that are not plain products of truncations."""
    base = model_4_6_9_11()
    models = [
        base,
        product_model(base, sphere(2)),
        model_4_6_11_13(),
        product_model(base, complex_projective(2)),
        product_model(base, sphere(2), sphere(2)),
        model_4_4_6_7_9_11(),
        model_2_6_7_11(),
        s6xs6_family(1),
    ]
    out: dict[DegreeTuple, list[PureModel]] = {}
    for m in models:
        out.setdefault(m.degree_tuple(), []).append(m)
    return out


def wedge_presentation():
    """Q[x, y]/(x^2, xy, y^2) with deg x = 2, deg y = 6 (not Poincare duality)."""
    from .model import Presentation

    gens = GeneratorSet(("x", "y"), (2, 6))
    rels = [parse_polynomial(t, gens) for t in ("x^2", "x*y", "y^2")]
    return Presentation(gens, rels)


def describe(m: PureModel) -> str:
    return "; ".join(f"d{n} = {format_polynomial(p)}" for n, p in zip(m.odd_names, m.differentials))
