"""Sparse polynomials over Q in even-degree weighted variables."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import InputError
from .qlinalg import as_rational

Monomial = tuple[int, ...]


@dataclass(frozen=True)
class GeneratorSet:
    names: tuple[str, ...]
    degrees: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if len(self.names) != len(self.degrees):
            raise ValueError("names and degrees differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")
        for name in self.names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", name):
                raise ValueError(f"invalid generator name {name!r}")
        for d in self.degrees:
            if d < 2 or d % 2:
                raise ValueError(f"generator degree {d} is not even and >= 2")
        if any(x > y for x, y in zip(self.degrees, self.degrees[1:])):
            raise ValueError("generator degrees must be nondecreasing")

    @classmethod
    def standard(cls, degrees: Iterable[int], prefix: str = "x") -> "GeneratorSet":
        degrees = tuple(degrees)
        return cls(tuple(f"{prefix}{i + 1}" for i in range(len(degrees))), degrees)

    def __len__(self):
        return len(self.degrees)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown generator {name!r}") from None

    def degree_of(self, mono: Monomial) -> int:
        return sum(e * d for e, d in zip(mono, self.degrees))

    def subset(self, indices: Iterable[int]) -> "GeneratorSet":
        indices = list(indices)
        return GeneratorSet(tuple(self.names[i] for i in indices),
                            tuple(self.degrees[i] for i in indices))


@lru_cache(maxsize=None)
def _monomials(degrees: tuple[int, ...], d: int) -> tuple[Monomial, ...]:
    if not degrees:
        return ((),) if d == 0 else ()
    first, rest = degrees[0], degrees[1:]
    out = []
    for e in range(d // first, -1, -1):
        for tail in _monomials(rest, d - e * first):
            out.append((e, *tail))
    return tuple(out)


def monomials_of_degree(gens: GeneratorSet, d: int) -> list[Monomial]:
    """Monomials of weighted degree ``d``, descending lex on exponents.

    The first generator dominates: ``x1^3`` precedes ``x1*x2``.
    """
    if d < 0 or d % 2:
        raise ValueError(f"degree must be even and nonnegative, got {d}")
    return list(_monomials(gens.degrees, d))


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to Fractions."""

    __slots__ = ("gens", "terms", "declared_degree")

    def __init__(self, gens: GeneratorSet, terms: Mapping[Monomial, object] = (),
                 declared_degree: int | None = None):
        clean: dict[Monomial, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        n = len(gens)
        for mono, c in items:
            mono = tuple(mono)
            if len(mono) != n or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono}")
            c = as_rational(c)
            if c:
                clean[mono] = clean.get(mono, 0) + c
                if not clean[mono]:
                    del clean[mono]
        if declared_degree is not None:
            for mono in clean:
                if gens.degree_of(mono) != declared_degree:
                    raise ValueError(
                        f"term {format_monomial(gens, mono)} has degree "
                        f"{gens.degree_of(mono)}, expected {declared_degree}")
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "declared_degree", declared_degree)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    def __reduce__(self):
        return (Polynomial, (self.gens, self.terms, self.declared_degree))

    @classmethod
    def zero(cls, gens: GeneratorSet) -> "Polynomial":
        return cls(gens, {})

    @classmethod
    def one(cls, gens: GeneratorSet) -> "Polynomial":
        return cls(gens, {(0,) * len(gens): 1}, 0)

    @classmethod
    def monomial(cls, gens: GeneratorSet, mono: Monomial, coeff=1) -> "Polynomial":
        return cls(gens, {tuple(mono): coeff})

    @classmethod
    def variable(cls, gens: GeneratorSet, i: int) -> "Polynomial":
        mono = [0] * len(gens)
        mono[i] = 1
        return cls.monomial(gens, tuple(mono))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {self.gens.degree_of(m) for m in self.terms}

    def degree(self) -> int | None:
        """Weighted degree if homogeneous (declared degree for zero), else None."""
        ds = self.degrees()
        if not ds:
            return self.declared_degree
        return ds.pop() if len(ds) == 1 else None

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def _check(self, other: "Polynomial"):
        if self.gens != other.gens:
            raise ValueError("generator sets differ")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Polynomial(self.gens, terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.gens, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, c) -> "Polynomial":
        c = as_rational(c)
        return Polynomial(self.gens, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        out = Polynomial.one(self.gens)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.gens == other.gens and self.terms == other.terms

    def __hash__(self):
        return hash((self.gens, frozenset(self.terms.items())))

    def support_variables(self) -> set[int]:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    def min_total_degree(self) -> int:
        return min((sum(m) for m in self.terms), default=0)

    def substitute_zero(self, indices: Iterable[int]) -> "Polynomial":
        """Set the listed variables to zero."""
        idx = set(indices)
        return Polynomial(self.gens, {m: c for m, c in self.terms.items()
                                      if not any(m[i] for i in idx)})

    def restrict(self, keep: list[int], gens: GeneratorSet) -> "Polynomial":
        """Re-express over the subset ``keep`` of variables (others must be absent)."""
        terms = {}
        keep_set = set(keep)
        for m, c in self.terms.items():
            if any(e for i, e in enumerate(m) if i not in keep_set):
                raise ValueError("polynomial involves a dropped variable")
            terms[tuple(m[i] for i in keep)] = c
        return Polynomial(gens, terms, self.declared_degree)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: t[0], reverse=True)

    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    out: dict[Monomial, Fraction] = {}
    for m1, c1 in p.terms.items():
        for m2, c2 in q.terms.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            out[m] = out.get(m, 0) + c1 * c2
    deg = None
    if p.declared_degree is not None and q.declared_degree is not None:
        deg = p.declared_degree + q.declared_degree
    return Polynomial(p.gens, out, deg)


def partial_derivative(p: Polynomial, i: int) -> Polynomial:
    if not 0 <= i < len(p.gens):
        raise IndexError(f"generator index {i} out of range")
    out = {}
    for m, c in p.terms.items():
        if m[i]:
            mm = list(m)
            mm[i] -= 1
            out[tuple(mm)] = c * m[i]
    deg = None if p.declared_degree is None else p.declared_degree - p.gens.degrees[i]
    if deg is not None and deg < 0:
        deg = None
    return Polynomial(p.gens, out, deg)


# ---------- text form ----------

def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(gens: GeneratorSet, mono: Monomial) -> str:
    parts = []
    for name, e in zip(gens.names, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def format_polynomial(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    out = []
    for i, (m, c) in enumerate(p.sorted_terms()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = format_monomial(p.gens, m)
        if mono == "1":
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        if i == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f"{sign} {body}")
    return " ".join(out)


class PolynomialSyntaxError(InputError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_']*)|(\^)|(\*)|([+-]))")


def parse_polynomial(text: str, gens: GeneratorSet,
                     declared_degree: int | None = None) -> Polynomial:
    """Parse ``c * x1^e1 * x2^e2 + ...`` (whitespace-insensitive).

    Coefficients are integers or ``p/q``; a term may omit its coefficient.
    With ``declared_degree`` every term must have that weighted degree.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolynomialSyntaxError(f"unexpected character {text[pos]!r} at column {pos + 1}")
        kind = next(i for i in range(1, 6) if m.group(i) is not None)
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    if not tokens:
        raise PolynomialSyntaxError("empty polynomial")

    n = len(gens)
    terms: dict[Monomial, Fraction] = {}
    i = 0

    def expect_factor():
        nonlocal i
        if i >= len(tokens):
            raise PolynomialSyntaxError("expression ends after an operator")
        kind, val, col = tokens[i]
        if kind == 1:
            i += 1
            return Fraction(val), None
        if kind == 2:
            if val not in gens.names:
                raise PolynomialSyntaxError(f"unknown generator {val!r} at column {col + 1}")
            i += 1
            e = 1
            if i < len(tokens) and tokens[i][0] == 3:
                i += 1
                if i >= len(tokens) or tokens[i][0] != 1 or "/" in tokens[i][1]:
                    raise PolynomialSyntaxError(f"exponent after {val!r} must be a nonnegative integer")
                e = int(tokens[i][1])
                i += 1
            return None, (gens.index(val), e)
        raise PolynomialSyntaxError(f"unexpected {val!r} at column {col + 1}")

    first = True
    while i < len(tokens):
        sign = 1
        if tokens[i][0] == 5:
            sign = -1 if tokens[i][1] == "-" else 1
            i += 1
        elif not first:
            raise PolynomialSyntaxError(f"expected '+' or '-' at column {tokens[i][2] + 1}")
        first = False
        coeff = Fraction(sign)
        mono = [0] * n
        while True:
            c, var = expect_factor()
            if c is not None:
                coeff *= c
            else:
                mono[var[0]] += var[1]
            if i < len(tokens) and tokens[i][0] == 4:
                i += 1
                continue
            break
        key = tuple(mono)
        terms[key] = terms.get(key, 0) + coeff
    poly = Polynomial(gens, {m: c for m, c in terms.items() if c})
    if declared_degree is not None:
        for m in poly.terms:
            dm = gens.degree_of(m)
            if dm != declared_degree:
                raise PolynomialSyntaxError(
                    f"term {format_monomial(gens, m)} has degree {dm}, "
                    f"expected {declared_degree}")
        poly = Polynomial(gens, poly.terms, declared_degree)
    return poly
