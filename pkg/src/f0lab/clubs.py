"""Clubs in Z_2^3 and weight profiles of Z_2^r isotropy representations.

Elements of Z_2^r are bit masks; rho, sigma, tau are 1, 2, 4. A club is
the complement of an index-2 subgroup among the nonzero elements, i.e.
{x : <v, x> = 1} for a nonzero functional v.
"""

from __future__ import annotations

import enum
import random
from collections import Counter
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement, product

import numpy as np

from .errors import InputError

RANK = 3
NONZERO = tuple(range(1, 1 << RANK))
_LETTERS = ("ρ", "σ", "τ", "υ")


def dot(u: int, v: int) -> int:
    return bin(u & v).count("1") & 1


def label(x: int) -> str:
    """Product notation, e.g. 6 -> 'στ'."""
    if x == 0:
        return "1"
    return "".join(_LETTERS[i] for i in range(x.bit_length()) if x >> i & 1)


@dataclass(frozen=True)
class Club:
    functional: int
    members: frozenset[int]

    @classmethod
    def from_functional(cls, v: int) -> "Club":
        if not 0 < v < 1 << RANK:
            raise InputError(f"functional {v} is not a nonzero element of Z_2^3")
        return cls(v, frozenset(x for x in NONZERO if dot(v, x)))

    @classmethod
    def from_members(cls, members) -> "Club":
        ms = frozenset(members)
        for c in all_clubs():
            if c.members == ms:
                return c
        raise InputError(f"{sorted(ms)} is not a club")

    def complement_subgroup(self) -> frozenset[int]:
        return frozenset({0} | (set(NONZERO) - self.members))

    def __str__(self):
        return "{" + ", ".join(label(x) for x in sorted(self.members)) + "}"


def all_clubs() -> list[Club]:
    return [Club.from_functional(v) for v in NONZERO]


def is_subgroup(s: frozenset[int]) -> bool:
    return 0 in s and all(a ^ b in s for a in s for b in s)


def index_two_subgroups() -> list[frozenset[int]]:
    """Found by brute force over 4-element subsets, independent of functionals."""
    return [frozenset(s) for s in combinations(range(1 << RANK), 4)
            if 0 in s and is_subgroup(frozenset(s))]


def has_triple_product_property(c: Club) -> bool:
    return all(a ^ b ^ d in c.members
               for a, b, d in product(c.members, repeat=3))


class PairType(str, enum.Enum):
    EQUAL = "Equal"
    TWO_COMMON = "TwoCommon"


class TripleType(str, enum.Enum):
    TYPE_I = "TypeI"
    TYPE_II = "TypeII"


def classify_pair(c1: Club, c2: Club) -> PairType:
    common = c1.members & c2.members
    if len(common) == 4:
        return PairType.EQUAL
    if len(common) == 2:
        return PairType.TWO_COMMON
    raise AssertionError(f"clubs {c1} and {c2} share {len(common)} members")


def classify_triple(c1: Club, c2: Club, c3: Club) -> TripleType:
    """TypeI: pairwise intersections are disjoint 2-sets covering six involutions."""
    if len({c1, c2, c3}) != 3:
        raise InputError("triple classification needs three distinct clubs")
    inter = [c1.members & c2.members, c1.members & c3.members, c2.members & c3.members]
    cover = inter[0] | inter[1] | inter[2]
    if all(len(s) == 2 for s in inter) and len(cover) == 6:
        return TripleType.TYPE_I
    return TripleType.TYPE_II


@dataclass(frozen=True)
class CensusRow:
    clubs: tuple[Club, Club, Club]
    kind: TripleType
    intersections: tuple[frozenset[int], ...]
    union: frozenset[int]
    missing: frozenset[int]

    def render(self) -> str:
        cl = " ".join(str(c) for c in self.clubs)
        ints = " ".join("{" + ",".join(label(x) for x in sorted(s)) + "}" for s in self.intersections)
        miss = ",".join(label(x) for x in sorted(self.missing)) or "-"
        return f"{self.kind.value:6}  {cl}  pairwise {ints}  union {len(self.union)}  missing {miss}"


def census() -> list[CensusRow]:
    rows = []
    for c1, c2, c3 in combinations(all_clubs(), 3):
        inter = (c1.members & c2.members, c1.members & c3.members, c2.members & c3.members)
        union = c1.members | c2.members | c3.members
        rows.append(CensusRow((c1, c2, c3), classify_triple(c1, c2, c3), inter, union,
                              frozenset(NONZERO) - union))
    return rows


# ---------- fixed point configurations ----------

@dataclass(frozen=True)
class FixedPointConfig:
    points: tuple[Club, ...] = ()

    def fixed_by(self, iota: int) -> int:
        """Number of points whose club contains ``iota``."""
        return sum(1 for c in self.points if iota in c.members)


def double_count_identity(cfg: FixedPointConfig) -> tuple[int, int]:
    lhs = 4 * len(cfg.points)
    rhs = sum(cfg.fixed_by(i) for i in NONZERO)
    return lhs, rhs


def exhaustive_configs(max_points: int = 3):
    clubs = all_clubs()
    for n in range(max_points + 1):
        for pts in product(clubs, repeat=n):
            yield FixedPointConfig(pts)


def random_configs(count: int = 1000, max_points: int = 50, seed: int = 0):
    rng = random.Random(seed)
    clubs = all_clubs()
    for _ in range(count):
        n = rng.randint(0, max_points)
        yield FixedPointConfig(tuple(rng.choice(clubs) for _ in range(n)))


# ---------- weight profiles ----------

RIGIDITY_PARAMS = {12: (3, 6, 3), 14: (4, 7, 3), 16: (4, 8, 4)}


@dataclass(frozen=True)
class WeightMap:
    r: int
    columns: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.columns)

    def weight(self, iota: int) -> int:
        return sum(dot(iota, c) for c in self.columns)

    def weights(self) -> tuple[int, ...]:
        return tuple(self.weight(i) for i in range(1, 1 << self.r))

    def profile(self) -> tuple[int, ...]:
        return tuple(sorted(self.weights()))


def parity_matrix(r: int) -> np.ndarray:
    n = (1 << r) - 1
    idx = np.arange(1, n + 1)
    anded = idx[:, None] & idx[None, :]
    bits = np.zeros_like(anded)
    for b in range(r):
        bits += (anded >> b) & 1
    return (bits & 1).astype(np.int16)


@dataclass(frozen=True)
class RigidityResult:
    dim: int
    r: int
    m: int
    min_weight: int
    multisets: int
    admissible: int
    profiles: frozenset[tuple[int, ...]]
    weight_sum_ok: bool
    examples: tuple[tuple[int, ...], ...] = ()


def rigidity(dim: int, chunk: int = 1 << 16) -> RigidityResult:
    """All multisets of m nonzero columns with every weight >= min_weight."""
    if dim not in RIGIDITY_PARAMS:
        raise InputError(f"rigidity profiles are defined for dims {sorted(RIGIDITY_PARAMS)}, got {dim}")
    r, m, wmin = RIGIDITY_PARAMS[dim]
    P = parity_matrix(r)
    ncols = P.shape[0]
    profiles: set[tuple[int, ...]] = set()
    examples: dict[tuple[int, ...], tuple[int, ...]] = {}
    total = admissible = 0
    weight_sum_ok = True
    it = combinations_with_replacement(range(ncols), m)
    while True:
        block = np.array([c for _, c in zip(range(chunk), it)], dtype=np.int64)
        if block.size == 0:
            break
        total += len(block)
        # W[s, i] = weight of involution i for multiset s
        W = P[:, block].sum(axis=2).T
        weight_sum_ok &= bool((W.sum(axis=1) == (1 << (r - 1)) * m).all())
        ok = (W >= wmin).all(axis=1)
        admissible += int(ok.sum())
        for row, cols in zip(np.sort(W[ok], axis=1), block[ok]):
            key = tuple(int(x) for x in row)
            if key not in profiles:
                profiles.add(key)
                examples[key] = tuple(int(c) + 1 for c in cols)
    return RigidityResult(dim, r, m, wmin, total, admissible, frozenset(profiles),
                          weight_sum_ok, tuple(examples[p] for p in sorted(profiles)))


def rigidity_profiles(dim: int) -> set[tuple[int, ...]]:
    return set(rigidity(dim).profiles)


def format_profile(p) -> str:
    """(3,3,3,3,4,4,4) -> '{3^4, 4^3}'."""
    c = Counter(p)
    return "{" + ", ".join(f"{w}^{c[w]}" for w in sorted(c)) + "}"
