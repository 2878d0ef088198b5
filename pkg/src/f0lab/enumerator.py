"""Enumeration of F0 degree tuples and realizability filtering.

Necessary filters, applied in order:

1. integral Euler characteristic;
2. the Poincare series divides out to a polynomial;
3. that polynomial has nonnegative coefficients;
4. no coordinate-subspace obstruction: for every set J of even generators,
   at least |J| differentials can be nonzero once the generators outside J
   are set to zero. Otherwise the common zero locus contains a positive
   dimensional piece of that coordinate subspace and the quotient is
   infinite (this is the Krull dimension argument used to exclude
   (2,4,4,5,7,9), applied to every J).

A witness search (explicit models, then pure-power products, then seeded
random differentials) supplies the sufficient direction.
"""

from __future__ import annotations

import enum
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations
from typing import Callable, Iterable, Iterator, Sequence

from .errors import InputError
from .model import (DegreeTuple, PureModel, euler_characteristic, is_finite_dimensional,
                    poincare_series)
from .poly import GeneratorSet, Polynomial, monomials_of_degree

DEFAULT_ATTEMPTS = 100
DEFAULT_SEED = 0
COEFF_RANGE = 3


class Status(str, enum.Enum):
    CONFIRMED = "realizable-confirmed"
    PASSED = "necessary-filters-passed"
    REJECTED = "rejected"


@dataclass(frozen=True)
class TupleRecord:
    tuple: DegreeTuple
    chi: Fraction
    status: Status
    reason: str = ""
    witness: PureModel | None = None
    witness_source: str = ""

    @property
    def chi_int(self) -> int | None:
        return int(self.chi) if self.chi.denominator == 1 else None

    def to_json(self) -> dict:
        d = {"tuple": list(self.tuple.degrees()), "chi": self.chi_int if self.chi_int is not None
             else str(self.chi), "status": self.status.value}
        if self.reason:
            d["reason"] = self.reason
        if self.status != Status.REJECTED and (self.witness or self.witness_source):
            d["witness_source"] = self.witness_source
        if self.witness is not None:
            d["witness"] = {
                "even_degrees": list(self.witness.gens.degrees),
                "odd_degrees": list(self.witness.odd_degrees),
                "differentials": [str(p) for p in self.witness.differentials],
            }
        return d


def candidate_tuples(n: int) -> Iterator[DegreeTuple]:
    """All tuples with 1 <= a_i nondecreasing, b nondecreasing, b_i >= 2a_i, 2 sum(b-a) = n.

    Yielded by k, then lexicographically on (a, b).
    """
    if n < 2 or n % 2:
        raise InputError(f"formal dimension must be even and >= 2, got {n}")
    half = n // 2
    for k in range(1, half + 1):
        found: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

        def rec(a: list[int], b: list[int], rem: int):
            left = k - len(a)
            if left == 0:
                if rem == 0:
                    found.append((tuple(a), tuple(b)))
                return
            amin = a[-1] if a else 1
            # each remaining pair contributes b_i - a_i >= a_i >= amin
            ai = amin
            while ai * left <= rem:
                bmin = max(2 * ai, b[-1] if b else 2)
                bi = bmin
                while (bi - ai) + (left - 1) * ai <= rem:
                    rec(a + [ai], b + [bi], rem - (bi - ai))
                    bi += 1
                ai += 1

        rec([], [], half)
        for a, b in sorted(found):
            yield DegreeTuple(a, b)


def canonical_key(t: DegreeTuple):
    return (t.k, t.a, t.b)


@lru_cache(maxsize=None)
def _representable(target: int, parts: tuple[int, ...]) -> bool:
    """target = sum of at least two elements of ``parts`` (with repetition)."""
    # reach[v] = smallest count cap 2 achievable... track the set {1, 2+}
    reach: list[set[int]] = [set() for _ in range(target + 1)]
    reach[0].add(0)
    for v in range(1, target + 1):
        for p in parts:
            if p <= v:
                for c in reach[v - p]:
                    reach[v].add(min(c + 1, 2))
    return 2 in reach[target]


def subspace_obstruction(t: DegreeTuple) -> tuple[int, ...] | None:
    """A set J of even generator indices with too few surviving differentials."""
    k = t.k
    for q in range(1, k + 1):
        for J in combinations(range(k), q):
            parts = tuple(sorted({t.a[i] for i in J}))
            survivors = sum(1 for bj in t.b if _representable(bj, parts))
            if survivors < q:
                return J
    return None


def necessary_filters(t: DegreeTuple) -> tuple[bool, str]:
    chi = euler_characteristic(t)
    if chi.denominator != 1:
        return False, f"non-integral chi {chi}"
    series = poincare_series(t)
    if not series.is_polynomial:
        return False, "Poincare series is not a polynomial"
    if not series.is_nonnegative():
        return False, "Poincare series has a negative coefficient"
    bad = subspace_obstruction(t)
    if bad is not None:
        names = ",".join(f"x{i + 1}" for i in bad)
        return False, f"coordinate subspace obstruction on {{{names}}}"
    return True, ""


# ---------- witnesses ----------

def diagonal_models(t: DegreeTuple) -> Iterator[PureModel]:
    """Products of truncated polynomial rings realizing ``t``: dy_j = x_p(j)^(b_j / a_p(j))."""
    k = t.k
    gens = GeneratorSet.standard(t.even_degrees)
    seen = set()
    for perm in permutations(range(k)):
        if any(t.b[j] % t.a[perm[j]] or t.b[j] // t.a[perm[j]] < 2 for j in range(k)):
            continue
        key = tuple((perm[j], t.b[j]) for j in range(k))
        if frozenset(key) in seen:
            continue
        seen.add(frozenset(key))
        diffs = []
        for j in range(k):
            mono = [0] * k
            mono[perm[j]] = t.b[j] // t.a[perm[j]]
            diffs.append(Polynomial(gens, {tuple(mono): 1}, 2 * t.b[j]))
        yield PureModel(gens, t.odd_degrees, tuple(diffs))


def random_model(t: DegreeTuple, rng: random.Random) -> PureModel | None:
    """Decomposable homogeneous differentials with coefficients in [-3, 3]."""
    gens = GeneratorSet.standard(t.even_degrees)
    diffs = []
    for bj in t.b:
        monos = [m for m in monomials_of_degree(gens, 2 * bj) if sum(m) >= 2]
        if not monos:
            return None
        terms = {m: rng.randint(-COEFF_RANGE, COEFF_RANGE) for m in monos}
        diffs.append(Polynomial(gens, terms, 2 * bj))
    return PureModel(gens, t.odd_degrees, tuple(diffs))


def _tuple_rng(t: DegreeTuple, seed: int) -> random.Random:
    return random.Random(f"{seed}:{t}")


def witness_candidates(t: DegreeTuple, attempts: int = DEFAULT_ATTEMPTS,
                       seed: int = DEFAULT_SEED) -> Iterator[tuple[str, PureModel | None]]:
    from .catalog import explicit_models

    for i, m in enumerate(explicit_models().get(t, [])):
        yield f"explicit#{i}", m
    for i, m in enumerate(diagonal_models(t)):
        yield f"diagonal#{i}", m
    rng = _tuple_rng(t, seed)
    for i in range(attempts):
        yield f"random#{i}", random_model(t, rng)


def find_witness(t: DegreeTuple, attempts: int = DEFAULT_ATTEMPTS,
                 seed: int = DEFAULT_SEED) -> tuple[PureModel | None, str]:
    """First candidate with finite-dimensional cohomology and its source label."""
    for label, m in witness_candidates(t, attempts, seed):
        if m is None:
            # some differential has no decomposable monomial: dy = 0 forced
            return None, "no decomposable differential in some degree"
        if is_finite_dimensional(m):
            return m, label
    return None, f"none in {attempts} random attempts"


def construct_witness(t: DegreeTuple, attempts: int = DEFAULT_ATTEMPTS,
                      seed: int = DEFAULT_SEED) -> PureModel | None:
    return find_witness(t, attempts, seed)[0]


# ---------- enumeration ----------

def classify(t: DegreeTuple, mode: str = "necessary", attempts: int = DEFAULT_ATTEMPTS,
             seed: int = DEFAULT_SEED) -> TupleRecord:
    chi = euler_characteristic(t)
    ok, reason = necessary_filters(t)
    if not ok:
        return TupleRecord(t, chi, Status.REJECTED, reason)
    if mode == "necessary":
        return TupleRecord(t, chi, Status.PASSED)
    witness, source = find_witness(t, attempts, seed)
    if witness is None:
        return TupleRecord(t, chi, Status.PASSED, f"unconfirmed: {source}", None, "")
    return TupleRecord(t, chi, Status.CONFIRMED, "", witness, source)


def _classify_args(args):
    return classify(*args)


def parallel_map(fn: Callable, items: Sequence, threads: int = 1) -> list:
    """Order-preserving map, optionally over worker processes."""
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * threads))))


def enumerate_tuples(n: int, mode: str = "necessary", attempts: int = DEFAULT_ATTEMPTS,
                     seed: int = DEFAULT_SEED, include_rejected: bool = False,
                     threads: int = 1) -> list[TupleRecord]:
    """Records for all candidate tuples of formal dimension ``n`` surviving the filters.

    In ``construct`` mode survivors also get a witness search; a failed
    search leaves the status at PASSED with an "unconfirmed" note.
    """
    if mode not in ("necessary", "construct"):
        raise InputError(f"unknown mode {mode!r}")
    cands = list(candidate_tuples(n))
    # cheap filters first so that construct mode only searches survivors
    pre = [classify(t, "necessary") for t in cands]
    todo = [(r.tuple, mode, attempts, seed) for r in pre if r.status != Status.REJECTED]
    done = iter(parallel_map(_classify_args, todo, threads) if mode == "construct" else
                [r for r in pre if r.status != Status.REJECTED])
    out = []
    for r in pre:
        if r.status == Status.REJECTED:
            if include_rejected:
                out.append(r)
        else:
            out.append(next(done))
    return out


def series_only_survivors(n: int) -> list[DegreeTuple]:
    """Tuples passing chi and series filters but excluded by the subspace obstruction."""
    out = []
    for t in candidate_tuples(n):
        chi = euler_characteristic(t)
        if chi.denominator != 1:
            continue
        s = poincare_series(t)
        if s.is_nonnegative() and subspace_obstruction(t) is not None:
            out.append(t)
    return out


# ---------- golden comparison ----------

@dataclass
class DimensionReport:
    dimension: int
    expected: int
    found: int
    missing: list[DegreeTuple]
    extra: list[DegreeTuple]
    chi_mismatch: list[tuple[DegreeTuple, int, Fraction]]
    unconfirmed: list[DegreeTuple]
    obstruction_only: list[DegreeTuple]

    @property
    def ok(self) -> bool:
        return not (self.missing or self.extra or self.chi_mismatch or self.unconfirmed)


@dataclass
class TablesReport:
    mode: str
    seed: int
    attempts: int
    golden_dir: str
    dims: list[DimensionReport]

    @property
    def ok(self) -> bool:
        return all(d.ok for d in self.dims)

    def to_json(self) -> dict:
        return {
            "command": "verify-tables", "mode": self.mode, "seed": self.seed,
            "attempts": self.attempts, "ok": self.ok,
            "dimensions": [{
                "dimension": d.dimension, "ok": d.ok, "golden_rows": d.expected,
                "enumerated": d.found,
                "missing": [str(t) for t in d.missing],
                "extra": [str(t) for t in d.extra],
                "chi_mismatch": [{"tuple": str(t), "golden": g, "computed": str(c)}
                                 for t, g, c in d.chi_mismatch],
                "unconfirmed": [str(t) for t in d.unconfirmed],
                "excluded_only_by_subspace_obstruction": [str(t) for t in d.obstruction_only],
            } for d in self.dims],
        }


def verify_tables(directory=None, dims: Iterable[int] | None = None, mode: str = "necessary",
                  attempts: int = DEFAULT_ATTEMPTS, seed: int = DEFAULT_SEED,
                  threads: int = 1) -> TablesReport:
    """Set comparison of enumerated tuples and chi against the golden files.

    Golden files are all loaded before any enumeration, so a missing or
    corrupt file fails fast with GoldenFileError.
    """
    from .files import GOLDEN_DIMS, golden_dir, load_golden

    dims = list(GOLDEN_DIMS if dims is None else dims)
    gdir = golden_dir(directory)
    tables = {n: load_golden(n, gdir) for n in dims}
    reports = []
    for n in dims:
        gold = tables[n].as_dict()
        recs = enumerate_tuples(n, mode, attempts, seed, threads=threads)
        got = {r.tuple: r for r in recs}
        missing = [t for t, _ in tables[n].rows if t not in got]
        extra = [r.tuple for r in recs if r.tuple not in gold]
        chi_bad = [(t, gold[t], got[t].chi) for t, _ in tables[n].rows
                   if t in got and got[t].chi != gold[t]]
        unconf = [r.tuple for r in recs if mode == "construct" and r.status != Status.CONFIRMED]
        reports.append(DimensionReport(n, len(gold), len(recs), missing, extra, chi_bad, unconf,
                                       series_only_survivors(n)))
    return TablesReport(mode, seed, attempts, str(gdir), reports)
