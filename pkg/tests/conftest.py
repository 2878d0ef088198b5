from __future__ import annotations

from functools import lru_cache

import pytest

from f0lab import enumerator as E
from f0lab.files import GOLDEN_DIMS, load_golden


@lru_cache(maxsize=None)
def golden_rows():
    return tuple((n, t, chi) for n in GOLDEN_DIMS for t, chi in load_golden(n).rows)


@lru_cache(maxsize=None)
def representatives():
    """(tuple, witness model) for every golden tuple, default seed."""
    out = []
    for _, t, _ in golden_rows():
        m, _src = E.find_witness(t)
        assert m is not None, f"no witness for {t}"
        out.append((t, m))
    return tuple(out)


@pytest.fixture(scope="session")
def golden():
    return golden_rows()


@pytest.fixture(scope="session")
def reps():
    return representatives()
