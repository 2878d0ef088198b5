from __future__ import annotations


import pytest
from hypothesis import given, settings, strategies as st

from f0lab import catalog
from f0lab import halperin as H
from f0lab.errors import InputError
from f0lab.model import Presentation, PureModel, product_model
from f0lab.poly import GeneratorSet, Polynomial, monomials_of_degree

from oracles import brute_force_check, monomial_presentations, oracle_dimension


# ---------- solver against independent oracles ----------

def random_poly(gens, e, coeffs):
    monos = monomials_of_degree(gens, e)
    terms = {m: c for m, c in zip(monos, coeffs) if c}
    return Polynomial(gens, terms, e)


@st.composite
def small_presentations(draw):
    degs = tuple(sorted(draw(st.lists(st.sampled_from([2, 4, 6, 8]), min_size=2, max_size=2))))
    gens = GeneratorSet(("x1", "x2"), degs)
    rels = []
    for _ in range(draw(st.integers(1, 3))):
        e = draw(st.sampled_from([x for x in range(4, 17, 2) if monomials_of_degree(gens, x)]))
        n = len(monomials_of_degree(gens, e))
        p = random_poly(gens, e, draw(st.lists(st.sampled_from([0, 0, 0, 1, -1, 2]), min_size=n, max_size=n)))
        if p.terms:
            rels.append(p)
    if not rels:
        rels = [Polynomial.monomial(gens, (1, 1))]
    return gens, rels


@settings(max_examples=150, deadline=None)
@given(small_presentations(), st.sampled_from([-2, -4, -6]))
def test_solver_matches_rank_oracle(data, d):
    gens, rels = data
    pres = Presentation(gens, rels)
    basis = H.derivation_space(pres, d)
    assert len(basis) == oracle_dimension(gens, rels, d)
    try:
        pres.formal_dimension
    except InputError:
        return
    for delta in basis:
        assert not delta.is_zero()
        assert H.random_leibniz_check(delta, trials=20)


def test_oracle_on_known_cases():
    w = catalog.wedge_presentation()
    assert oracle_dimension(w.gens, w.relations, -4) == 1
    gens = GeneratorSet(("x", "y"), (2, 4))
    rels = [Polynomial.monomial(gens, (2, 0)), Polynomial.monomial(gens, (0, 2))]
    assert oracle_dimension(gens, rels, -2) == 0


# ---------- examples ----------

def test_wedge_has_degree_minus_four_derivation():
    w = catalog.wedge_presentation()
    basis = H.derivation_space(w, -4)
    assert len(basis) == 1
    assert basis[0].describe() == ["delta(y) = x"]
    assert H.random_leibniz_check(basis[0], trials=100)
    # pinning x leaves delta(y) = x alive
    assert len(H.restricted_derivation_space(w, -4, fixed_zero=[0])) == 1
    assert H.restricted_derivation_space(w, -4, fixed_zero=[0, 1]) == []


def test_known_derivation_free():
    s2s4 = product_model(catalog.sphere(2), catalog.sphere(4))
    assert H.derivation_space(s2s4.presentation(), -2) == []
    for n in range(1, 6):
        assert H.halperin_check(catalog.complex_projective(n)).verdict == "DerivationFree"


@pytest.mark.parametrize("d", [0, 2, -3, 5])
def test_bad_degree(d):
    with pytest.raises(InputError):
        H.derivation_space(catalog.wedge_presentation(), d)


def test_admissible_degrees():
    gens = GeneratorSet(("x", "y"), (2, 8))
    assert H.admissible_degrees(gens) == [-2, -4, -6]
    assert H.admissible_degrees(GeneratorSet(("x",), (2,))) == []


def test_not_finite_rejected():
    m = PureModel.build([2, 4], [3, 7], ["x1^2", "x1^2*x2"])
    with pytest.raises(InputError):
        H.halperin_check(m)


@pytest.mark.parametrize("model", [
    catalog.model_4_6_9_11(), catalog.model_4_4_6_7_9_11(), catalog.model_2_6_7_11(),
    catalog.s6xs6_family(1), catalog.model_4_6_11_13(),
], ids=["4_6_9_11", "4_4_6_7_9_11", "2_6_7_11", "s6xs6", "4_6_11_13"])
def test_special_models_certified(model):
    cert = H.halperin_check(model)
    assert cert.certified and cert.verdict == "DerivationFree"
    assert all(n == 0 for _, n in cert.dimensions)


def test_generic_repair_also_certified():
    m, _ = catalog.repaired_model([4, 4, 6], [7, 9, 11], catalog.LITERAL_4_4_6_7_9_11, 2)
    assert str(m.differentials[2]) == "x2^3 + x3^2"


# ---------- structural suites over every golden tuple ----------

def test_degree_zero_slots_vanish(reps):
    """Allowing constants as images never adds derivations."""
    for t, m in reps:
        pres = m.presentation()
        for d in H.admissible_degrees(pres.gens):
            full = H.derivation_space(pres, d, include_degree_zero=True)
            zero_slots = [i for i, deg in enumerate(pres.gens.degrees) if deg + d == 0]
            for delta in full:
                assert all(not any(delta.images[i]) for i in zero_slots), t
            assert len(full) == len(H.derivation_space(pres, d)), t


def test_pinning_all_but_one_generator(reps):
    for t, m in reps:
        if m.k > 3:
            continue
        pres = m.presentation()
        for keep in range(m.k):
            pinned = [i for i in range(m.k) if i != keep]
            for d in H.admissible_degrees(pres.gens):
                assert H.restricted_derivation_space(pres, d, pinned) == [], (t, keep, d)


def test_every_golden_representative_certified(reps):
    for t, m in reps:
        assert H.halperin_check(m).certified, t
        if t.chi() <= 16:
            assert t.k <= 4, t


# ---------- splitting ----------

def test_split_examples():
    m = PureModel.build([2, 10], [3, 19], ["x1^2", "x2^2"])
    s = H.split_model(m)
    assert s.l == 1 and s.base.describe() == ["dy1 = x1^2"] and s.fiber.describe() == ["dy2 = x2^2"]
    assert H.splits_as_fibration(catalog.model_4_6_9_11()) is None
    prod = product_model(catalog.model_4_6_9_11(), catalog.complex_projective(2))
    assert H.splits_as_fibration(prod) == 1


def test_split_with_reordered_odd_generators():
    # dy1 involves both generators, dy2 only the first: base is (x1, y2)
    m = PureModel.build([2, 4], [7, 3], ["x2^2 + x1^2*x2 + x1^4", "x1^2"])
    s = H.split_model(m)
    assert s.l == 1 and s.base_odd == (1,)
    assert s.fiber.describe() == ["dy1 = x2^2"]


def test_split_fiber_sets_base_to_zero():
    m = PureModel.build([2, 4], [3, 7], ["x1^2", "x2^2 + x1^2*x2"])
    s = H.split_model(m)
    assert s.fiber.describe() == ["dy2 = x2^2"]


def test_split_recursion(monkeypatch):
    """Force the top level to report a derivation so the fibration branch runs."""
    real = H.presentation_check
    top = product_model(catalog.model_4_6_9_11(), catalog.complex_projective(2))
    w = catalog.wedge_presentation()
    fake = H.derivation_space(w, -4)[0]

    def patched(pres):
        dims, wit = real(pres)
        if pres.gens.degrees == top.presentation().gens.degrees:
            return dims, fake
        return dims, wit

    monkeypatch.setattr(H, "presentation_check", patched)
    cert = H.halperin_check(top)
    assert cert.verdict == "SplitsAsFibration" and cert.l == 1 and cert.certified
    assert cert.base.verdict == "DerivationFree" and cert.fiber.verdict == "DerivationFree"
    text = cert.to_text()
    assert "split index: 1" in text and "base:" in text and "fiber:" in text
    js = cert.to_json()
    assert js["split_index"] == 1 and js["base"]["certified"]


def test_inconclusive_when_no_split(monkeypatch):
    fake = H.derivation_space(catalog.wedge_presentation(), -4)[0]
    monkeypatch.setattr(H, "presentation_check", lambda pres: (((-2, 1),), fake))
    cert = H.halperin_check(catalog.model_4_6_9_11())
    assert cert.verdict == "Inconclusive" and not cert.certified
    assert "delta(y) = x" in cert.to_text()


# ---------- certificates ----------

def test_certificate_output():
    cert = H.halperin_check(catalog.model_4_6_9_11())
    text = cert.to_text()
    assert text.startswith("verdict: DerivationFree\n")
    assert "derivation dimensions: {-2:0, -4:0}" in text
    js = cert.to_json()
    assert js["certified"] and js["derivation_dimensions"] == {"-2": 0, "-4": 0}
    assert js["tuple"] == "(4,6,9,11)"


def test_wedge_certificate():
    from f0lab.files import load_model, shipped_model
    m = load_model(shipped_model("wedge"))
    cert = H.halperin_check_presentation(m.presentation(), m)
    assert cert.verdict == "Inconclusive" and cert.witness.degree == -4
    assert cert.witness.describe() == ["delta(y) = x"]


def test_monomial_ideals_match_oracle():
    nonzero = 0
    for gens, rels in monomial_presentations():
        pres = Presentation(gens, rels)
        for d in H.admissible_degrees(gens) or [-2]:
            n = len(H.derivation_space(pres, d))
            assert n == oracle_dimension(gens, rels, d), (gens.degrees, rels, d)
            nonzero += n > 0
    assert nonzero > 50


# ---------- brute-force coefficient enumeration ----------

def test_brute_force_monomial_ideals():
    checked = nonzero = 0
    for gens, rels in monomial_presentations():
        for d in H.admissible_degrees(gens) or [-2]:
            res = brute_force_check(gens, rels, d)
            if res is None:
                continue
            brute, both, solver = res
            assert brute == both == solver, (gens.degrees, rels, d)
            checked += 1
            nonzero += solver > 0
    assert checked > 100 and nonzero > 20


@settings(max_examples=60, deadline=None)
@given(small_presentations(), st.sampled_from([-2, -4, -6]))
def test_brute_force_random_presentations(data, d):
    gens, rels = data
    res = brute_force_check(gens, rels, d)
    if res is None:
        return
    brute, both, solver = res
    # every small integer solution lies in the solver's span, and they span it
    assert both == solver
    assert brute == solver


SPECIAL_TUPLES = [(2, 2, 4, 4, 3, 5, 7, 7), (2, 2, 4, 4, 3, 7, 7, 7), (2, 2, 4, 4, 5, 5, 7, 7),
              (2, 2, 4, 6, 3, 5, 7, 11), (2, 2, 2, 4, 4, 3, 3, 5, 7, 7)]


@pytest.mark.parametrize("degs", SPECIAL_TUPLES)
def test_special_tuples_certified(degs):
    from f0lab import enumerator as E
    from f0lab.model import DegreeTuple
    t = DegreeTuple.from_degrees(degs)
    m, _ = E.find_witness(t)
    cert = H.halperin_check(m)
    assert cert.certified
