"""Dimension bookkeeping for the curve counts behind the differentials."""

import itertools
from fractions import Fraction

import pytest

from sftdga import (
    AlgebraSignature,
    Element,
    Flavor,
    OrbitRecord,
    SignatureError,
    TFormRecord,
    generator_degree,
)
from sftdga.corpus import toy_overtwisted
from sftdga.indexcalc import (
    PunctureProfile,
    combinatorial_factor,
    degree_drop_check,
    enumerate_admissible_profiles,
    moduli_dimension,
    profile_action_defect,
    profile_dimension,
    term_cycle_degree,
    term_profile,
)


@pytest.fixture
def sig_kappa():
    return AlgebraSignature(
        n=4,
        orbits=(OrbitRecord("a", 1, 1), OrbitRecord("b", 2, 3),
                OrbitRecord("x", 2, 1, Fraction(2)),
                OrbitRecord("y", 1, 1, Fraction(1))),
        tforms=(TFormRecord("u", 1),))


def test_combinatorial_factor_worked_example(sig_kappa):
    # the standing example: two distinct orbits, multiplicities (2, 1),
    # kappas (1, 3): 2! * (2! * 1!) * (1^2 * 3^1) = 12
    assert combinatorial_factor({"a": 2, "b": 1}, sig_kappa) == 12
    assert combinatorial_factor((("a", 2), ("b", 1)), sig_kappa) == 12
    # one orbit covered twice, kappa 1: 1! * 2! = 2 (not 4)
    assert combinatorial_factor({"a": 2}, sig_kappa) == 2
    assert combinatorial_factor({}, sig_kappa) == 1
    assert combinatorial_factor({"b": 2}, sig_kappa) == 2 * 9
    with pytest.raises(SignatureError):
        combinatorial_factor({"a": -1}, sig_kappa)


def test_moduli_dimension_frozen_cases(sig_kappa):
    # hand-evaluated instances of
    # dim = (n-3)(2 - 2g - (P-+P++1)) - 1 + 2m +/- CZ + 2<c1,A> + sum (i+-i-)CZ
    assert moduli_dimension(sig_kappa, "x", "+", i_minus={"y": 1}) == 0
    assert moduli_dimension(sig_kappa, "x", "+", genus=1, i_minus={"y": 1}) == -2
    assert moduli_dimension(sig_kappa, "x", "+", marked=1, i_minus={"y": 1}) == 2
    assert moduli_dimension(sig_kappa, "x", "-", i_plus={"y": 1}) == -2


def test_dimension_equals_degree_drop_minus_one(sig_mixed):
    # the grading conventions make
    #   profile_dimension - (cycle degrees) = degree drop - 1
    # an identity; sweep generators against a grid of image monomials
    orbits = [o.id for o in sig_mixed.orbits]
    letters = [("q", v) for v in orbits] + [("p", v) for v in orbits]
    checked = 0
    for kind in ("q", "p"):
        for gen in orbits:
            gdeg = generator_degree((kind, gen), sig_mixed)
            for r in range(3):
                for word in itertools.combinations_with_replacement(letters, r):
                    for t in ({}, {"u": 1}, {"v": 1}):
                        for g in (0, 1):
                            for a in (-1, 0, 1):
                                exps = {"q": {}, "p": {}}
                                for k, v in word:
                                    exps[k][v] = exps[k].get(v, 0) + 1
                                elem = Element.term(
                                    sig_mixed, Flavor.SFT_STAR, q=exps["q"],
                                    p=exps["p"], t=t, hbar=g, group=(a,))
                                if elem.is_zero:
                                    continue
                                (mono, _), = elem.items()
                                prof = term_profile(sig_mixed, kind, gen, mono)
                                lhs = (profile_dimension(sig_mixed, prof)
                                       - term_cycle_degree(sig_mixed, mono))
                                drop = gdeg - elem.degree()
                                assert lhs == drop - 1
                                assert (lhs == 0) == (drop == 1)
                                checked += 1
    assert checked > 3000


def test_term_profile_reads_off_monomial(sig_mixed):
    elem = Element.term(sig_mixed, Flavor.SFT_STAR, q={"a": 2}, p={"c": 1},
                        t={"u": 1}, hbar=1, group=(2,))
    (mono, _), = elem.items()
    prof = term_profile(sig_mixed, "q", "d", mono)
    assert prof.orbit == "d" and prof.role == "+"
    assert dict(prof.i_minus) == {"a": 2}
    assert dict(prof.i_plus) == {"c": 1}
    assert prof.genus == 1 and prof.marked == 1 and prof.group == (2,)
    assert prof.factors(sig_mixed) == (2, 3)  # C({a:2}) = 2, C({c:1}) = 3


def test_degree_drop_check_clean_on_toy(toy):
    assert degree_drop_check(toy.master.sig, toy.master.images) == []


def test_degree_drop_check_flags_bad_term(toy):
    sig = toy.master.sig
    images = dict(toy.master.images)
    bad = Element.term(sig, toy.master.flavor, q={"a": 1})
    images[("q", "a")] = images[("q", "a")] + bad  # drop 0, not 1
    violations = degree_drop_check(sig, images)
    assert violations
    # a term of degree |q_a| has drop 0, i.e. offset 0 from the generator
    assert any(gen == "q_a" and offset == 0 for gen, _, offset in violations)


def test_enumerate_profiles_deterministic_and_on_dimension(toy):
    sig = toy.master.sig
    kw = dict(dimension=0, max_genus=1, max_punctures=3, groups=None)
    first = enumerate_admissible_profiles(sig, "a", "+", **kw)
    second = enumerate_admissible_profiles(sig, "a", "+", **kw)
    assert first == second
    assert first
    for prof in first:
        assert profile_dimension(sig, prof) == 0
        defect = profile_action_defect(sig, prof)
        assert defect is not None and defect >= 0


def test_enumerate_action_filter_prunes(toy):
    sig = toy.master.sig
    loose = enumerate_admissible_profiles(sig, "c", "+", dimension=0,
                                          max_genus=1, max_punctures=4,
                                          action_filter=False)
    tight = enumerate_admissible_profiles(sig, "c", "+", dimension=0,
                                          max_genus=1, max_punctures=4)
    assert set(tight) <= set(loose)
    assert len(tight) < len(loose)
    violating = [p for p in loose if p not in tight]
    for prof in violating:
        assert profile_action_defect(sig, prof) < 0


def test_action_defect_none_without_periods():
    sig = AlgebraSignature(n=3, orbits=(OrbitRecord("z", 2),))
    prof = PunctureProfile(orbit="z", role="+")
    assert profile_action_defect(sig, prof) is None
