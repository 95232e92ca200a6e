"""Corpus entries: validity, expected classifications, the H = U * p recipe."""

import pytest
from fractions import Fraction

from sftdga.algebra import Element, Flavor, normalize
from sftdga.corpus import (CorpusEntry, bracket_images, corpus_entry,
                           hbar_quotient, random_layered_spec,
                           spec_from_hamiltonian, standard_corpus,
                           toy_overtwisted, toy_tight)
from sftdga.differential import check_d_squared, full_check
from sftdga.errors import SignatureError
from sftdga.vanishing import classify, find_unit_primitive, restrict_spec


def test_corpus_lookup_round_trip():
    names = [e.name for e in standard_corpus()]
    assert len(names) == len(set(names))
    for name in names:
        assert corpus_entry(name).name == name
    with pytest.raises(KeyError):
        corpus_entry("does-not-exist")


def test_standard_entries_are_valid_differentials():
    for entry in standard_corpus():
        report = full_check(entry.master)
        bad = [i for i in report.items if i.passed is False]
        assert not bad, "%s: %s" % (entry.name, [i.line() for i in bad])


def test_standard_entries_classify_as_expected():
    for entry in standard_corpus():
        report = classify(entry.master, entry.bounds, entry.policy)
        got = {e.flavor: e.status for e in report.entries}
        assert got == entry.expected, entry.name


def test_seeded_family_d_squared_and_leibniz():
    # the recipe should give a valid differential for any seed and knob mix
    for seed in range(8):
        for with_unit in (True, False):
            entry = random_layered_spec(seed, with_unit=with_unit,
                                        t_block=seed % 2 == 0,
                                        hbar_block=seed % 3 != 0)
            report = check_d_squared(entry.master)
            assert report.ok, "%s: %s" % (
                entry.name, [i.line() for i in report.items if not i.passed])


def test_seeded_family_unit_detection():
    hit = random_layered_spec(11, with_unit=True)
    ch = restrict_spec(hit.master, Flavor.CH)
    assert find_unit_primitive(ch, hit.bounds) is not None
    miss = random_layered_spec(11, with_unit=False)
    ch = restrict_spec(miss.master, Flavor.CH)
    assert find_unit_primitive(ch, miss.bounds) is None


def test_toy_hamiltonian_squares_to_zero():
    # d = hbar^{-1} [H, -] squares to zero because H * H = 0 on the nose
    toy = toy_overtwisted()
    sig = toy.master.sig
    F = Flavor.SFT_STAR
    U = (Element.unit(sig, F)
         - Element.term(sig, F, q={"c": 1}, p={"b": 1})
         + Element.term(sig, F, q={"c": 1}, hbar=1)
         - Element.term(sig, F, q={"c": 1}, t={"u": 1}))
    H = U * normalize(sig, F, [("p", "a")])
    assert (H * H).is_zero


def test_hbar_quotient_requires_divisibility():
    sig = toy_overtwisted().master.sig
    ok = Element.term(sig, Flavor.SFT, q={"c": 1}, hbar=2)
    assert hbar_quotient(ok) == Element.term(sig, Flavor.SFT, q={"c": 1},
                                             hbar=1)
    bad = ok + Element.term(sig, Flavor.SFT, q={"c": 2})
    with pytest.raises(SignatureError):
        hbar_quotient(bad)


def test_bracket_images_rejects_bad_interaction():
    sig = toy_overtwisted().master.sig
    even = Element.term(sig, Flavor.SFT, q={"c": 1}, p={"b": 1})
    with pytest.raises(SignatureError):
        bracket_images(even)  # degree 0, needs odd
    mixed = even + Element.term(sig, Flavor.SFT, p={"a": 1})
    with pytest.raises(SignatureError):
        bracket_images(mixed)  # inhomogeneous
    no_weyl = Element.term(sig, Flavor.RSFT, p={"a": 1})
    with pytest.raises(SignatureError):
        bracket_images(no_weyl)  # bracket needs the hbar contraction


def test_tight_entry_has_zero_differential_but_candidates():
    tight = toy_tight()
    for key, image in tight.master.images.items():
        assert image.is_zero, key
    # the negative control is only convincing if the search space is nonempty
    ch = restrict_spec(tight.master, Flavor.CH)
    from sftdga.vanishing import search_unit_primitive
    report = search_unit_primitive(ch, tight.bounds)
    assert report.candidates > 0
    assert report.certificate is None
