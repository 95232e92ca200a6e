"""Differentials: Leibniz extension, d^2, structural checks, flavor maps."""

import random
from fractions import Fraction

import pytest

from sftdga import (
    AlgebraSignature,
    DifferentialSpec,
    Element,
    Flavor,
    MissingImageError,
    OrbitRecord,
)
from sftdga.corpus import hbar_quotient, spec_from_hamiltonian
from sftdga.differential import (
    apply_d,
    check_d_squared,
    embed,
    full_check,
    project,
    restrict_spec,
    validate_structure,
    verify_chain_map,
)

# ---------------------------------------------------------------- toy data


def toy_hamiltonian(sig):
    """U * p_a with U = 1 - q_c p_b + hbar q_c - t_u q_c, odd p_a."""
    fl = Flavor.SFT_STAR
    U = (Element.unit(sig, fl)
         - Element.term(sig, fl, q={"c": 1}, p={"b": 1})
         + Element.term(sig, fl, q={"c": 1}, hbar=1)
         - Element.term(sig, fl, q={"c": 1}, t={"u": 1}))
    return U * Element.term(sig, fl, p={"a": 1})


def test_toy_master_is_the_bracket_of_its_hamiltonian(toy):
    sig = toy.master.sig
    rebuilt = spec_from_hamiltonian(toy_hamiltonian(sig), toy.master.policy)
    assert rebuilt.images == toy.master.images
    assert rebuilt.flavor == toy.master.flavor


def test_toy_images_frozen(toy):
    sig = toy.master.sig
    fl = toy.master.flavor
    term = lambda **kw: Element.term(sig, fl, **kw)
    expected = {
        ("q", "a"): (Element.unit(sig, fl) + term(q={"c": 1}, hbar=1)
                     - term(q={"c": 1}, t={"u": 1}) - term(q={"c": 1}, p={"b": 1})),
        ("q", "b"): term(coeff=2, q={"c": 1}, p={"a": 1}),
        ("q", "c"): Element.zero(sig, fl),
        ("p", "a"): Element.zero(sig, fl),
        ("p", "b"): Element.zero(sig, fl),
        ("p", "c"): (term(p={"a": 1}, hbar=1) - term(p={"a": 1}, t={"u": 1})
                     - term(p={"a": 1, "b": 1})),
    }
    assert set(toy.master.images) == set(expected)
    for key, want in expected.items():
        assert toy.master.images[key] == want, key


def _random_monomial(rng, sig, flavor, max_letters=4):
    orbits = [o.id for o in sig.orbits]
    q = {}
    p = {}
    for _ in range(rng.randint(0, max_letters)):
        use_p = flavor.allows_p and rng.random() >= 0.6
        (p if use_p else q)[rng.choice(orbits)] = rng.randint(1, 2)
    t = {f.id: rng.randint(0, 1) for f in sig.tforms} if flavor.starred else None
    return Element.term(sig, flavor, q=q, p=p, t=t,
                        hbar=rng.randint(0, 1) if flavor.allows_hbar else 0)


def test_apply_d_matches_bracket_oracle(toy):
    # the letterwise Leibniz extension must agree with hbar^{-1} [H, -]
    # computed straight from the Weyl product
    sig = toy.master.sig
    H = toy_hamiltonian(sig)
    dspec = toy.master.with_policy(None)
    rng = random.Random(31)
    checked = 0
    for _ in range(120):
        x = _random_monomial(rng, sig, Flavor.SFT_STAR)
        if x.is_zero:
            continue
        sign = -1 if x.degree() % 2 else 1
        comm = H * x - (x * H).scale(sign)
        assert apply_d(dspec, x) == hbar_quotient(comm)
        checked += 1
    assert checked > 60


def test_leibniz_identity_weyl(toy):
    dspec = toy.master.with_policy(None)
    sig = dspec.sig
    rng = random.Random(32)
    for _ in range(100):
        x = _random_monomial(rng, sig, Flavor.SFT_STAR, 3)
        y = _random_monomial(rng, sig, Flavor.SFT_STAR, 3)
        if x.is_zero or y.is_zero:
            continue
        sign = -1 if x.degree() % 2 else 1
        assert apply_d(dspec, x * y) == \
            apply_d(dspec, x) * y + (x * apply_d(dspec, y)).scale(sign)


def test_leibniz_identity_super(toy):
    dspec = restrict_spec(toy.master.with_policy(None), Flavor.RSFT_STAR)
    sig = dspec.sig
    rng = random.Random(33)
    for _ in range(100):
        x = _random_monomial(rng, sig, Flavor.RSFT_STAR, 3)
        y = _random_monomial(rng, sig, Flavor.RSFT_STAR, 3)
        if x.is_zero or y.is_zero:
            continue
        sign = -1 if x.degree() % 2 else 1
        assert apply_d(dspec, x * y) == \
            apply_d(dspec, x) * y + (x * apply_d(dspec, y)).scale(sign)


def test_d_squared_vanishes_beyond_generators(toy):
    dspec = toy.master.with_policy(None)
    rng = random.Random(34)
    for _ in range(60):
        x = _random_monomial(rng, dspec.sig, Flavor.SFT_STAR)
        assert apply_d(dspec, apply_d(dspec, x)).is_zero


def test_full_check_passes_on_toy(toy):
    report = full_check(toy.master)
    assert report.ok, report.summary()
    names = [item.name for item in report.items]
    for expected in ("degree-drop", "positive-end", "action-monotone",
                     "weyl-leibniz", "d-squared"):
        assert expected in names


def test_weyl_leibniz_violation_detected():
    # q_a |-> q_a cannot extend to a derivation of the Weyl relations: the
    # contraction term in d(p_a q_a) has nowhere to go
    sig = AlgebraSignature(n=3, orbits=(OrbitRecord("a", 1),))
    fl = Flavor.SFT
    images = {("q", "a"): Element.term(sig, fl, q={"a": 1}),
              ("p", "a"): Element.zero(sig, fl)}
    report = validate_structure(DifferentialSpec(sig, fl, images))
    item = report.item("weyl-leibniz")
    assert item.passed is False


def test_d_squared_failure_reports_residual():
    sig = AlgebraSignature(n=3, orbits=(OrbitRecord("a", 1), OrbitRecord("b", 2)))
    fl = Flavor.CH
    images = {("q", "a"): Element.unit(sig, fl),
              ("q", "b"): Element.term(sig, fl, q={"a": 1})}
    report = check_d_squared(DifferentialSpec(sig, fl, images))
    assert not report.ok
    assert "d^2" in report.item("d-squared").detail


def test_images_must_cover_all_generators():
    sig = AlgebraSignature(n=3, orbits=(OrbitRecord("a", 1),))
    with pytest.raises(MissingImageError):
        DifferentialSpec(sig, Flavor.SFT, {("q", "a"): Element.zero(sig, Flavor.SFT)})
    # p images are not part of a CH differential
    DifferentialSpec(sig, Flavor.CH, {("q", "a"): Element.zero(sig, Flavor.CH)})


def test_restriction_is_a_chain_map(toy):
    master = toy.master.with_policy(None)
    rng = random.Random(35)
    for fl in (Flavor.CH, Flavor.CH_STAR, Flavor.RSFT, Flavor.RSFT_STAR, Flavor.SFT):
        sub = restrict_spec(master, fl)
        report = verify_chain_map(master, sub)
        assert report.ok, (fl, report.summary())
        for _ in range(40):
            x = _random_monomial(rng, master.sig, Flavor.SFT_STAR)
            lhs = project(apply_d(master, x), fl)
            rhs = apply_d(sub, project(x, fl))
            assert lhs == rhs, fl


def test_projection_is_multiplicative(toy):
    # killing a variable class commutes with the product: contractions always
    # leave an hbar behind, and hbar dies whenever p does
    sig = toy.master.sig
    rng = random.Random(36)
    for fl in (Flavor.CH, Flavor.RSFT, Flavor.RSFT_STAR, Flavor.SFT):
        for _ in range(50):
            a = _random_monomial(rng, sig, Flavor.SFT_STAR, 3)
            b = _random_monomial(rng, sig, Flavor.SFT_STAR, 3)
            assert project(a * b, fl) == project(a, fl) * project(b, fl)


def test_embed_then_project_is_identity(toy):
    sig = toy.master.sig
    rng = random.Random(37)
    for _ in range(30):
        x = _random_monomial(rng, sig, Flavor.CH, 3)
        up = embed(x, Flavor.SFT_STAR)
        assert project(up, Flavor.CH) == x
