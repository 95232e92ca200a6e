"""Built-in example families with known classification outcomes.

Each entry packages contact data, a full-flavor differential, search bounds,
truncation bounds, and the expected verdict per flavor.  The differentials
are built as d = hbar^{-1} [H, -] from an odd square-zero interaction element
H, which makes d a derivation of the Weyl product and d^2 = 0 automatic; the
restriction maps then hand the same data to the smaller flavors.

The recipe used throughout: H = U * p_w for one interaction orbit w with
|p_w| odd and an even element U that avoids the w variables.  Then
H^2 = U^2 p_w^2 = 0, and d(q_w) = kappa_w U, so U's unit term decides whether
the unit is exact (U without a unit term leaves every image term carrying at
least one letter, and no product can conjure the unit back).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Element, Flavor, Monomial, TruncationPolicy, normalize
from .differential import DifferentialSpec
from .errors import SignatureError
from .signature import AlgebraSignature, OrbitRecord, TFormRecord
from .vanishing import SearchBounds


def hbar_quotient(elem: Element) -> Element:
    """Divide by hbar; every term must carry hbar >= 1."""
    out = {}
    for m, c in elem.terms.items():
        if m.hbar < 1:
            raise SignatureError(
                "element is not divisible by hbar (term %s)" % m)
        out[Monomial(m.q, m.p, m.t, m.hbar - 1, m.group)] = c
    return Element(elem.sig, elem.flavor, out, elem.policy)


def bracket_images(H: Element) -> dict:
    """Generator images of hbar^{-1} [H, -] for a homogeneous odd H."""
    sig, flavor = H.sig, H.flavor
    if not flavor.weyl:
        raise SignatureError("bracket construction needs a Weyl flavor")
    deg = H.degree()
    if deg is None:
        raise SignatureError("interaction element must be homogeneous")
    if deg % 2 == 0:
        raise SignatureError("interaction element must be odd")
    images = {}
    keys = [("q", o.id) for o in sig.orbits] + [("p", o.id) for o in sig.orbits]
    for key in keys:
        x = normalize(sig, flavor, [key])
        s = -1 if x.degree() % 2 else 1
        comm = H * x - s * (x * H)
        images[key] = hbar_quotient(comm)
    return images


def spec_from_hamiltonian(H: Element,
                          policy: TruncationPolicy | None = None) -> DifferentialSpec:
    return DifferentialSpec(H.sig, H.flavor, bracket_images(H), policy)


@dataclass
class CorpusEntry:
    name: str
    description: str
    master: DifferentialSpec  # full-flavor spec; smaller flavors restrict from it
    bounds: SearchBounds
    policy: TruncationPolicy
    expected: dict  # Flavor -> expected classify status string


def toy_overtwisted() -> CorpusEntry:
    """Three orbits and one cycle variable; the unit is exact in every flavor.

    Degrees (n = 2): |q_a| = 1, |q_b| = 0, |q_c| = 2, |t_u| = -2, |hbar| = -2.
    H = (1 - q_c p_b + hbar q_c - t_u q_c) p_a gives d(q_a) = 1 - q_c p_b
    + hbar q_c - t_u q_c, so q_a is an exact primitive in CH and the series
    lifts produce one in every larger flavor.
    """
    sig = AlgebraSignature(
        n=2,
        orbits=(
            OrbitRecord("a", cz=2, kappa=1, period=Fraction(1)),
            OrbitRecord("b", cz=1, kappa=2, period=Fraction(1)),
            OrbitRecord("c", cz=3, kappa=1, period=Fraction(1, 2)),
        ),
        tforms=(TFormRecord("u", form_degree=0),),
    )
    F = Flavor.SFT_STAR
    one = Element.unit(sig, F)
    q_c = normalize(sig, F, [("q", "c")])
    p_a = normalize(sig, F, [("p", "a")])
    p_b = normalize(sig, F, [("p", "b")])
    t_u = normalize(sig, F, [("t", "u")])
    hbar = normalize(sig, F, ["hbar"])
    U = one - q_c * p_b + hbar * q_c - t_u * q_c
    H = U * p_a
    policy = TruncationPolicy(max_p_weight=3, max_hbar_weight=3,
                              max_t_weight=3, max_word_length=16)
    return CorpusEntry(
        name="toy-overtwisted",
        description="unit exact everywhere; primitive q_a in CH, series lifts above",
        master=spec_from_hamiltonian(H, policy),
        bounds=SearchBounds(max_word_length=3, max_hbar=2),
        policy=policy,
        expected={f: "unit-exact" for f in Flavor},
    )


def toy_tight() -> CorpusEntry:
    """Zero differential: the homology is the whole algebra, so the unit is
    never exact.  Orbit w sits in odd degree to keep the candidate basis
    nonempty, making this a real negative control rather than a parity
    accident.
    """
    sig = AlgebraSignature(
        n=2,
        orbits=(
            OrbitRecord("w", cz=2, kappa=1, period=Fraction(1, 3)),
            OrbitRecord("x", cz=3, kappa=1, period=Fraction(1)),
            OrbitRecord("y", cz=5, kappa=1, period=Fraction(2)),
            OrbitRecord("z", cz=7, kappa=2, period=Fraction(3)),
        ),
        tforms=(TFormRecord("v", form_degree=2),),
    )
    F = Flavor.SFT_STAR
    zero = Element.zero(sig, F)
    images = {}
    for o in sig.orbits:
        images[("q", o.id)] = zero
        images[("p", o.id)] = zero
    policy = TruncationPolicy(max_p_weight=2, max_hbar_weight=2,
                              max_t_weight=2, max_word_length=10)
    return CorpusEntry(
        name="toy-tight",
        description="zero differential; candidates exist but none hits the unit",
        master=DifferentialSpec(sig, F, images, policy),
        bounds=SearchBounds(max_word_length=4, max_hbar=2),
        policy=policy,
        expected={f: "no-primitive-within-bounds" for f in Flavor},
    )


def random_layered_spec(seed: int, pairs: int = 2, with_unit: bool = True,
                        t_block: bool = True, hbar_block: bool = True) -> CorpusEntry:
    """Seeded random family following the H = U * p_w recipe (n = 2).

    Builds ``pairs`` disjoint orbit pairs (c_i, b_i) with CZ(b_i) =
    CZ(c_i) - 2, so each q_{c_i} p_{b_i} block sits in degree 0, optionally a
    CZ = 3 orbit paired with hbar and a cycle variable paired with a matching
    orbit, then draws U as a random rational combination of the blocks (plus
    the unit iff ``with_unit``).  Expected verdict: unit exact everywhere when
    the unit term is present, bounded negative otherwise.
    """
    rng = random.Random(seed)
    orbits = [OrbitRecord("w", cz=2, kappa=rng.randint(1, 2))]
    blocks = []  # (word tokens, base coefficient)
    for i in range(pairs):
        cz_c = rng.choice([3, 4, 5, 6])
        orbits.append(OrbitRecord("c%d" % i, cz=cz_c, kappa=rng.randint(1, 3)))
        orbits.append(OrbitRecord("b%d" % i, cz=cz_c - 2, kappa=rng.randint(1, 3)))
        blocks.append(([("q", "c%d" % i), ("p", "b%d" % i)], 1))
    if hbar_block:
        orbits.append(OrbitRecord("h", cz=3, kappa=rng.randint(1, 2)))
        blocks.append((["hbar", ("q", "h")], 1))
    tforms = ()
    if t_block:
        dtheta = rng.choice([0, 1, 2, 3])
        orbits.append(OrbitRecord("m", cz=3 - dtheta, kappa=1))
        tforms = (TFormRecord("s", form_degree=dtheta),)
        blocks.append(([("t", "s"), ("q", "m")], 1))
    # periods: random positive rationals, with the interaction orbit heavy
    # enough that no image term gains action
    periods = {}
    for o in orbits[1:]:
        periods[o.id] = Fraction(rng.randint(1, 6), rng.choice([1, 2, 3]))
    periods["w"] = sum(periods.values(), Fraction(1))
    orbits = [OrbitRecord(o.id, o.cz, o.kappa, periods[o.id]) for o in orbits]
    sig = AlgebraSignature(n=2, orbits=tuple(orbits), tforms=tforms)

    F = Flavor.SFT_STAR
    U = Element.unit(sig, F) if with_unit else Element.zero(sig, F)
    used = 0
    for word, _ in blocks:
        if rng.random() < 0.2 and used:
            continue  # drop a block now and then, but keep at least one
        coeff = rng.choice([1, -1, 2, -2, Fraction(1, 2), Fraction(-3, 2)])
        U = U + normalize(sig, F, word, coeff=coeff)
        used += 1
    if pairs >= 2 and rng.random() < 0.5:
        # one quadratic block: still degree 0 and even
        extra = normalize(sig, F,
                          [("q", "c0"), ("p", "b0"), ("q", "c1"), ("p", "b1")],
                          coeff=rng.choice([1, -1]))
        U = U + extra
    H = U * normalize(sig, F, [("p", "w")])
    policy = TruncationPolicy(max_p_weight=2, max_hbar_weight=2,
                              max_t_weight=2, max_word_length=14)
    status = "unit-exact" if with_unit else "no-primitive-within-bounds"
    return CorpusEntry(
        name="layered-%d%s" % (seed, "" if with_unit else "-nounit"),
        description="seeded H = U * p_w family, %d pairs, unit %s"
                    % (pairs, "present" if with_unit else "absent"),
        master=spec_from_hamiltonian(H, policy),
        bounds=SearchBounds(max_word_length=3, max_hbar=2),
        policy=policy,
        expected={f: status for f in Flavor},
    )


def standard_corpus():
    return [
        toy_overtwisted(),
        toy_tight(),
        random_layered_spec(2026, pairs=2, with_unit=True),
        random_layered_spec(7, pairs=2, with_unit=False),
    ]


def corpus_entry(name: str) -> CorpusEntry:
    for entry in standard_corpus():
        if entry.name == name:
            return entry
    raise KeyError("no corpus entry named %r" % name)
