"""Index arithmetic: combinatorial factors, expected dimensions, enumeration.

Every differential coefficient is a signed curve count divided by the
symmetry factor C(I-) C(I+), and a count can only be nonzero when the
expected moduli dimension is 0, which the gradings convert into "each image
term drops degree by exactly one".

    python demos/03_dimension_bookkeeping.py
"""

from fractions import Fraction

from sftdga import AlgebraSignature, Element, Flavor, OrbitRecord
from sftdga.algebra import generator_degree
from sftdga.indexcalc import (combinatorial_factor, enumerate_admissible_profiles,
                              moduli_dimension, profile_dimension,
                              term_cycle_degree, term_profile)

sig = AlgebraSignature(
    n=4,
    orbits=(OrbitRecord("a", cz=1, kappa=1, period=Fraction(1)),
            OrbitRecord("b", cz=2, kappa=3, period=Fraction(3, 2)),
            OrbitRecord("x", cz=2, kappa=1, period=Fraction(2)),
            OrbitRecord("y", cz=1, kappa=1, period=Fraction(1))),
)

# orbit a twice (kappa 1) and b once (kappa 3):
# C = 2! * (2! * 1!) * (1^2 * 3^1) = 12
print("C({a:2, b:1}) =", combinatorial_factor({"a": 2, "b": 1}, sig))
print("C({a:2})      =", combinatorial_factor({"a": 2}, sig))
print("C({})         =", combinatorial_factor({}, sig))

print("\nexpected dimensions at a positive puncture on x:")
for kw, label in [
    (dict(i_minus={"y": 1}), "one negative end on y"),
    (dict(i_minus={"y": 1}, genus=1), "same, genus 1"),
    (dict(i_minus={"y": 1}, marked=1), "same, one marked point"),
]:
    print("  %-28s dim = %d" % (label, moduli_dimension(sig, "x", "+", **kw)))

# dimension 0 is the same statement as degree drop 1, hbar and t included
elem = Element.term(sig, Flavor.SFT_STAR, q={"y": 1})
(mono, _), = elem.items()
prof = term_profile(sig, "q", "x", mono)
dim = profile_dimension(sig, prof) - term_cycle_degree(sig, mono)
drop = generator_degree(("q", "x"), sig) - elem.degree()
print("\nterm q_y in d(q_x): dimension %d, degree drop %d" % (dim, drop))

print("\nall admissible rigid profiles at a positive puncture on x")
print("(genus <= 1, at most 3 punctures, action filter on):")
for prof in enumerate_admissible_profiles(sig, "x", "+", dimension=0,
                                          max_genus=1, max_punctures=3):
    c_minus, c_plus = prof.factors(sig)
    print("  g=%d m=%d I-=%s I+=%s  C(I-)=%d C(I+)=%d"
          % (prof.genus, prof.marked, dict(prof.i_minus), dict(prof.i_plus),
             c_minus, c_plus))
