"""Unit-exactness: search, stepwise lift, projection back, negative control.

A primitive of the unit in the smallest flavor lifts constructively through
the ladder CH -> rSFT -> SFT -> SFT* (and the marked variants), one variable
class at a time, by inverting u = d(f) as a formal series.  Projection back
down recovers the original primitive on the nose.  Absence results are only
semidecisions: they hold within the searched bounds.

    python demos/04_unit_primitive_round_trip.py
"""

from sftdga import Element, Flavor, TruncationPolicy
from sftdga.corpus import toy_overtwisted, toy_tight
from sftdga.differential import apply_d, restrict_spec
from sftdga.vanishing import (classify, find_unit_primitive, lift_primitive,
                              project_primitive)

toy = toy_overtwisted()
sig = toy.master.sig

ch_spec = restrict_spec(toy.master, Flavor.CH)
cert = find_unit_primitive(ch_spec, toy.bounds)
print("CH search:", cert.detail)
print("  f =", cert.primitive)
print("  d(f) =", apply_d(ch_spec, cert.primitive))

policy = TruncationPolicy(max_p_weight=2, max_hbar_weight=2,
                          max_t_weight=2, max_word_length=30)

print("\nstepwise lifts (each verified to its filtration weight):")
rsft = lift_primitive(restrict_spec(toy.master, Flavor.RSFT),
                      cert.primitive, policy)
sft = lift_primitive(restrict_spec(toy.master, Flavor.SFT),
                     rsft.primitive, policy)
star = lift_primitive(toy.master, sft.primitive, policy)
for c in (rsft, sft, star):
    print("  %-16s verified to weight %s" % (c.method, c.verified_to_weight))
print("  f_SFT* =", star.primitive)

back = project_primitive(ch_spec, star.primitive)
print("\nprojecting back down:", back.method)
print("  recovered f =", back.primitive)

print("\nwhole ladder at once:")
print(classify(toy.master, toy.bounds, toy.policy).summary())

print("\nnegative control (zero differential, so nothing hits the unit):")
tight = toy_tight()
print(classify(tight.master, tight.bounds, tight.policy).summary())
