"""Build a differential from an interaction element and validate it.

The differential of the full flavor is d = hbar^{-1} [H, -] for an odd
degree -1 element H.  d^2 = 0 then reduces to H * H commuting with
everything, which the toy example satisfies on the nose (H * H = 0).

    python demos/02_validate_differential.py
"""

from sftdga import Element, Flavor
from sftdga.algebra import normalize
from sftdga.corpus import spec_from_hamiltonian, toy_overtwisted
from sftdga.differential import check_d_squared, full_check

toy = toy_overtwisted()
sig = toy.master.sig
F = Flavor.SFT_STAR

# the interaction element behind the built-in example: a unit block plus one
# degree-0 correction per variable class, times an odd p letter
U = (Element.unit(sig, F)
     - Element.term(sig, F, q={"c": 1}, p={"b": 1})
     + Element.term(sig, F, q={"c": 1}, hbar=1)
     - Element.term(sig, F, q={"c": 1}, t={"u": 1}))
H = U * normalize(sig, F, [("p", "a")])
print("H     =", H)
print("H * H =", H * H)

spec = spec_from_hamiltonian(H, toy.policy)
print("\ngenerator images:")
for (kind, vid), img in sorted(spec.images.items()):
    print("  d(%s_%s) = %s" % (kind, vid, img))

print("\nfull validation (degrees, positivity, Leibniz, d^2):")
print(full_check(spec).summary())

# break it on purpose: redefining d(q_b) kills d^2 = 0, and the report
# pinpoints the residual
images = dict(spec.images)
images[("q", "b")] = Element.term(sig, F, q={"a": 1})
from sftdga.differential import DifferentialSpec

broken = DifferentialSpec(sig, F, images, toy.policy)
print("\nafter corrupting d(q_b):")
print(check_d_squared(broken).summary())
