"""Contact data and the grading it induces.

A signature records the discrete input everybody else consumes: the ambient
dimension parameter n (the contact manifold has dimension 2n-1), a free
abelian group H of rank ``h2rank`` with a fixed integral pairing vector c1,
one record per closed Reeb orbit (Conley-Zehnder index, multiplicity kappa,
optional period), and one record per chosen closed-form degree used by the
marked-point variants.

Degree conventions, with |x| the integer grading:

    |q_g|   = cz(g) + n - 3          (orbit variable recording a negative end)
    |p_g|   = -cz(g) + n - 3         (orbit variable recording a positive end)
    |hbar|  = 2(n - 3)               (genus counter, central)
    |t_j|   = form_degree(j) - 2     (marked-point variable)
    |e^A|   = -2 <c1, A>             (group-ring coefficient, A in Z^h2rank)

Parities are degrees mod 2; q_g and p_g always share parity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import SignatureError, UnknownVariableError

GroupElement = tuple[int, ...]


@dataclass(frozen=True)
class OrbitRecord:
    """One closed Reeb orbit: id, Conley-Zehnder index, multiplicity, period."""

    id: str
    cz: int
    kappa: int = 1
    period: Fraction | None = None


@dataclass(frozen=True)
class TFormRecord:
    """One closed-form label Theta^j for the marked-point variants."""

    id: str
    form_degree: int


class AlgebraSignature:
    """Immutable bundle of contact data; the context object for every algebra op."""

    def __init__(self, n, h2rank=0, c1=(), orbits=(), tforms=()):
        if n < 1:
            raise SignatureError("n must be a positive integer")
        if h2rank < 0:
            raise SignatureError("h2rank must be nonnegative")
        c1 = tuple(int(x) for x in c1)
        if len(c1) != h2rank:
            raise SignatureError(
                "c1 must have exactly h2rank=%d components, got %d" % (h2rank, len(c1))
            )
        orbits = tuple(orbits)
        tforms = tuple(tforms)
        for rec in orbits:
            if rec.kappa < 1:
                raise SignatureError("orbit %r: kappa must be >= 1" % rec.id)
            if rec.period is not None and not rec.period > 0:
                raise SignatureError("orbit %r: period must be positive" % rec.id)
        for rec in tforms:
            if not 0 <= rec.form_degree <= 2 * n - 1:
                raise SignatureError(
                    "t-form %r: form_degree must lie in [0, 2n-1]" % rec.id
                )
        ids = [rec.id for rec in orbits]
        if len(set(ids)) != len(ids):
            raise SignatureError("duplicate orbit ids")
        tids = [rec.id for rec in tforms]
        if len(set(tids)) != len(tids):
            raise SignatureError("duplicate t-form ids")
        self.n = int(n)
        self.h2rank = int(h2rank)
        self.c1 = c1
        self.orbits = orbits
        self.tforms = tforms
        self._orbit_index = {rec.id: i for i, rec in enumerate(orbits)}
        self._tform_index = {rec.id: i for i, rec in enumerate(tforms)}

    # -- lookups -----------------------------------------------------------

    def orbit(self, oid) -> OrbitRecord:
        try:
            return self.orbits[self._orbit_index[oid]]
        except KeyError:
            raise UnknownVariableError("unknown orbit id %r" % (oid,)) from None

    def tform(self, tid) -> TFormRecord:
        try:
            return self.tforms[self._tform_index[tid]]
        except KeyError:
            raise UnknownVariableError("unknown t-form id %r" % (tid,)) from None

    def orbit_index(self, oid) -> int:
        try:
            return self._orbit_index[oid]
        except KeyError:
            raise UnknownVariableError("unknown orbit id %r" % (oid,)) from None

    def tform_index(self, tid) -> int:
        try:
            return self._tform_index[tid]
        except KeyError:
            raise UnknownVariableError("unknown t-form id %r" % (tid,)) from None

    def zero_group(self) -> GroupElement:
        return (0,) * self.h2rank

    def check_group(self, group) -> GroupElement:
        group = tuple(int(x) for x in group)
        if len(group) != self.h2rank:
            raise SignatureError(
                "group element must have %d coordinates, got %d"
                % (self.h2rank, len(group))
            )
        return group

    # -- degrees -----------------------------------------------------------

    def q_degree(self, oid) -> int:
        return self.orbit(oid).cz + self.n - 3

    def p_degree(self, oid) -> int:
        return -self.orbit(oid).cz + self.n - 3

    def t_degree(self, tid) -> int:
        return self.tform(tid).form_degree - 2

    def hbar_degree(self) -> int:
        return 2 * (self.n - 3)

    def group_degree(self, group) -> int:
        group = self.check_group(group)
        return -2 * sum(c * a for c, a in zip(self.c1, group))

    def __eq__(self, other):
        if not isinstance(other, AlgebraSignature):
            return NotImplemented
        return (
            self.n == other.n
            and self.h2rank == other.h2rank
            and self.c1 == other.c1
            and self.orbits == other.orbits
            and self.tforms == other.tforms
        )

    def __repr__(self):
        return "AlgebraSignature(n=%d, h2rank=%d, orbits=%d, tforms=%d)" % (
            self.n,
            self.h2rank,
            len(self.orbits),
            len(self.tforms),
        )


def generator_degree(var, sig: AlgebraSignature) -> int:
    """Degree of one generator.

    ``var`` is ``("q", oid)``, ``("p", oid)``, ``("t", tid)``, the string
    ``"hbar"``, or a bare tuple of ints (a group element A, graded by
    -2<c1, A>).
    """
    if var == "hbar":
        return sig.hbar_degree()
    if isinstance(var, tuple) and len(var) == 2 and var[0] in ("q", "p", "t"):
        kind, vid = var
        if kind == "q":
            return sig.q_degree(vid)
        if kind == "p":
            return sig.p_degree(vid)
        return sig.t_degree(vid)
    if isinstance(var, tuple) and all(isinstance(x, int) for x in var):
        return sig.group_degree(var)
    raise UnknownVariableError("not a variable reference: %r" % (var,))
