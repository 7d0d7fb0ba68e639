"""Labels for semisimple two-dimensional mod-p representations of G_{Q_p}.

A label is either Irreducible -- the induction of the c-th power of the
level-2 fundamental character from the unramified quadratic subgroup,
twisted by an unramified character mu_z -- or Reducible, a direct sum of
two characters mu_lambda * omega^a.  Conjugate exponents c and p*c give
isomorphic inductions, and restriction to inertia forgets the unramified
parts; both facts drive the canonical form and the on-inertia comparison.

Fudge-factor eigenvalues the chotomy does not pin down are carried as
SymbolicUnit values: they compare equal only to themselves and propagate
through twists.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import MalformedLabel
from .ffield import quadratic_closure, residue_field

OMEGA = "w"  # display symbol for the level-1 fundamental character


@dataclass(frozen=True)
class SymbolicUnit:
    """Unknown unramified eigenvalue, e.g. an undetermined fudge factor."""

    name: str
    inverted: bool = False

    def inverse(self) -> "SymbolicUnit":
        return replace(self, inverted=not self.inverted)

    def __str__(self):
        return f"unknown({self.name}^-1)" if self.inverted else f"unknown({self.name})"


def lam_inverse(lam):
    if isinstance(lam, SymbolicUnit):
        return lam.inverse()
    return lam.inverse()


def lam_key(lam):
    """Deterministic sort key across field elements and symbols."""
    if isinstance(lam, SymbolicUnit):
        return (1, lam.name, lam.inverted)
    return (0, lam.field.degree) + lam.sort_key()


def lam_str(lam) -> str:
    if isinstance(lam, SymbolicUnit):
        return str(lam)
    return lam.field.to_literal(lam)


def lam_json(lam) -> str:
    """JSON form: a residue-field literal, or the plain string "unknown"."""
    if isinstance(lam, SymbolicUnit):
        return "unknown"
    return lam.field.to_literal(lam)


@dataclass(frozen=True)
class Summand:
    """One character mu_lambda * omega^a."""

    a: int
    lam: object  # FFElem or SymbolicUnit


@dataclass(frozen=True)
class GaloisRep:
    """Semisimple 2-dimensional mod-p label; kind is "irred" or "red"."""

    p: int
    kind: str
    c: int = None
    z: object = None  # unramified twist of the induced label (None = trivial)
    summands: tuple = None

    def canonical(self) -> "GaloisRep":
        """Minimal conjugate exponent; summands sorted by (a, lambda)."""
        n = self.p * self.p - 1
        if self.kind == "irred":
            c = self.c % n
            return replace(self, c=min(c, (c * self.p) % n))
        ss = tuple(sorted((replace(s, a=s.a % (self.p - 1)) for s in self.summands),
                          key=lambda s: (s.a, lam_key(s.lam))))
        return replace(self, summands=ss)

    def twist_by_omega(self, j: int) -> "GaloisRep":
        """Tensor with omega^j: c shifts by j(p+1), summand exponents by j."""
        if self.kind == "irred":
            return replace(self, c=(self.c + j * (self.p + 1)) % (self.p * self.p - 1)).canonical()
        ss = tuple(replace(s, a=(s.a + j) % (self.p - 1)) for s in self.summands)
        return replace(self, summands=ss).canonical()

    def inertial_determinant(self) -> int:
        """Exponent of omega in det restricted to inertia, mod p-1."""
        if self.kind == "irred":
            return self.c % (self.p - 1)
        return sum(s.a for s in self.summands) % (self.p - 1)

    def is_irreducible_label(self) -> bool:
        if self.kind != "irred":
            return False
        if self.c % (self.p + 1) == 0:
            raise MalformedLabel(
                f"ind with (p+1) | c = {self.c} is not irreducible (p = {self.p})")
        return True

    def equals_on_inertia(self, other: "GaloisRep") -> bool:
        """Equality after restricting to inertia (unramified data dropped)."""
        if self.p != other.p or self.kind != other.kind:
            return False
        n = self.p * self.p - 1
        if self.kind == "irred":
            return {self.c % n, self.c * self.p % n} == {other.c % n, other.c * other.p % n}
        mine = sorted(s.a % (self.p - 1) for s in self.summands)
        theirs = sorted(s.a % (other.p - 1) for s in other.summands)
        return mine == theirs

    def __eq__(self, other):
        if not isinstance(other, GaloisRep):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        if (a.p, a.kind) != (b.p, b.kind):
            return False
        if a.kind == "irred":
            if a.c != b.c:
                return False
            za, zb = a.z, b.z
            ta = za is None or _is_one(za)
            tb = zb is None or _is_one(zb)
            if ta or tb:
                return ta and tb
            return _lam_eq(za, zb)
        return all(sa.a == sb.a and _lam_eq(sa.lam, sb.lam)
                   for sa, sb in zip(a.summands, b.summands))

    def __hash__(self):
        c = self.canonical()
        if c.kind == "irred":
            return hash((c.p, c.kind, c.c))
        return hash((c.p, c.kind, tuple((s.a, lam_key(s.lam)) for s in c.summands)))

    # -- rendering -------------------------------------------------------------

    def display(self) -> str:
        if self.kind == "irred":
            base = f"ind(w2^{self.c})"
            if self.z is not None and not _is_one(self.z):
                base += f"*mu({lam_str(self.z)})"
            return base
        return " + ".join(f"mu({lam_str(s.lam)})*{OMEGA}^{s.a}" for s in self.summands)

    def to_json(self) -> dict:
        if self.kind == "irred":
            z = self.z if self.z is not None else residue_field(self.p, 1).one()
            return {"kind": "irred", "c": self.c, "z": lam_json(z)}
        return {"kind": "red",
                "summands": [{"a": s.a, "lambda": lam_json(s.lam)} for s in self.summands]}

    @classmethod
    def from_json(cls, doc: dict, p: int, f: int = 2) -> "GaloisRep":
        if doc["kind"] == "irred":
            z = _lam_from_json(doc.get("z", "1"), p, f)
            return induced(p, doc["c"], z)
        ss = tuple(Summand(d["a"] % (p - 1), _lam_from_json(d["lambda"], p, f))
                   for d in doc["summands"])
        return cls(p, "red", summands=ss)


def _is_one(lam) -> bool:
    return not isinstance(lam, SymbolicUnit) and lam == lam.field.one()


def _lam_eq(x, y) -> bool:
    if isinstance(x, SymbolicUnit) or isinstance(y, SymbolicUnit):
        return x == y
    return x == y


def _lam_from_json(text: str, p: int, f: int):
    text = text.strip()
    if text.startswith("unknown"):
        name = text[len("unknown"):].strip("()") or "*"
        inverted = name.endswith("^-1")
        return SymbolicUnit(name.removesuffix("^-1"), inverted)
    return quadratic_closure(p, f).from_literal(text)


def induced(p: int, c: int, z=None) -> GaloisRep:
    """The label ind(w2^c) tensored with mu_z; exponent taken mod p^2 - 1."""
    return GaloisRep(p, "irred", c=c % (p * p - 1), z=z)


def reducible(p: int, a1: int, lam1, a2: int, lam2) -> GaloisRep:
    """mu_{lam1} w^{a1} + mu_{lam2} w^{a2}, in the given order."""
    return GaloisRep(p, "red",
                     summands=(Summand(a1 % (p - 1), lam1), Summand(a2 % (p - 1), lam2)))


def canonical_form(rep: GaloisRep) -> GaloisRep:
    return rep.canonical()


def inertial_determinant(rep: GaloisRep) -> int:
    return rep.inertial_determinant()


def twist_by_omega(rep: GaloisRep, j: int) -> GaloisRep:
    return rep.twist_by_omega(j)


def is_irreducible_label(rep: GaloisRep) -> bool:
    return rep.is_irreducible_label()


def equals_on_inertia(x: GaloisRep, y: GaloisRep) -> bool:
    return x.equals_on_inertia(y)
