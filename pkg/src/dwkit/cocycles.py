"""Group cochains valued in exact rational phases.

A degree-d cochain is a function A^d -> Q/Z (read multiplicatively as
A^d -> U(1)).  Builtin cocycles evaluate lazily by formula; only explicit
table cochains materialize all |A|^d values.  The coboundary follows the
bar-complex alternating product, and the slant product lowers degree by
pairing with a group element.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction
from itertools import product

from .abelian import ZERO_PHASE, FiniteAbelianGroup, GroupElement, RationalPhase
from .errors import DomainError

__all__ = [
    "GroupCochain",
    "trivial_cochain",
    "coboundary",
    "is_cocycle",
    "is_normalized",
    "omega_k",
    "psi_l",
    "slant",
    "table_cochain",
    "random_cochain",
    "random_coboundary",
    "bicharacter",
    "cocycle_from_spec",
    "load_table_cochain",
]


class GroupCochain:
    """A degree-d group cochain with a phase-valued evaluation rule."""

    def __init__(self, degree, evaluate, group=None, label="cochain"):
        if degree < 1:
            raise ValueError("cochain degree must be >= 1")
        self.degree = degree
        self._evaluate = evaluate
        self.group = group
        self.label = label

    def phase(self, args) -> RationalPhase:
        args = tuple(args)
        if len(args) != self.degree:
            raise ValueError(f"{self.label} has degree {self.degree}, got {len(args)} arguments")
        return self._evaluate(args)

    def __call__(self, *args) -> RationalPhase:
        return self.phase(args)

    def __mul__(self, other):
        if not isinstance(other, GroupCochain):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError("pointwise product needs equal degrees")
        return GroupCochain(
            self.degree,
            lambda args: self.phase(args) + other.phase(args),
            group=self.group or other.group,
            label=f"({self.label})*({other.label})",
        )

    def inverse(self):
        return GroupCochain(
            self.degree,
            lambda args: -self.phase(args),
            group=self.group,
            label=f"({self.label})^-1",
        )

    def __repr__(self):
        return f"GroupCochain(degree={self.degree}, {self.label})"


def trivial_cochain(degree, group=None) -> GroupCochain:
    return GroupCochain(degree, lambda args: ZERO_PHASE, group=group, label="trivial")


def coboundary(w: GroupCochain) -> GroupCochain:
    """The bar-complex coboundary, one degree up; delta of delta is trivial."""
    d = w.degree

    def ev(args):
        total = w.phase(args[1:])
        for i in range(1, d + 1):
            merged = args[: i - 1] + (args[i - 1] + args[i],) + args[i + 1 :]
            total = total + (-1) ** i * w.phase(merged)
        total = total + (-1) ** (d + 1) * w.phase(args[:-1])
        return total

    return GroupCochain(d + 1, ev, group=w.group, label=f"d({w.label})")


def _resolve_group(w, group):
    group = group if group is not None else w.group
    if group is None:
        raise ValueError("need a finite group to check a formula cochain exhaustively")
    return group


def is_cocycle(w: GroupCochain, group=None) -> bool:
    """Exhaustive check that the coboundary vanishes on all tuples."""
    group = _resolve_group(w, group)
    dw = coboundary(w)
    return all(
        dw.phase(args).is_zero()
        for args in product(group.elements(), repeat=w.degree + 1)
    )


def is_normalized(w: GroupCochain, group=None) -> bool:
    """Exhaustive check: value 1 whenever at least one entry is the identity."""
    group = _resolve_group(w, group)
    for args in product(group.elements(), repeat=w.degree):
        if any(g.is_identity() for g in args) and not w.phase(args).is_zero():
            return False
    return True


def _lead_phase(g: GroupElement) -> Fraction:
    ph = g.phases()
    return ph[0] if ph else Fraction(0)


def omega_k(k: int) -> GroupCochain:
    """Degree-3 cocycle on roots of unity: phase k*a*(b+c - [b+c]).

    Elements are read inside U(1) through their first cyclic factor, so the
    same formula restricts to every Lambda_N.  The square bracket is addition
    modulo 1, making the last factor the integer carry of b+c.
    """

    def ev(args):
        a = _lead_phase(args[0])
        carry = 1 if _lead_phase(args[1]) + _lead_phase(args[2]) >= 1 else 0
        return RationalPhase.from_fraction(k * a * carry)

    return GroupCochain(3, ev, label=f"omega_k:{k}")


def psi_l(l: int) -> GroupCochain:
    """Degree-3 cocycle on pairs of roots of unity: phase l*a1*(b2+c2 - [b2+c2])."""

    def second(g):
        ph = g.phases()
        if len(ph) < 2:
            raise DomainError("psi_l needs a group with at least two cyclic factors")
        return ph[1]

    def ev(args):
        a1 = _lead_phase(args[0])
        if len(args[0].phases()) < 2:
            raise DomainError("psi_l needs a group with at least two cyclic factors")
        carry = 1 if second(args[1]) + second(args[2]) >= 1 else 0
        return RationalPhase.from_fraction(l * a1 * carry)

    return GroupCochain(3, ev, label=f"psi_l:{l}")


def slant(w: GroupCochain, a: GroupElement) -> GroupCochain:
    """Slant product w \\ a, one degree down.

    The i-th factor inserts a after g_i and carries exponent (-1)^(n-i):
    moving a from the last slot to position i+1 costs n-i transpositions.
    For degree 3 this is w(a,g1,g2) * w(g1,a,g2)^-1 * w(g1,g2,a).
    """
    n = w.degree - 1

    def ev(args):
        total = ZERO_PHASE
        for i in range(n + 1):
            inserted = args[:i] + (a,) + args[i:]
            total = total + (-1) ** (n - i) * w.phase(inserted)
        return total

    return GroupCochain(n, ev, group=w.group, label=f"({w.label})\\{a.residues}")


def table_cochain(group: FiniteAbelianGroup, degree: int, values: dict) -> GroupCochain:
    """Dense cochain from a mapping (residue tuple, ...) -> RationalPhase.

    The table must cover all |A|^degree argument tuples.
    """
    expected = group.order ** degree
    if len(values) != expected:
        raise ValueError(f"table must have {expected} entries, got {len(values)}")

    def ev(args):
        return values[tuple(g.residues for g in args)]

    return GroupCochain(degree, ev, group=group, label="table")


def random_cochain(group: FiniteAbelianGroup, degree: int, seed: int) -> GroupCochain:
    """Seeded random table cochain with phases in (1/2|A|)Z."""
    rng = random.Random(seed)
    den = 2 * group.order
    values = {
        tuple(g.residues for g in args): RationalPhase(rng.randrange(den), den)
        for args in product(group.elements(), repeat=degree)
    }
    return table_cochain(group, degree, values)


def random_coboundary(group: FiniteAbelianGroup, degree: int, seed: int) -> GroupCochain:
    """delta of a seeded random (degree-1)-cochain; always a cocycle."""
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if degree == 1:
        return trivial_cochain(1, group=group)
    return coboundary(random_cochain(group, degree - 1, seed))


def bicharacter(group: FiniteAbelianGroup, exponents) -> GroupCochain:
    """Bilinear 2-cocycle beta(a, b) with phase sum_ij m_ij r_i(a) r_j(b) / d_j.

    Requires d_j | d_i * m_ij so the form is well defined on residues; any
    bilinear form is automatically a 2-cocycle.
    """
    mods = group.moduli
    k = len(mods)
    m = [list(row) for row in exponents]
    if len(m) != k or any(len(row) != k for row in m):
        raise ValueError("exponent matrix must be square of size len(moduli)")
    for i in range(k):
        for j in range(k):
            if (mods[i] * m[i][j]) % mods[j] != 0:
                raise ValueError(f"entry ({i},{j}) breaks bilinearity on residues")

    def ev(args):
        a, b = args
        total = Fraction(0)
        for i in range(k):
            for j in range(k):
                if m[i][j]:
                    total += Fraction(m[i][j] * a.residues[i] * b.residues[j], mods[j])
        return RationalPhase.from_fraction(total)

    return GroupCochain(2, ev, group=group, label="bicharacter")


# ---------------------------------------------------------------------------
# Cocycle specifiers (CLI / config surface)
# ---------------------------------------------------------------------------

def _encode_key(residue_tuples) -> str:
    return ";".join(",".join(str(r) for r in res) for res in residue_tuples)


def _decode_key(key: str, n_args: int, n_factors: int):
    parts = key.split(";") if key else []
    if len(parts) != n_args:
        raise ValueError(f"table key {key!r} must list {n_args} elements")
    out = []
    for part in parts:
        res = tuple(int(x) for x in part.split(",")) if part else ()
        if len(res) != n_factors:
            raise ValueError(f"table key {key!r} must use {n_factors} residues per element")
        out.append(res)
    return tuple(out)


def table_cochain_to_json(group, degree, values) -> dict:
    return {
        "group": group.to_json(),
        "degree": degree,
        "values": {
            _encode_key(key): [ph.numerator, ph.denominator] for key, ph in values.items()
        },
    }


def load_table_cochain(path: str) -> GroupCochain:
    with open(path) as fh:
        data = json.load(fh)
    try:
        group = FiniteAbelianGroup.from_json(data["group"])
        degree = int(data["degree"])
        raw = data["values"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed cocycle table: {exc}") from exc
    values = {}
    for key, (num, den) in raw.items():
        decoded = _decode_key(key, degree, len(group.moduli))
        values[tuple(tuple(r % d for r, d in zip(res, group.moduli)) for res in decoded)] = (
            RationalPhase(int(num), int(den))
        )
    return table_cochain(group, degree, values)


def cocycle_from_spec(spec: str, degree: int) -> GroupCochain:
    """Resolve a specifier: trivial | omega_k:K | psi_l:L | table:<file>."""
    if spec == "trivial":
        return trivial_cochain(degree)
    if spec.startswith("omega_k:"):
        return omega_k(int(spec.split(":", 1)[1]))
    if spec.startswith("psi_l:"):
        return psi_l(int(spec.split(":", 1)[1]))
    if spec.startswith("table:"):
        return load_table_cochain(spec.split(":", 1)[1])
    raise ValueError(f"unknown cocycle specifier {spec!r}")
