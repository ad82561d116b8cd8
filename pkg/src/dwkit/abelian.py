"""Finite abelian groups, exact U(1) phases, and Gauss sum number theory.

Everything here is exact: group elements are residue tuples, unit complex
numbers are rational phases (elements of Q/Z), and the only floating point
appears when a phase is finally exponentiated.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .errors import CoprimalityError, DomainError

__all__ = [
    "RationalPhase",
    "ZERO_PHASE",
    "FiniteAbelianGroup",
    "GroupElement",
    "FinitelyGeneratedAbelianGroup",
    "U1",
    "smith_normal_form",
    "hom_group",
    "HomGroup",
    "mod_inverse",
    "legendre_symbol",
    "is_odd_prime",
    "gauss_sum",
    "gauss_sum_closed",
    "invariant_factors",
]


@lru_cache(maxsize=None)
def _unit_exp(numerator: int, denominator: int) -> complex:
    return cmath.exp(2j * math.pi * numerator / denominator)


class RationalPhase:
    """An element a of Q/Z, standing for the unit complex number e^{2*pi*i*a}.

    Stored reduced with 0 <= numerator < denominator.  Addition is mod 1,
    so multiplying unit complex numbers is adding their phases.
    """

    __slots__ = ("_frac",)

    def __init__(self, numerator, denominator=1):
        self._frac = Fraction(numerator, denominator) % 1

    @classmethod
    def from_fraction(cls, frac: Fraction) -> "RationalPhase":
        return cls(frac.numerator, frac.denominator)

    @property
    def numerator(self) -> int:
        return self._frac.numerator

    @property
    def denominator(self) -> int:
        return self._frac.denominator

    @property
    def fraction(self) -> Fraction:
        return self._frac

    def is_zero(self) -> bool:
        return self._frac == 0

    def complex(self) -> complex:
        return _unit_exp(self._frac.numerator, self._frac.denominator)

    def __add__(self, other):
        if not isinstance(other, RationalPhase):
            return NotImplemented
        return RationalPhase.from_fraction(self._frac + other._frac)

    def __sub__(self, other):
        if not isinstance(other, RationalPhase):
            return NotImplemented
        return RationalPhase.from_fraction(self._frac - other._frac)

    def __neg__(self):
        return RationalPhase.from_fraction(-self._frac)

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return RationalPhase.from_fraction(k * self._frac)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, RationalPhase) and self._frac == other._frac

    def __hash__(self):
        return hash(("RationalPhase", self._frac))

    def __repr__(self):
        return f"RationalPhase({self._frac.numerator}/{self._frac.denominator})"


ZERO_PHASE = RationalPhase(0)


class GroupElement:
    """Element of a FiniteAbelianGroup: a componentwise-reduced residue tuple."""

    __slots__ = ("group", "residues")

    def __init__(self, group: "FiniteAbelianGroup", residues):
        self.group = group
        self.residues = tuple(r % d for r, d in zip(residues, group.moduli, strict=True))

    def is_identity(self) -> bool:
        return all(r == 0 for r in self.residues)

    def phases(self) -> tuple:
        """Read the element inside U(1)^k: residue r mod d becomes r/d."""
        return tuple(Fraction(r, d) for r, d in zip(self.residues, self.group.moduli))

    def order(self) -> int:
        o = 1
        for r, d in zip(self.residues, self.group.moduli):
            o = math.lcm(o, d // math.gcd(r, d))
        return o

    def __add__(self, other):
        if not isinstance(other, GroupElement) or other.group != self.group:
            return NotImplemented
        return GroupElement(self.group, [a + b for a, b in zip(self.residues, other.residues)])

    def __sub__(self, other):
        if not isinstance(other, GroupElement) or other.group != self.group:
            return NotImplemented
        return GroupElement(self.group, [a - b for a, b in zip(self.residues, other.residues)])

    def __neg__(self):
        return GroupElement(self.group, [-a for a in self.residues])

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return GroupElement(self.group, [k * a for a in self.residues])

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, GroupElement)
            and self.group.moduli == other.group.moduli
            and self.residues == other.residues
        )

    def __hash__(self):
        return hash((self.group.moduli, self.residues))

    def __repr__(self):
        return f"GroupElement{self.residues}"


class FiniteAbelianGroup:
    """Direct sum of cyclic groups Z/d_i; the empty product is the trivial group."""

    __slots__ = ("moduli",)

    def __init__(self, moduli):
        moduli = tuple(int(d) for d in moduli)
        if any(d < 1 for d in moduli):
            raise ValueError(f"moduli must be >= 1, got {moduli}")
        self.moduli = moduli

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    def identity(self) -> GroupElement:
        return GroupElement(self, (0,) * len(self.moduli))

    def element(self, residues) -> GroupElement:
        return GroupElement(self, residues)

    def elements(self):
        """All elements, in lexicographic residue order."""
        for residues in product(*(range(d) for d in self.moduli)):
            yield GroupElement(self, residues)

    def torsion_elements(self, n: int):
        """Elements killed by n (all elements when n == 0)."""
        for residues in product(*(self._torsion_residues(n, d) for d in self.moduli)):
            yield GroupElement(self, residues)

    @staticmethod
    def _torsion_residues(n, d):
        if n == 0:
            return range(d)
        g = math.gcd(n, d)
        step = d // g
        return range(0, d, step)

    def __eq__(self, other):
        return isinstance(other, FiniteAbelianGroup) and self.moduli == other.moduli

    def __hash__(self):
        return hash(("FiniteAbelianGroup", self.moduli))

    def __repr__(self):
        return f"FiniteAbelianGroup({list(self.moduli)})"

    def to_json(self):
        return {"moduli": list(self.moduli)}

    @classmethod
    def from_json(cls, data):
        return cls(data["moduli"])


class _CircleGroup:
    """Symbolic U(1) target.

    Not enumerable: the fields module replaces it by the group of roots of
    unity carried by the torsion of H_1, and refuses positive Betti rank.
    """

    def __repr__(self):
        return "U1"


U1 = _CircleGroup()


class FinitelyGeneratedAbelianGroup:
    """Z^free_rank + sum of Z/d_i with the d_i in invariant-factor form."""

    __slots__ = ("free_rank", "torsion")

    def __init__(self, free_rank: int, torsion=()):
        torsion = tuple(int(d) for d in torsion)
        if free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        if any(d < 2 for d in torsion):
            raise ValueError("torsion coefficients must be >= 2")
        for a, b in zip(torsion, torsion[1:]):
            if b % a != 0:
                raise ValueError(f"not invariant-factor form: {torsion}")
        self.free_rank = free_rank
        self.torsion = torsion

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int:
        if not self.is_finite():
            raise DomainError("infinite group has no order")
        return math.prod(self.torsion) if self.torsion else 1

    def __eq__(self, other):
        return (
            isinstance(other, FinitelyGeneratedAbelianGroup)
            and self.free_rank == other.free_rank
            and self.torsion == other.torsion
        )

    def __hash__(self):
        return hash((self.free_rank, self.torsion))

    def __repr__(self):
        return f"FinitelyGeneratedAbelianGroup(free_rank={self.free_rank}, torsion={list(self.torsion)})"

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def invariant_factors(moduli) -> tuple:
    """Normalize an arbitrary list of cyclic orders to invariant-factor form.

    Splits each modulus into prime powers and rebuilds factors d_1 | d_2 | ...
    Orders equal to 1 drop out.
    """
    by_prime = {}
    for d in moduli:
        d = int(d)
        if d < 1:
            raise ValueError("cyclic orders must be >= 1")
        for p, e in _factorize(d).items():
            by_prime.setdefault(p, []).append(e)
    if not by_prime:
        return ()
    depth = max(len(v) for v in by_prime.values())
    factors = []
    for i in range(depth):
        f = 1
        for p, exps in by_prime.items():
            exps_sorted = sorted(exps, reverse=True)
            if i < len(exps_sorted):
                f *= p ** exps_sorted[i]
        factors.append(f)
    factors.sort()
    return tuple(factors)


def _factorize(n: int) -> dict:
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------------------
# Smith normal form over Z
# ---------------------------------------------------------------------------

def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _snf_full(matrix):
    """Return (D, U, V, Uinv, Vinv) with U*M*V = D, diagonal, d_i | d_{i+1}.

    U, V are unimodular; the inverses are tracked alongside so callers can
    change basis in both directions without re-solving.
    """
    A = [[int(x) for x in row] for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    U, Ui = _identity(m), _identity(m)
    V, Vi = _identity(n), _identity(n)

    def row_add(i, j, c):  # R_i += c R_j
        A[i] = [a + c * b for a, b in zip(A[i], A[j])]
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        for r in range(m):  # Uinv: C_j -= c C_i
            Ui[r][j] -= c * Ui[r][i]

    def col_add(j, i, c):  # C_j += c C_i
        for r in range(m):
            A[r][j] += c * A[r][i]
        for r in range(n):
            V[r][j] += c * V[r][i]
        Vi[i] = [a - c * b for a, b in zip(Vi[i], Vi[j])]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for r in range(m):
            Ui[r][i], Ui[r][j] = Ui[r][j], Ui[r][i]

    def col_swap(i, j):
        for r in range(m):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        for r in range(n):
            V[r][i], V[r][j] = V[r][j], V[r][i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_negate(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]
        for r in range(m):
            Ui[r][i] = -Ui[r][i]

    t = 0
    while t < min(m, n):
        # locate a pivot of minimal absolute value in the remaining block
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] != 0 and (best is None or abs(A[i][j]) < best):
                    best = abs(A[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        if i != t:
            row_swap(t, i)
        if j != t:
            col_swap(t, j)

        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, m):
                if A[i][t] != 0:
                    q = A[i][t] // A[t][t]
                    row_add(i, t, -q)
                    if A[i][t] != 0:
                        row_swap(t, i)
                        dirty = True
            if dirty:
                continue
            # clear row t
            for j in range(t + 1, n):
                if A[t][j] != 0:
                    q = A[t][j] // A[t][t]
                    col_add(j, t, -q)
                    if A[t][j] != 0:
                        col_swap(t, j)
                        dirty = True
            if dirty:
                continue
            # divisibility: pivot must divide the remaining block
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_add(t, offender, 1)
        if A[t][t] < 0:
            row_negate(t)
        t += 1

    return A, U, V, Ui, Vi


def smith_normal_form(matrix):
    """Smith normal form: returns (D, U, V) with U*M*V = D.

    D is diagonal with d_i | d_{i+1}; U and V are unimodular.  Total on all
    integer matrices.
    """
    D, U, V, _, _ = _snf_full(matrix)
    return D, U, V


# ---------------------------------------------------------------------------
# Hom groups
# ---------------------------------------------------------------------------

class HomGroup:
    """Hom(source, target) realized as a finite abelian group.

    Each element indexes a homomorphism; images() recovers the images of the
    source generators (free generators first, then the torsion generators).
    """

    def __init__(self, source: FinitelyGeneratedAbelianGroup, target: FiniteAbelianGroup):
        self.source = source
        self.target = target
        moduli = []
        # one block of target-moduli per free generator
        for _ in range(source.free_rank):
            moduli.extend(target.moduli)
        # torsion generator of order d contributes gcd(d, e_j) in factor j
        for d in source.torsion:
            moduli.extend(math.gcd(d, e) for e in target.moduli)
        self.group = FiniteAbelianGroup(moduli)

    @property
    def order(self) -> int:
        return self.group.order

    def elements(self):
        return self.group.elements()

    def images(self, hom: GroupElement):
        """Images of the source generators under the homomorphism `hom`."""
        if hom.group != self.group:
            raise ValueError("element does not index this Hom group")
        k = len(self.target.moduli)
        out = []
        pos = 0
        for _ in range(self.source.free_rank):
            out.append(GroupElement(self.target, hom.residues[pos:pos + k]))
            pos += k
        for d in self.source.torsion:
            residues = []
            for e in self.target.moduli:
                g = math.gcd(d, e)
                residues.append((hom.residues[pos] * (e // g)) % e)
                pos += 1
            out.append(GroupElement(self.target, residues))
        return out


def hom_group(source: FinitelyGeneratedAbelianGroup, target: FiniteAbelianGroup) -> HomGroup:
    """The group Hom(source, target) with its indexed family of homomorphisms."""
    return HomGroup(source, target)


# ---------------------------------------------------------------------------
# Modular arithmetic and Gauss sums
# ---------------------------------------------------------------------------

def mod_inverse(q: int, p: int) -> int:
    """Inverse of q modulo p >= 1; errors unless gcd(q, p) == 1."""
    if p < 1:
        raise DomainError(f"modulus must be >= 1, got {p}")
    if math.gcd(q, p) != 1:
        raise CoprimalityError(f"{q} is not invertible modulo {p}")
    if p == 1:
        return 0
    return pow(q, -1, p)


def is_odd_prime(n: int) -> bool:
    if n < 3 or n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def legendre_symbol(r: int, n: int) -> int:
    """+1 if r is a nonzero square mod the odd prime n, -1 otherwise."""
    if not is_odd_prime(n):
        raise DomainError(f"{n} is not an odd prime")
    if r % n == 0:
        raise CoprimalityError(f"{n} divides {r}")
    e = pow(r, (n - 1) // 2, n)
    return 1 if e == 1 else -1


def gauss_sum(r: int, n: int) -> complex:
    """Direct quadratic Gauss sum: sum over l = 1..n of e^{2 pi i r l^2 / n}."""
    if n < 1:
        raise DomainError(f"modulus must be >= 1, got {n}")
    if math.gcd(r, n) != 1:
        raise CoprimalityError(f"gauss_sum needs gcd(r, n) = 1, got r={r}, n={n}")
    return sum((RationalPhase(r * l * l, n).complex() for l in range(1, n + 1)), 0j)


def gauss_sum_closed(r: int, n: int) -> complex:
    """Closed-form Gauss sum.

    Covers r = 1 mod n for any n >= 1 (the four-case Dirichlet evaluation)
    and any r coprime to an odd prime n (Legendre symbol formula).  Errors
    outside those two cases.
    """
    if n < 1:
        raise DomainError(f"modulus must be >= 1, got {n}")
    if math.gcd(r, n) != 1:
        raise CoprimalityError(f"gauss_sum_closed needs gcd(r, n) = 1, got r={r}, n={n}")
    root = math.sqrt(n)
    if is_odd_prime(n):
        sign = legendre_symbol(r, n)
        if n % 4 == 1:
            return sign * root + 0j
        return 1j * sign * root
    if r % n == 1 % n:
        rem = n % 4
        if rem == 0:
            return (1 + 1j) * root
        if rem == 1:
            return root + 0j
        if rem == 2:
            return 0j
        return 1j * root
    raise DomainError(
        f"no closed form implemented for r={r}, n={n}: need r=1 or n an odd prime"
    )
