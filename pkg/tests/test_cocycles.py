import json
from itertools import product

import pytest

from dwkit.abelian import FiniteAbelianGroup, RationalPhase
from dwkit.cocycles import (
    bicharacter,
    coboundary,
    cocycle_from_spec,
    is_cocycle,
    is_normalized,
    omega_k,
    psi_l,
    random_coboundary,
    random_cochain,
    slant,
    table_cochain,
    table_cochain_to_json,
    trivial_cochain,
)
from dwkit.errors import DomainError


def roots(n):
    return FiniteAbelianGroup([n])


class TestCoboundary:
    def test_trivial_stays_trivial(self):
        A = roots(4)
        d = coboundary(trivial_cochain(2, group=A))
        assert all(
            d.phase(args).is_zero() for args in product(A.elements(), repeat=3)
        )

    @pytest.mark.parametrize("moduli", [[2], [3], [6], [2, 2]])
    @pytest.mark.parametrize("degree", [1, 2, 3])
    def test_delta_squared_vanishes(self, moduli, degree):
        A = FiniteAbelianGroup(moduli)
        w = random_cochain(A, degree, seed=degree + 10 * len(moduli))
        ddw = coboundary(coboundary(w))
        assert all(
            ddw.phase(args).is_zero()
            for args in product(A.elements(), repeat=degree + 2)
        )

    def test_random_coboundary_is_cocycle_and_deterministic(self):
        A = FiniteAbelianGroup([2, 2])
        w1 = random_coboundary(A, 3, seed=5)
        w2 = random_coboundary(A, 3, seed=5)
        args = tuple(A.elements())[:3]
        assert w1.phase(args) == w2.phase(args)
        assert is_cocycle(w1)
        assert is_cocycle(random_coboundary(A, 1, seed=0))


class TestBuiltinCocycles:
    def test_omega_identity_first_argument(self):
        A = roots(5)
        w = omega_k(3)
        e = A.identity()
        for g2, g3 in product(A.elements(), repeat=2):
            assert w(e, g2, g3).is_zero()

    def test_omega_hand_values(self):
        A = roots(5)
        w = omega_k(3)
        # b + c = 6/5 wraps, so the phase is k*a = 3/5
        assert w(A.element([1]), A.element([2]), A.element([4])) == RationalPhase(3, 5)
        B = roots(2)
        w1 = omega_k(1)
        m = B.element([1])
        assert w1(m, m, m) == RationalPhase(1, 2)

    @pytest.mark.parametrize("n", range(2, 9))
    def test_omega_is_normalized_cocycle(self, n):
        A = roots(n)
        for k in range(0, 2 * n + 1, max(1, n // 2)):
            w = omega_k(k)
            assert is_cocycle(w, A)
            assert is_normalized(w, A)

    def test_omega_multiplicative_in_k(self):
        A = roots(6)
        w2, w3, w5 = omega_k(2), omega_k(3), omega_k(5)
        for args in product(A.elements(), repeat=3):
            assert w5.phase(args) == w2.phase(args) + w3.phase(args)

    def test_psi_identity_and_hand_value(self):
        A = FiniteAbelianGroup([2, 2])
        w = psi_l(1)
        e = A.identity()
        g = A.element([1, 1])
        assert w(e, g, g).is_zero()
        # a_1 = 1/2, b_2 + c_2 = 1 wraps: phase 1/2
        assert w(A.element([1, 0]), A.element([0, 1]), A.element([0, 1])) == RationalPhase(1, 2)

    def test_psi_is_cocycle_and_linear_in_l(self):
        A = FiniteAbelianGroup([2, 2])
        assert is_cocycle(psi_l(1), A)
        assert is_normalized(psi_l(1), A)
        w1, w2 = psi_l(1), psi_l(2)
        for args in product(A.elements(), repeat=3):
            assert w2.phase(args) == w1.phase(args) + w1.phase(args)

    def test_psi_requires_two_factors(self):
        A = roots(4)
        g = A.element([1])
        with pytest.raises(DomainError):
            psi_l(1)(g, g, g)

    def test_random_cochain_is_almost_surely_not_cocycle(self):
        A = roots(2)
        w = random_cochain(A, 3, seed=1)
        assert not is_cocycle(w)


class TestSlant:
    def test_slant_of_trivial(self):
        A = roots(3)
        w = trivial_cochain(3, group=A)
        s = slant(w, A.element([1]))
        assert all(s.phase(args).is_zero() for args in product(A.elements(), repeat=2))

    def test_degree3_sign_pattern(self):
        A = roots(5)
        w = omega_k(2)
        a = A.element([2])
        s = slant(w, a)
        for g1, g2 in product(A.elements(), repeat=2):
            expected = w(a, g1, g2) - w(g1, a, g2) + w(g1, g2, a)
            assert s(g1, g2) == expected

    @pytest.mark.parametrize("n", range(2, 7))
    def test_slant_of_omega_is_cocycle(self, n):
        A = roots(n)
        w = omega_k(1)
        for a in A.elements():
            assert is_cocycle(slant(w, a), A)

    def test_slant_by_identity_of_normalized_is_trivial(self):
        A = roots(4)
        w = omega_k(3)
        s = slant(w, A.identity())
        assert all(s.phase(args).is_zero() for args in product(A.elements(), repeat=2))


class TestTableAndSpecs:
    def test_table_must_be_total(self):
        A = roots(2)
        with pytest.raises(ValueError):
            table_cochain(A, 2, {})

    def test_bicharacter_is_cocycle(self):
        A = FiniteAbelianGroup([2, 2])
        beta = bicharacter(A, [[0, 1], [0, 0]])
        assert is_cocycle(beta)
        assert is_normalized(beta)
        assert beta(A.element([1, 0]), A.element([0, 1])) == RationalPhase(1, 2)
        assert beta(A.element([0, 1]), A.element([1, 0])).is_zero()

    def test_bicharacter_rejects_bad_exponents(self):
        A = FiniteAbelianGroup([2, 4])
        with pytest.raises(ValueError):
            bicharacter(A, [[0, 1], [0, 0]])
        beta = bicharacter(A, [[0, 2], [0, 0]])
        assert is_cocycle(beta)

    def test_spec_parsing(self):
        assert cocycle_from_spec("trivial", 3).degree == 3
        assert cocycle_from_spec("omega_k:2", 3).label == "omega_k:2"
        assert cocycle_from_spec("psi_l:1", 3).label == "psi_l:1"
        with pytest.raises(ValueError):
            cocycle_from_spec("nonsense", 3)

    def test_table_file_roundtrip(self, tmp_path):
        A = FiniteAbelianGroup([2, 2])
        beta = bicharacter(A, [[0, 1], [0, 0]])
        values = {
            tuple(g.residues for g in args): beta.phase(args)
            for args in product(A.elements(), repeat=2)
        }
        path = tmp_path / "beta.json"
        path.write_text(json.dumps(table_cochain_to_json(A, 2, values)))
        loaded = cocycle_from_spec(f"table:{path}", 2)
        for args in product(A.elements(), repeat=2):
            assert loaded.phase(args) == beta.phase(args)
