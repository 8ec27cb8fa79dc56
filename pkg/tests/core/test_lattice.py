"""
整数線形代数テスト

スミス標準形・エルミート標準形・核・短完全列・ゲール双対・回路を
小さな配置で検証するテストスイート。
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from pyhtk.core.errors import DegenerateConfig, NonGenericAlpha
from pyhtk.core.lattice import (
    bareiss_determinant,
    canonical_signs,
    circuit_splitting,
    circuits,
    cotangent_projective_config,
    default_alpha,
    exact_sequence,
    exgcd,
    gale_dual,
    hermite_normal_form,
    integer_rank,
    is_unimodular,
    kernel_basis,
    right_inverse,
    smith_invariants,
    smith_normal_form,
    spans_lattice,
    standard_basis_config,
    type_a_config,
)
from pyhtk.core.types import IntMatrix, VectorConfig
from pyhtk.runtime.hikita import unimodular_family


class TestNormalForms:
    """スミス標準形とエルミート標準形のテスト"""

    def test_smith_normal_form_diagonal(self):
        """U·M·V = D かつ不変因子が 2 | 6 | 12"""
        M = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
        U, D, V = smith_normal_form(M)
        assert U @ M @ V == D
        assert [D[i, i] for i in range(3)] == [2, 6, 12]
        assert abs(bareiss_determinant(U.entries)) == 1
        assert abs(bareiss_determinant(V.entries)) == 1

    def test_smith_invariants_of_rectangular(self):
        """横長の行列と零行列"""
        assert smith_invariants(IntMatrix.from_rows([[1, 1]])) == [1]
        assert smith_invariants(IntMatrix.from_rows([[2, 4]])) == [2]
        assert smith_invariants(IntMatrix.zeros(2, 3)) == []

    def test_smith_normal_form_when_pivot_divides(self):
        """ピボットが割り切る行と列が交互に現れても止まる"""
        for rows in ([[0, 1], [1, -1]], [[1, 0, 1], [0, 1, 1]], [[1, 2], [3, 4]]):
            M = IntMatrix.from_rows(rows)
            U, D, V = smith_normal_form(M)
            assert U @ M @ V == D
            assert abs(bareiss_determinant(U.entries)) == 1
            assert abs(bareiss_determinant(V.entries)) == 1
        assert smith_invariants(IntMatrix.from_rows([[0, 1], [1, -1]])) == [1, 1]
        assert smith_invariants(IntMatrix.from_rows([[1, 0, 1], [0, 1, 1]])) == [1, 1]
        assert smith_invariants(IntMatrix.from_rows([[1, 2], [3, 4]])) == [1, 2]

    def test_exgcd_keeps_dividing_pivot(self):
        M = exgcd(2, 6)
        assert M.tolist() == [[1, 0], [-3, 1]]
        for a, b in [(0, 1), (1, -1), (4, 6), (-3, 9), (5, 0)]:
            g, zero = (exgcd(a, b) @ np.array([a, b], dtype=object)).tolist()
            assert zero == 0
            assert abs(g) == math.gcd(a, b)

    def test_configuration_with_dividing_pivot(self):
        v = VectorConfig.from_vectors([(0, 1), (1, -1)])
        assert is_unimodular(v)
        assert gale_dual(VectorConfig.from_vectors([(1, 0), (0, 1), (1, 1)])).n == 3

    def test_bound_two_family_is_enumerated_quickly(self):
        start = time.perf_counter()
        family = unimodular_family(4, 2, 2)
        assert time.perf_counter() - start < 10
        assert len(family) == 106

    def test_spans_lattice(self):
        assert spans_lattice(IntMatrix.from_rows([[1, -1]]))
        assert not spans_lattice(IntMatrix.from_rows([[2]]))
        assert spans_lattice(IntMatrix.zeros(0, 3))

    def test_hermite_normal_form_reduces_above_pivot(self):
        """ピボットは正で、その上の成分は [0, pivot) に入る"""
        H = hermite_normal_form(IntMatrix.from_rows([[3, 1], [1, 1]]))
        assert H.to_lists() == [[1, 1], [0, 2]]

    def test_hermite_normal_form_drops_zero_rows(self):
        H = hermite_normal_form(IntMatrix.from_rows([[1, 2], [2, 4]]))
        assert H.to_lists() == [[1, 2]]

    def test_bareiss_determinant(self):
        assert bareiss_determinant([[2, 0], [1, 3]]) == 6
        assert bareiss_determinant([[0, 1], [1, 0]]) == -1
        assert bareiss_determinant([[1, 2], [2, 4]]) == 0
        assert bareiss_determinant([]) == 1

    def test_integer_rank(self):
        assert integer_rank([(1, 0), (0, 1), (1, 1)]) == 2
        assert integer_rank([(1, 2), (2, 4)]) == 1
        assert integer_rank([]) == 0


class TestExactSequence:
    """短完全列とゲール双対のテスト"""

    def test_kernel_basis_is_saturated(self):
        K = kernel_basis(IntMatrix.from_rows([[1, 1]]))
        assert K.to_lists() == [[1], [-1]]

    def test_kernel_of_injective_map_is_empty(self):
        K = kernel_basis(IntMatrix.identity(2))
        assert K.shape == (2, 0)

    def test_exact_sequence_composes_to_zero(self):
        """π∘ι = 0 と ι∨∘π∨ = 0"""
        seq = exact_sequence(cotangent_projective_config(3))
        assert (seq.n, seq.d, seq.k) == (3, 2, 1)
        assert (seq.pi @ seq.iota).is_zero()
        assert (seq.iota_vee @ seq.pi_vee).is_zero()

    def test_right_inverse(self):
        M = IntMatrix.from_rows([[1, 1, 0], [0, 1, 1]])
        R = right_inverse(M)
        assert M @ R == IntMatrix.identity(2)

    def test_right_inverse_requires_surjection(self):
        with pytest.raises(DegenerateConfig):
            right_inverse(IntMatrix.from_rows([[2]]))

    def test_gale_dual_of_tp1(self):
        """T*P^1 の u = {1, −1} の双対は v = {1, 1}"""
        v = gale_dual(cotangent_projective_config(2))
        assert v == VectorConfig(((1,), (1,)), 1)

    def test_gale_dual_of_standard_basis_is_empty(self):
        v = gale_dual(standard_basis_config(3))
        assert v.d == 0
        assert v.n == 3

    def test_gale_dual_rejects_coloop(self):
        """どの回路にも入らない u_2 は双対で零になる"""
        u = VectorConfig.from_vectors([(1, 0), (0, 1), (1, 0)])
        with pytest.raises(DegenerateConfig):
            gale_dual(u)

    def test_gale_involution_preserves_circuits(self):
        """v ↦ gale_dual(gale_dual(v)) はラベル付きの回路を保つ (n ≤ 6, d ≤ 3)"""
        family = unimodular_family(6, 3, 1)
        sample = family[:: max(1, len(family) // 80)] + [family[-1]]
        assert family[-1].n == 6 and family[-1].d == 3
        checked = set()
        for v in sample:
            try:
                twice = gale_dual(gale_dual(v))
            except DegenerateConfig:
                continue
            original = [(c.support, c.coefficients) for c in circuits(v)]
            again = [(c.support, c.coefficients) for c in circuits(twice)]
            assert original == again, v
            checked.add((v.n, v.d))
        assert len(checked) >= 5
        assert any(n == 6 for n, _ in checked)


class TestCircuits:
    """回路と分割のテスト"""

    def test_type_a_circuits(self):
        found = circuits(type_a_config(3))
        assert [c.support for c in found] == [(0, 1), (0, 2), (1, 2)]
        assert [c.coefficients for c in found] == [(1, -1, 0), (1, 0, -1), (0, 1, -1)]

    def test_circuits_are_in_lexicographic_order_of_support(self):
        """台の大きさではなく添字列の辞書式で並ぶ"""
        v = VectorConfig.from_vectors([(1, 0), (0, 1), (1, 1), (1, 0)])
        found = circuits(v)
        assert [c.support for c in found] == [(0, 1, 2), (0, 3), (1, 2, 3)]
        assert found[1].coefficients == (1, 0, 0, -1)

    def test_standard_basis_has_no_circuits(self):
        assert circuits(standard_basis_config(3)) == []

    def test_rank_zero_configuration_gives_loops(self):
        v = VectorConfig(((), ()), 0)
        found = circuits(v)
        assert [c.support for c in found] == [(0,), (1,)]

    def test_circuit_of_tp2(self):
        """T*P^2: u_1 + u_2 + u_3 = 0"""
        (c,) = circuits(cotangent_projective_config(3))
        assert c.support == (0, 1, 2)
        assert c.coefficients == (1, 1, 1)

    def test_circuit_splitting_follows_alpha(self):
        (c,) = circuits(type_a_config(2))
        split = circuit_splitting(c, default_alpha(2))
        assert split.positive == (0,)
        assert split.negative == (1,)
        flipped = circuit_splitting(c, [Fraction(1, 2), Fraction(1)])
        assert flipped.positive == (1,)
        assert flipped.negative == (0,)

    def test_circuit_splitting_rejects_non_generic_alpha(self):
        (c,) = circuits(type_a_config(2))
        with pytest.raises(NonGenericAlpha):
            circuit_splitting(c, [1, 1])

    def test_unimodularity(self):
        assert is_unimodular(type_a_config(4))
        assert is_unimodular(cotangent_projective_config(4))
        assert not is_unimodular(VectorConfig.from_vectors([(1, 0), (0, 1), (1, 2)]))

    def test_default_alpha(self):
        assert default_alpha(3) == (Fraction(1), Fraction(1, 2), Fraction(1, 4))

    def test_canonical_signs(self):
        u = canonical_signs(VectorConfig.from_vectors([(-1, 0), (0, 1), (1, 1)]))
        assert u.vectors == ((1, 0), (0, 1), (1, 1))
