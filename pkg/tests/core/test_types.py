"""
基本データ型のテスト
"""

from fractions import Fraction

import pytest

from pyhtk.core.errors import DegenerateConfig, DimensionMismatch
from pyhtk.core.types import (
    Circuit,
    IntMatrix,
    ThetaMonomialIdeal,
    VectorConfig,
    is_primitive,
    minimal_generators,
)


class TestIntMatrix:
    """整数行列のテスト"""

    def setup_method(self):
        self.M = IntMatrix.from_rows([[1, 2, 3], [4, 5, 6]])

    def test_shape_and_access(self):
        assert self.M.shape == (2, 3)
        assert self.M[1, 2] == 6
        assert self.M.row(0) == (1, 2, 3)
        assert self.M.column(1) == (2, 5)

    def test_transpose(self):
        assert self.M.T.to_lists() == [[1, 4], [2, 5], [3, 6]]
        assert self.M.T.T == self.M

    def test_matmul_and_apply(self):
        product = self.M @ IntMatrix.identity(3)
        assert product == self.M
        assert self.M.apply([1, 0, -1]) == [-2, -2]

    def test_zero_column_matrix(self):
        """0 列の行列も形を保つ"""
        Z = IntMatrix.zeros(3, 0)
        assert Z.shape == (3, 0)
        assert Z.is_zero()
        assert Z.T.shape == (0, 3)

    def test_from_columns(self):
        M = IntMatrix.from_columns([(1, 4), (2, 5), (3, 6)], 2)
        assert M == self.M

    def test_ragged_rows_rejected(self):
        with pytest.raises(DimensionMismatch):
            IntMatrix(((1, 2), (3,)), 2, 2)


class TestVectorConfig:
    """ベクトル配置の検証"""

    def test_is_primitive(self):
        assert is_primitive((1, 2))
        assert is_primitive((-3, 5))
        assert not is_primitive((2, 4))
        assert not is_primitive((0, 0))

    def test_non_primitive_vector(self):
        with pytest.raises(DegenerateConfig):
            VectorConfig.from_vectors([(2,)])

    def test_must_span_lattice(self):
        """(1,0), (1,2) は指数 2 の部分格子しか張らない"""
        with pytest.raises(DegenerateConfig):
            VectorConfig.from_vectors([(1, 0), (1, 2)])

    def test_length_mismatch(self):
        with pytest.raises(DegenerateConfig):
            VectorConfig(((1, 0), (1,)), 2)

    def test_empty_requires_dimension(self):
        with pytest.raises(DegenerateConfig):
            VectorConfig.from_vectors([])

    def test_matrix_has_vectors_as_columns(self):
        cfg = VectorConfig.from_vectors([(1, 0), (0, 1), (1, 1)])
        assert cfg.n == 3
        assert cfg.matrix.to_lists() == [[1, 0, 1], [0, 1, 1]]


class TestCircuit:
    def test_sign_vector_and_pairing(self):
        c = Circuit(support=(0, 2), coefficients=(2, 0, -1))
        assert c.sign_vector() == (1, 0, -1)
        assert c.pairing([1, 5, Fraction(1, 3)]) == Fraction(2, 3)
        assert c.label() == "{1,3}"
        assert not c.is_split

    def test_pairing_length_checked(self):
        c = Circuit(support=(0, 1), coefficients=(1, -1))
        with pytest.raises(DimensionMismatch):
            c.pairing([1])

    def test_repr_of_split_circuit(self):
        c = Circuit(support=(0, 1), coefficients=(1, -1), positive=(0,), negative=(1,))
        assert repr(c) == "Circuit({1,2}, [1, -1], S+=[1], S-=[2])"


class TestThetaMonomialIdeal:
    """単項式イデアルの正準化"""

    def test_minimal_generators_drop_multiples(self):
        gens = minimal_generators([(1, 1), (1, 0), (2, 0), (0, 1)], 2)
        assert gens == ((1, 0), (0, 1))

    def test_minimal_generators_empty(self):
        assert minimal_generators([], 3) == ()

    def test_ideal_is_canonical(self):
        a = ThetaMonomialIdeal(2, ((0, 1), (1, 1), (1, 0)))
        b = ThetaMonomialIdeal(2, ((1, 0), (0, 1)))
        assert a == b

    def test_zero_ideal(self):
        ideal = ThetaMonomialIdeal(3)
        assert ideal.is_zero()
        assert repr(ideal) == "(0)"

    def test_format(self):
        ideal = ThetaMonomialIdeal(2, ((2, 1),))
        assert repr(ideal) == "(ϑ(x1)^2*ϑ(x2))"

    def test_extended_grading(self):
        """ϑ(ħ−x_i) は e_0 + e_i の次数を持つ"""
        ideal = ThetaMonomialIdeal(2, ((1, 0, 0, 1),), extended=True)
        assert ideal.width == 4
        assert ideal.variables[3] == "ϑ(ħ-x2)"
        assert ideal.grading((1, 0, 0, 1)) == (1, 1, 1)

    def test_wrong_width(self):
        with pytest.raises(DimensionMismatch):
            ThetaMonomialIdeal(2, ((1, 0, 0),))

    def test_negative_exponent(self):
        with pytest.raises(ValueError):
            ThetaMonomialIdeal(2, ((1, -1),))
