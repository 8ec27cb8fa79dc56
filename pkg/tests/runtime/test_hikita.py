"""
Hikita 検証のテスト

回路イデアル、余不変イデアル、ħ = 0 特殊化の一致と、
ユニモジュラ配置の族に対する一括検証を確かめる。
"""

import os
import time

import pytest

from pyhtk.core.errors import VariableSetMismatch
from pyhtk.core.lattice import (
    cotangent_projective_config,
    gale_dual,
    is_unimodular,
    standard_basis_config,
    type_a_config,
)
from pyhtk.core.types import ThetaMonomialIdeal, VectorConfig
from pyhtk.runtime.hikita import (
    THREADS_ENV,
    circuit_ideal,
    coinvariant_ideal,
    hikita_sweep,
    hikita_verify,
    ideal_contains,
    ideal_equal,
    specialize_hbar_zero,
    unimodular_family,
    worker_count,
)

VERDICT_KEYS = {"circuit=coinvariant", "circuit=specialized", "coinvariant=specialized"}
FULL_SWEEP_ENV = "HTK_FULL_SWEEP"


class TestIdeals:
    """三つのイデアルの構成"""

    def test_circuit_ideal_of_type_a(self):
        ideal = circuit_ideal(type_a_config(3))
        assert ideal.generators == ((1, 1, 0), (1, 0, 1), (0, 1, 1))

    def test_coinvariant_ideal_of_tp1_dual(self):
        v = gale_dual(cotangent_projective_config(2))
        result = coinvariant_ideal(v, 2)
        assert result.ideal == ThetaMonomialIdeal(2, ((1, 1),))
        assert result.stable

    def test_coinvariant_radius_must_be_positive(self):
        with pytest.raises(ValueError):
            coinvariant_ideal(type_a_config(2), 0)

    def test_coinvariant_of_non_unimodular(self):
        """係数 2 の回路では |λ| が指数に現れる"""
        v = VectorConfig.from_vectors([(1, 0), (0, 1), (1, 2)])
        result = coinvariant_ideal(v, 3)
        assert result.ideal.generators == ((1, 2, 1),)

    def test_specialize_merges_shifted_variables(self):
        ell = ThetaMonomialIdeal(2, ((1, 0, 0, 1),), extended=True)
        assert specialize_hbar_zero(ell) == ThetaMonomialIdeal(2, ((1, 1),))

    def test_specialize_requires_extended_variables(self):
        with pytest.raises(VariableSetMismatch):
            specialize_hbar_zero(ThetaMonomialIdeal(2, ((1, 1),)))


class TestIdealEquality:
    """可除性の証明書"""

    def test_equal_ideals(self):
        left = ThetaMonomialIdeal(3, ((1, 1, 0), (0, 1, 1)))
        right = ThetaMonomialIdeal(3, ((0, 1, 1), (1, 1, 0), (1, 1, 1)))
        equal, certificates = ideal_equal(left, right)
        assert equal
        assert all(c.holds for c in certificates)

    def test_missing_generator_has_no_divisor(self):
        left = ThetaMonomialIdeal(2, ((1, 1),))
        right = ThetaMonomialIdeal(2, ((1, 2),))
        equal, certificates = ideal_equal(left, right)
        assert not equal
        failing = [c for c in certificates if not c.holds]
        assert [c.generator for c in failing] == [(1, 1)]

    def test_zero_ideals_are_equal(self):
        assert ideal_equal(ThetaMonomialIdeal(3), ThetaMonomialIdeal(3))[0]

    def test_variable_sets_must_agree(self):
        with pytest.raises(VariableSetMismatch):
            ideal_equal(ThetaMonomialIdeal(2), ThetaMonomialIdeal(3))
        with pytest.raises(VariableSetMismatch):
            ideal_equal(ThetaMonomialIdeal(2), ThetaMonomialIdeal(2, extended=True))


class TestHikitaVerify:
    """一つの配置に対する検証"""

    def test_tp1(self):
        v = gale_dual(cotangent_projective_config(2))
        report = hikita_verify(v)
        assert set(report.verdicts) == VERDICT_KEYS
        assert report.passed
        assert report.status == "PASS"
        assert report.in_hypotheses
        assert repr(report.circuit) == "(ϑ(x1)*ϑ(x2))"

    def test_certificates_for_every_generator(self):
        report = hikita_verify(type_a_config(3))
        for key in VERDICT_KEYS:
            assert len(report.certificates[key]) == 6
            assert all(c.holds for c in report.certificates[key])

    def test_standard_basis_gives_zero_ideals(self):
        report = hikita_verify(standard_basis_config(3))
        assert report.circuit.is_zero()
        assert report.coinvariant.ideal.is_zero()
        assert report.specialized.is_zero()
        assert report.passed

    def test_ell_grading(self):
        """ϑ(x_1)ϑ(ħ − x_2) の次数は e_0 + e_1 + e_2"""
        report = hikita_verify(type_a_config(2))
        assert report.ell_gradings() == [(1, 1, 1)]

    def test_non_unimodular_is_reported(self):
        v = VectorConfig.from_vectors([(1, 0), (0, 1), (1, 2)])
        report = hikita_verify(v)
        assert not report.in_hypotheses
        assert report.status == "FAIL"
        assert report.verdicts["circuit=specialized"]
        assert not report.verdicts["circuit=coinvariant"]

    def test_result_is_independent_of_alpha(self):
        v = cotangent_projective_config(4)
        first = hikita_verify(v, alpha_hat=[1, 2, 3, 5])
        second = hikita_verify(v, alpha_hat=[-5, -3, 2, 1])
        assert first.specialized == second.specialized
        assert first.ell != second.ell


class TestIdealRelations:
    """可除性による包含と等号の性質"""

    CONFIGS = [
        type_a_config(3),
        cotangent_projective_config(4),
        gale_dual(cotangent_projective_config(4)),
        VectorConfig.from_vectors([(1, 0), (0, 1), (1, 1), (1, 0)]),
        VectorConfig.from_vectors([(0, 1), (1, -1), (1, 0), (1, 0)]),
    ]

    @pytest.mark.parametrize("v", CONFIGS, ids=str)
    def test_circuit_ideal_is_contained_at_every_radius(self, v):
        circuit = circuit_ideal(v)
        for radius in range(1, v.n + 2):
            inside, certificates = ideal_contains(circuit, coinvariant_ideal(v, radius).ideal)
            assert inside, (radius, [c.generator for c in certificates if not c.holds])

    @pytest.mark.parametrize("v", CONFIGS, ids=str)
    def test_coinvariant_ideal_grows_with_radius(self, v):
        ideals = [coinvariant_ideal(v, r).ideal for r in range(1, v.n + 2)]
        for small, large in zip(ideals, ideals[1:]):
            assert ideal_contains(small, large)[0]

    def test_containment_fails_with_missing_divisor(self):
        inner = ThetaMonomialIdeal(2, ((1, 1),))
        outer = ThetaMonomialIdeal(2, ((2, 0),))
        inside, certificates = ideal_contains(inner, outer)
        assert not inside
        assert certificates[0].divisor is None

    def test_equality_is_an_equivalence(self):
        a = ThetaMonomialIdeal(3, ((1, 1, 0), (0, 1, 1)))
        b = ThetaMonomialIdeal(3, ((0, 1, 1), (1, 1, 0), (1, 1, 1)))
        c = ThetaMonomialIdeal(3, ((1, 1, 0), (0, 1, 1), (2, 1, 0)))
        other = ThetaMonomialIdeal(3, ((1, 0, 0),))
        ideals = [a, b, c, other]
        for x in ideals:
            assert ideal_equal(x, x)[0]
        for x in ideals:
            for y in ideals:
                assert ideal_equal(x, y)[0] == ideal_equal(y, x)[0]
                for z in ideals:
                    if ideal_equal(x, y)[0] and ideal_equal(y, z)[0]:
                        assert ideal_equal(x, z)[0]
        assert ideal_equal(a, b)[0] and ideal_equal(b, c)[0]
        assert not ideal_equal(a, other)[0]

    def test_equivalence_on_hikita_ideals(self):
        """同じ配置の三つのイデアルは互いに等しく、推移律が成り立つ"""
        for v in self.CONFIGS:
            report = hikita_verify(v)
            ideals = [report.circuit, report.coinvariant.ideal, report.specialized]
            for x in ideals:
                for y in ideals:
                    assert ideal_equal(x, y)[0]

    def test_containment_needs_same_variables(self):
        with pytest.raises(VariableSetMismatch):
            ideal_contains(ThetaMonomialIdeal(2, ((1, 0),)), ThetaMonomialIdeal(3, ((1, 0, 0),)))


class TestFamily:
    """ユニモジュラ配置の族"""

    def setup_method(self):
        self.frame = unimodular_family(4, 2, 2)

    def test_bound_two_frame_is_complete(self):
        """d=1 は (1) の重複 4 個、d=2 はユニモジュラな対 13 組と三つ組 6 組から 102 個"""
        assert len(self.frame) == 106
        assert all(is_unimodular(v) for v in self.frame)
        keys = [(v.n, v.d, v.vectors) for v in self.frame]
        assert keys == sorted(keys)
        assert len(set(keys)) == len(keys)
        vectors = {v.vectors for v in self.frame}
        assert ((0, 1), (1, -1)) in vectors
        assert ((0, 1), (1, 2)) in vectors
        assert ((1, -2), (2, -1)) not in vectors

    def test_members_pass_validation(self):
        for v in self.frame:
            assert VectorConfig.from_vectors(list(v.vectors)) == v

    def test_bound_two_frame_passes(self):
        reports = hikita_sweep(self.frame, threads=2)
        assert [r.config for r in reports] == self.frame
        failed = [r.config for r in reports if not r.passed]
        assert failed == []

    def test_limit_stops_enumeration(self):
        start = time.perf_counter()
        family = unimodular_family(6, 3, 2, limit=100)
        assert time.perf_counter() - start < 30
        assert len(family) == 100
        head = [v for v in family if v.d <= 2]
        assert head == [v for v in self.frame if v.n <= 3]
        assert family[-1].n == 3 and family[-1].d == 3

    def test_limit_is_a_prefix(self):
        family = unimodular_family(4, 2, 2, limit=40)
        assert family == self.frame[:40]

    def test_bound_one_prefix_passes(self):
        family = unimodular_family(6, 3, 1, limit=60)
        assert len(family) == 60
        reports = hikita_sweep(family, threads=2)
        assert all(r.passed for r in reports)

    @pytest.mark.skipif(
        not os.environ.get(FULL_SWEEP_ENV), reason=f"{FULL_SWEEP_ENV} を設定したときだけ実行"
    )
    def test_full_bound_two_family_passes(self):
        family = unimodular_family(6, 3, 2)
        reports = hikita_sweep(family)
        failed = [r.config for r in reports if not r.passed]
        assert failed == []

    def test_worker_count_from_environment(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV, "3")
        assert worker_count() == 3
        monkeypatch.setenv(THREADS_ENV, "many")
        assert worker_count() >= 1
