"""
レポート直列化のテスト
"""

import json
from fractions import Fraction

import numpy as np
import pytest

from pyhtk.core.elliptic import ModularParam, TorusPointE
from pyhtk.core.lattice import circuit_splitting, circuits, cotangent_projective_config, exact_sequence, type_a_config
from pyhtk.parser.report import (
    SCHEMA_VERSION,
    Report,
    circuit_to_dict,
    encode,
    hikita_to_dict,
    sequence_to_dict,
    table_rows,
)
from pyhtk.runtime.arrangements import Verdict
from pyhtk.runtime.hikita import hikita_verify


class TestEncode:
    """JSON への変換"""

    def setup_method(self):
        self.m = ModularParam(complex(0.3, 1.1))

    def test_scalars(self):
        assert encode(Fraction(3, 4)) == "3/4"
        assert encode(np.int64(5)) == 5
        assert encode(np.float64(0.25)) == 0.25
        assert encode(np.bool_(True)) is True
        assert encode(1 - 2j) == {"re": 1.0, "im": -2.0}
        assert encode(Verdict.ORBIFOLD) == "orbifold"

    def test_elliptic_points(self):
        p = TorusPointE.exact([("1/3", "1/5"), (0, 0)], self.m)
        assert encode(p) == [{"s": "1/3", "t": "1/5"}, {"s": "0", "t": "0"}]

    def test_nested(self):
        value = {1: (Fraction(1, 2), [np.int32(2)])}
        assert encode(value) == {"1": ["1/2", [2]]}

    def test_unknown_type(self):
        with pytest.raises(TypeError):
            encode(object())


class TestStructures:
    def test_sequence(self):
        data = sequence_to_dict(exact_sequence(cotangent_projective_config(2)))
        assert (data["n"], data["d"], data["k"]) == (2, 1, 1)
        assert data["iota"] == [[1], [1]]

    def test_circuit_is_one_based(self):
        (c,) = circuits(type_a_config(2))
        data = circuit_to_dict(circuit_splitting(c, [1, Fraction(1, 2)]))
        assert data == {
            "support": [1, 2],
            "coefficients": [1, -1],
            "positive": [1],
            "negative": [2],
        }

    def test_hikita_report(self):
        data = hikita_to_dict(hikita_verify(type_a_config(2)))
        assert data["status"] == "PASS"
        assert data["alpha_hat"] == ["1", "1/2"]
        assert data["ideals"]["circuit"]["display"] == "(ϑ(x1)*ϑ(x2))"
        assert data["ideals"]["ell"]["grading"] == [[1, 1, 1]]
        assert data["ideals"]["coinvariant"]["stable"] is True
        assert all(data["verdicts"].values())


class TestReport:
    """決定的な JSON 出力"""

    def setup_method(self):
        self.report = Report(
            command="analyze",
            results={"alpha": (Fraction(1), Fraction(1, 2)), "count": np.int64(2)},
            provenance={"seed": 42, "tau": complex(0.3, 1.1)},
        )

    def test_to_json_is_sorted_and_terminated(self):
        text = self.report.to_json()
        assert text.endswith("}\n")
        data = json.loads(text)
        assert data["schema_version"] == SCHEMA_VERSION
        assert list(data) == sorted(data)
        assert data["results"]["alpha"] == ["1", "1/2"]

    def test_round_trip(self):
        again = Report.from_json(self.report.to_json())
        assert again == self.report
        assert again.to_json() == self.report.to_json()

    def test_same_input_same_bytes(self):
        twin = Report(
            command="analyze",
            results={"count": 2, "alpha": [Fraction(1), Fraction(1, 2)]},
            provenance={"tau": complex(0.3, 1.1), "seed": 42},
        )
        assert twin.to_json() == self.report.to_json()


class TestTableRows:
    def test_alignment(self):
        rows = table_rows([["name", "value"], ["theta-zero", 0]])
        assert rows == ["name        value", "theta-zero  0"]

    def test_empty(self):
        assert table_rows([]) == []
