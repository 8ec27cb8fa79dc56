"""
問題ファイル読み込みのテスト
"""

from fractions import Fraction

import pytest

from pyhtk.core.errors import DegenerateConfig, ParseError
from pyhtk.core.types import VectorConfig
from pyhtk.parser.spec_loader import (
    DEFAULT_TAU,
    Options,
    format_rationals,
    load_spec,
    loads_spec,
    parse_rational,
)

TP1 = """
alpha = ["1", "1/2"]
beta = [["0", "0"], ["1/3", "1/5"]]

[configuration]
vectors = [[1], [-1]]
role = "u"

[tau]
re = "3/10"
im = "11/10"

[options]
seed = 7
samples = 20
"""


class TestParseRational:
    def test_forms(self):
        assert parse_rational(3) == Fraction(3)
        assert parse_rational("2/6") == Fraction(1, 3)
        assert parse_rational(" -1/4 ") == Fraction(-1, 4)
        assert parse_rational(0.5) == Fraction(1, 2)
        assert parse_rational("0.1") == Fraction(1, 10)

    def test_rejects_garbage(self):
        with pytest.raises(ParseError):
            parse_rational("one half")
        with pytest.raises(ParseError):
            parse_rational("1/0")
        with pytest.raises(ParseError):
            parse_rational(True)
        with pytest.raises(ParseError):
            parse_rational([1])


class TestLoadsSpec:
    """TOML の解釈"""

    def setup_method(self):
        self.spec = loads_spec(TP1, "tp1.toml")

    def test_configuration(self):
        assert self.spec.vectors == ((1,), (-1,))
        assert self.spec.role == "u"
        assert self.spec.u_config() == VectorConfig(((1,), (-1,)), 1)
        assert self.spec.v_config() == VectorConfig(((1,), (1,)), 1)

    def test_parameters(self):
        assert self.spec.alpha == (Fraction(1), Fraction(1, 2))
        assert self.spec.beta[1] == (Fraction(1, 3), Fraction(1, 5))
        assert self.spec.tau == complex(0.3, 1.1)
        assert self.spec.modular().im == pytest.approx(1.1)

    def test_options(self):
        assert self.spec.options.seed == 7
        assert self.spec.options.samples == 20
        assert self.spec.options.radius is None
        assert self.spec.source == "tp1.toml"

    def test_overrides_ignore_none(self):
        spec = self.spec.with_options(seed=None, radius=4)
        assert spec.options.seed == 7
        assert spec.options.radius == 4

    def test_defaults(self):
        spec = loads_spec("[configuration]\nvectors = [[1], [1]]\n")
        assert spec.tau == DEFAULT_TAU
        assert spec.alpha_or_default(2) == (Fraction(1), Fraction(1, 2))
        assert spec.beta_point(2, spec.modular()).is_zero()
        assert spec.options == Options()

    def test_role_v(self):
        spec = loads_spec('[configuration]\nvectors = [[1], [1]]\nrole = "v"\n')
        assert spec.u_config() == VectorConfig(((1,), (-1,)), 1)

    def test_empty_configuration_needs_dimension(self):
        with pytest.raises(ParseError):
            loads_spec("[configuration]\nvectors = []\n")
        spec = loads_spec("[configuration]\nvectors = []\ndimension = 0\n")
        assert spec.config().n == 0

    def test_degenerate_configuration_is_reported_lazily(self):
        spec = loads_spec("[configuration]\nvectors = [[2]]\n")
        with pytest.raises(DegenerateConfig):
            spec.config()


class TestParseErrors:
    """不正な入力は ParseError"""

    @pytest.mark.parametrize(
        "text",
        [
            "vectors = [[1]]",
            "[configuration]\nvectors = [[1], [1, 0]]\n",
            "[configuration]\nvectors = [[1.5]]\n",
            '[configuration]\nvectors = [[1]]\nrole = "w"\n',
            "[configuration]\nvectors = [[1]]\n[tau]\nre = 0\nim = 0\n",
            "[configuration]\nvectors = [[1]]\n[tau]\nre = 0\n",
            'beta = [["1/2"]]\n[configuration]\nvectors = [[1]]\n',
            'alpha = "1"\n[configuration]\nvectors = [[1]]\n',
            "[configuration]\nvectors = [[1]]\n[options]\ncolour = 1\n",
            '[configuration]\nvectors = [[1]]\n[options]\nseed = "x"\n',
            "[configuration]\nvectors = [[1]]\n[sweep]\nother = 1\n",
            "[configuration]\nvectors = [[1]]\n[sweep]\nfamily = { max_n = 3 }\n",
            "[configuration\nvectors = [[1]]\n",
        ],
    )
    def test_invalid(self, text):
        with pytest.raises(ParseError):
            loads_spec(text)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            load_spec(tmp_path / "missing.toml")


class TestSweep:
    def test_configurations_and_family(self):
        text = (
            '[configuration]\nvectors = [[1], [1]]\nrole = "v"\n'
            "[sweep]\nconfigurations = [[[1, 0], [0, 1], [1, 1]]]\n"
            "family = { max_n = 4, max_d = 2, bound = 1, limit = 10 }\n"
        )
        spec = loads_spec(text)
        assert spec.sweep_configs() == [VectorConfig(((1, 0), (0, 1), (1, 1)), 2)]
        assert spec.family == {"max_n": 4, "max_d": 2, "bound": 1, "limit": 10}


class TestSampleFiles:
    """同梱の問題ファイルが読めること"""

    def test_all_samples_load(self, spec_dir):
        files = sorted(spec_dir.glob("*.toml"))
        assert files
        for path in files:
            spec = load_spec(path)
            assert spec.config().n > 0

    def test_format_rationals(self):
        assert format_rationals([Fraction(1, 2), 3]) == ["1/2", "3"]
