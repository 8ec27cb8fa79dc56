"""問題ファイル (TOML) の読み込み

alpha と beta はテーブルより前の最上位に書きます。

alpha = ["1", "1/2"]
beta = [["0", "0"], ["1/3", "1/5"]]

[configuration]
vectors = [[1], [-1]]
role = "v"

[tau]
re = "3/10"
im = "11/10"

[sweep]
configurations = [[[1], [-1]], [[1, 0], [0, 1], [1, 1]]]
family = { max_n = 5, max_d = 2, bound = 1 }

[options]
radius = 3
"""

import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from pyhtk.core.elliptic import DEFAULT_TRUNCATION, LATTICE_TOLERANCE, ModularParam, TorusPointE
from pyhtk.core.errors import ParseError
from pyhtk.core.lattice import default_alpha, gale_dual
from pyhtk.core.types import VectorConfig

logger = logging.getLogger(__name__)

DEFAULT_TAU = complex(0.3, 1.1)
ROLES = ("u", "v")


def parse_rational(value: Any, what: str = "値") -> Fraction:
    """整数、"p/q"、小数文字列、浮動小数点数を Fraction にする"""
    if isinstance(value, bool):
        raise ParseError(f"{what} に真偽値は使えません: {value!r}")
    try:
        if isinstance(value, float):
            return Fraction(str(value))
        if isinstance(value, (int, str)):
            return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"{what} を有理数として読めません: {value!r} ({e})") from e
    raise ParseError(f"{what} の型 {type(value).__name__} は使えません: {value!r}")


def _parse_matrix(rows: Any, what: str) -> Tuple[Tuple[int, ...], ...]:
    if not isinstance(rows, list):
        raise ParseError(f"{what} は行のリストでなければなりません")
    parsed = []
    for idx, row in enumerate(rows):
        if not isinstance(row, list) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in row
        ):
            raise ParseError(f"{what} の {idx + 1} 行目が整数のリストではありません: {row!r}")
        parsed.append(tuple(row))
    if len({len(r) for r in parsed}) > 1:
        raise ParseError(f"{what} の行の長さがそろっていません")
    return tuple(parsed)


@dataclass(frozen=True)
class Options:
    truncation: int = DEFAULT_TRUNCATION
    tolerance: float = LATTICE_TOLERANCE
    radius: Optional[int] = None
    seed: int = 42
    step: float = 1e-4
    samples: int = 100
    degree: int = 1

    def merged(self, **overrides) -> "Options":
        """None でない上書きだけを反映する"""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


@dataclass(frozen=True)
class ProblemSpec:
    vectors: Tuple[Tuple[int, ...], ...]
    role: str = "u"
    dimension: Optional[int] = None
    tau: complex = DEFAULT_TAU
    alpha: Optional[Tuple[Fraction, ...]] = None
    beta: Optional[Tuple[Tuple[Fraction, Fraction], ...]] = None
    sweep: Tuple[Tuple[Tuple[int, ...], ...], ...] = ()
    family: Optional[Dict[str, int]] = None
    options: Options = field(default_factory=Options)
    source: Optional[str] = None

    def config(self) -> VectorConfig:
        """ファイルに書かれた配置 (DegenerateConfig はそのまま送出)"""
        return VectorConfig.from_vectors(self.vectors, self.dimension)

    def u_config(self) -> VectorConfig:
        cfg = self.config()
        return cfg if self.role == "u" else gale_dual(cfg)

    def v_config(self) -> VectorConfig:
        cfg = self.config()
        return cfg if self.role == "v" else gale_dual(cfg)

    def modular(self) -> ModularParam:
        return ModularParam(self.tau)

    def alpha_or_default(self, n: int) -> Tuple[Fraction, ...]:
        return self.alpha if self.alpha is not None else default_alpha(n)

    def beta_point(self, length: int, m: ModularParam) -> TorusPointE:
        if self.beta is None:
            return TorusPointE.zero(length, m)
        return TorusPointE.exact(self.beta, m)

    def sweep_configs(self) -> List[VectorConfig]:
        return [VectorConfig.from_vectors(rows) for rows in self.sweep]

    def with_options(self, **overrides) -> "ProblemSpec":
        return replace(self, options=self.options.merged(**overrides))


def _parse_tau(table: Any) -> complex:
    if table is None:
        return DEFAULT_TAU
    if not isinstance(table, dict) or "im" not in table:
        raise ParseError("[tau] には re と im が必要です")
    re_part = float(parse_rational(table.get("re", 0), "tau.re"))
    im_part = float(parse_rational(table["im"], "tau.im"))
    if im_part <= 0:
        raise ParseError(f"Im τ > 0 が必要です: {im_part}")
    return complex(re_part, im_part)


def _parse_beta(values: Any) -> Tuple[Tuple[Fraction, Fraction], ...]:
    if not isinstance(values, list):
        raise ParseError("beta は [\"p/q\", \"r/s\"] の組のリストです")
    pairs = []
    for idx, pair in enumerate(values):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError(f"beta の {idx + 1} 番目が組になっていません: {pair!r}")
        pairs.append(
            (parse_rational(pair[0], f"beta[{idx}].s"), parse_rational(pair[1], f"beta[{idx}].t"))
        )
    return tuple(pairs)


def _parse_options(table: Any) -> Options:
    if table is None:
        return Options()
    if not isinstance(table, dict):
        raise ParseError("[options] はテーブルでなければなりません")
    known = {f for f in Options.__dataclass_fields__}
    unknown = set(table) - known
    if unknown:
        raise ParseError(f"未知のオプション: {sorted(unknown)}")
    try:
        return Options(
            truncation=int(table.get("truncation", DEFAULT_TRUNCATION)),
            tolerance=float(table.get("tolerance", LATTICE_TOLERANCE)),
            radius=int(table["radius"]) if "radius" in table else None,
            seed=int(table.get("seed", 42)),
            step=float(table.get("step", 1e-4)),
            samples=int(table.get("samples", 100)),
            degree=int(table.get("degree", 1)),
        )
    except (TypeError, ValueError) as e:
        raise ParseError(f"[options] の値が不正です: {e}") from e


FAMILY_KEYS = ("max_n", "max_d", "bound", "limit")


def _parse_sweep(table: Any):
    """[sweep] の configurations (行列のリスト) と family (列挙の範囲)"""
    if not isinstance(table, dict) or not ({"configurations", "family"} & set(table)):
        raise ParseError("[sweep] に configurations か family が必要です")
    sweep = tuple(
        _parse_matrix(m, f"sweep.configurations[{i}]")
        for i, m in enumerate(table.get("configurations", []))
    )
    family = table.get("family")
    if family is not None:
        if not isinstance(family, dict) or not {"max_n", "max_d", "bound"} <= set(family):
            raise ParseError("sweep.family には max_n, max_d, bound が必要です")
        unknown = set(family) - set(FAMILY_KEYS)
        if unknown:
            raise ParseError(f"sweep.family の未知のキー: {sorted(unknown)}")
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in family.values()):
            raise ParseError("sweep.family の値は整数です")
        family = dict(family)
    return sweep, family


def parse_spec(data: Dict[str, Any], source: Optional[str] = None) -> ProblemSpec:
    configuration = data.get("configuration")
    if not isinstance(configuration, dict) or "vectors" not in configuration:
        raise ParseError("[configuration] に vectors がありません")
    vectors = _parse_matrix(configuration["vectors"], "configuration.vectors")
    role = configuration.get("role", "u")
    if role not in ROLES:
        raise ParseError(f"role は u か v: {role!r}")
    dimension = configuration.get("dimension")
    if dimension is None and not vectors:
        raise ParseError("空の配置には configuration.dimension が必要です")

    alpha = data.get("alpha")
    if alpha is not None:
        if not isinstance(alpha, list):
            raise ParseError("alpha は有理数のリストです")
        alpha = tuple(parse_rational(a, f"alpha[{i}]") for i, a in enumerate(alpha))
    beta = data.get("beta")
    if beta is not None:
        beta = _parse_beta(beta)

    sweep, family = (), None
    if "sweep" in data:
        sweep, family = _parse_sweep(data["sweep"])

    spec = ProblemSpec(
        vectors=vectors,
        role=role,
        dimension=dimension,
        tau=_parse_tau(data.get("tau")),
        alpha=alpha,
        beta=beta,
        sweep=sweep,
        family=family,
        options=_parse_options(data.get("options")),
        source=source,
    )
    logger.debug(f"問題ファイルを読み込みました: {source} ({len(vectors)} 本のベクトル, role={role})")
    return spec


def loads_spec(text: str, source: Optional[str] = None) -> ProblemSpec:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ParseError(f"TOML として読めません: {e}") from e
    return parse_spec(data, source)


def load_spec(path: Union[str, Path]) -> ProblemSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"{path} を開けません: {e}") from e
    return loads_spec(text, str(path))


def format_rationals(values: Sequence[Fraction]) -> List[str]:
    return [str(Fraction(v)) for v in values]
