# pyhtk/core/types.py
from dataclasses import dataclass, field
from enum import Enum, auto
from fractions import Fraction
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import DegenerateConfig, DimensionMismatch

IntVector = Tuple[int, ...]


class Flavor(Enum):
    """座標環の種類"""

    ADDITIVE = auto()  # C[a∨] 係数 (y_1..y_d の多項式)
    MULTIPLICATIVE = auto()  # C[A∨] 係数 (s_1..s_d のローラン多項式)
    ELLIPTIC = auto()  # ϑ̄_1..ϑ̄_n の単項式部分代数


@dataclass(frozen=True)
class IntMatrix:
    """整数行列

    行数・列数を明示的に保持するので 0 列 (単射の核) も表現できる。
    """

    entries: Tuple[IntVector, ...]
    nrows: int
    ncols: int

    def __post_init__(self):
        if self.nrows < 0 or self.ncols < 0:
            raise DimensionMismatch(f"負の次元: {self.nrows}x{self.ncols}")
        if len(self.entries) != self.nrows:
            raise DimensionMismatch(
                f"行数が一致しません: {len(self.entries)} != {self.nrows}"
            )
        for row in self.entries:
            if len(row) != self.ncols:
                raise DimensionMismatch(
                    f"列数が一致しません: {len(row)} != {self.ncols}"
                )

    @classmethod
    def from_rows(
        cls, rows: Iterable[Sequence[int]], ncols: Optional[int] = None
    ) -> "IntMatrix":
        entries = tuple(tuple(int(x) for x in row) for row in rows)
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        return cls(entries, len(entries), ncols)

    @classmethod
    def from_columns(
        cls, columns: Iterable[Sequence[int]], nrows: int
    ) -> "IntMatrix":
        cols = [tuple(int(x) for x in c) for c in columns]
        rows = tuple(tuple(c[i] for c in cols) for i in range(nrows))
        return cls(rows, nrows, len(cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)], ncols=n
        )

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls.from_rows([[0] * ncols for _ in range(nrows)], ncols=ncols)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        return self.entries[i][j]

    def row(self, i: int) -> IntVector:
        return self.entries[i]

    def column(self, j: int) -> IntVector:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> List[IntVector]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [self.column(j) for j in range(self.ncols)], ncols=self.nrows
        )

    @property
    def T(self) -> "IntMatrix":
        return self.transpose()

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch(
                f"積が定義されません: {self.shape} @ {other.shape}"
            )
        other_cols = other.columns()
        return IntMatrix.from_rows(
            [
                [sum(a * b for a, b in zip(row, col)) for col in other_cols]
                for row in self.entries
            ],
            ncols=other.ncols,
        )

    def apply(self, vector: Sequence) -> list:
        """行列をベクトルに作用させる (係数は整数、ベクトルは任意の環)"""
        if len(vector) != self.ncols:
            raise DimensionMismatch(
                f"ベクトル長 {len(vector)} が列数 {self.ncols} と一致しません"
            )
        result = []
        for row in self.entries:
            acc = 0
            for a, x in zip(row, vector):
                if a:
                    acc = acc + a * x
            result.append(acc)
        return result

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def to_lists(self) -> List[List[int]]:
        return [list(row) for row in self.entries]

    def __repr__(self):
        return f"IntMatrix({self.to_lists()})"


def is_primitive(vector: Sequence[int]) -> bool:
    g = 0
    for x in vector:
        g = gcd(g, int(x))
    return g == 1


@dataclass(frozen=True)
class VectorConfig:
    """Z^d 内の原始的整数ベクトル u_1..u_n の配置"""

    vectors: Tuple[IntVector, ...]
    d: int
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        for idx, vec in enumerate(self.vectors):
            if len(vec) != self.d:
                raise DegenerateConfig(
                    f"ベクトル {idx + 1} の長さ {len(vec)} が次元 {self.d} と一致しません"
                )
        if not self.validate:
            return
        if self.d > 0:
            for idx, vec in enumerate(self.vectors):
                if not is_primitive(vec):
                    raise DegenerateConfig(
                        f"ベクトル u_{idx + 1} = {vec} は原始的ではありません"
                    )
        # 循環 import を避けるため遅延読み込み
        from .lattice import spans_lattice

        if not spans_lattice(self.matrix):
            raise DegenerateConfig(f"{list(self.vectors)} は Z^{self.d} を張りません")

    @classmethod
    def from_vectors(
        cls, vectors: Iterable[Sequence[int]], d: Optional[int] = None
    ) -> "VectorConfig":
        vecs = tuple(tuple(int(x) for x in v) for v in vectors)
        if d is None:
            if not vecs:
                raise DegenerateConfig("空の配置には次元を指定してください")
            d = len(vecs[0])
        return cls(vecs, d)

    @property
    def n(self) -> int:
        return len(self.vectors)

    @property
    def matrix(self) -> IntMatrix:
        """列が u_i の d×n 行列 π"""
        return IntMatrix.from_columns(self.vectors, self.d)

    def __repr__(self):
        return f"VectorConfig({[list(v) for v in self.vectors]}, d={self.d})"


@dataclass(frozen=True)
class ExactSequenceData:
    """0 → k_Z → t_Z → a_Z → 0 とその双対の行列データ"""

    config: VectorConfig
    pi: IntMatrix  # d×n
    iota: IntMatrix  # n×k
    pi_vee: IntMatrix  # n×d  (ψ∨ の行列)
    iota_vee: IntMatrix  # k×n  (φ∨ の行列)

    @property
    def n(self) -> int:
        return self.config.n

    @property
    def d(self) -> int:
        return self.config.d

    @property
    def k(self) -> int:
        return self.iota.ncols


@dataclass(frozen=True)
class Circuit:
    """極小従属集合と符号付き係数

    添字は内部的に 0 始まり。表示は 1 始まり。
    """

    support: Tuple[int, ...]
    coefficients: IntVector
    positive: Optional[Tuple[int, ...]] = None
    negative: Optional[Tuple[int, ...]] = None

    @property
    def is_split(self) -> bool:
        return self.positive is not None

    def sign_vector(self) -> IntVector:
        """β_S の座標 (係数の符号)"""
        return tuple((a > 0) - (a < 0) for a in self.coefficients)

    def pairing(self, alpha_hat: Sequence[Fraction]) -> Fraction:
        if len(alpha_hat) != len(self.coefficients):
            raise DimensionMismatch(
                f"α̂ の長さ {len(alpha_hat)} が n = {len(self.coefficients)} と一致しません"
            )
        return sum(
            (Fraction(s) * Fraction(a) for s, a in zip(self.sign_vector(), alpha_hat)),
            Fraction(0),
        )

    def label(self) -> str:
        return "{" + ",".join(str(i + 1) for i in self.support) + "}"

    def __repr__(self):
        base = f"Circuit({self.label()}, {list(self.coefficients)}"
        if self.is_split:
            plus = [i + 1 for i in self.positive]
            minus = [i + 1 for i in self.negative]
            return f"{base}, S+={plus}, S-={minus})"
        return base + ")"


def minimal_generators(
    generators: Iterable[Sequence[int]], width: int
) -> Tuple[IntVector, ...]:
    """可除性について極小な指数ベクトルだけを残す (正準順序)"""
    import numpy as np

    gens = [tuple(int(x) for x in g) for g in generators]
    if not gens:
        return ()
    arr = np.unique(np.asarray(gens, dtype=np.int64).reshape(-1, width), axis=0)
    # 単位イデアル以外の零ベクトルは持たない
    kept: List[IntVector] = []
    while len(arr):
        degrees = arr.sum(axis=1)
        order = np.lexsort(tuple(arr.T[::-1]) + (degrees,))
        smallest = arr[order[0]]
        kept.append(tuple(int(x) for x in smallest))
        divisible = np.all(arr >= smallest, axis=1)
        arr = arr[~divisible]
    return tuple(sorted(kept, key=lambda g: (sum(g), tuple(-x for x in g))))


@dataclass(frozen=True)
class ThetaMonomialIdeal:
    """テータ記号 ϑ(x_i) (拡張時は ϑ(ħ−x_i) も) の単項式イデアル

    生成元は指数ベクトルで、構築時に極小化・正準順序化される。
    """

    n: int
    generators: Tuple[IntVector, ...] = ()
    extended: bool = False

    def __post_init__(self):
        width = self.width
        for g in self.generators:
            if len(g) != width:
                raise DimensionMismatch(
                    f"指数ベクトル {g} の長さが {width} ではありません"
                )
            if any(x < 0 for x in g):
                raise ValueError(f"負の指数: {g}")
        object.__setattr__(
            self, "generators", minimal_generators(self.generators, width)
        )

    @property
    def width(self) -> int:
        return 2 * self.n if self.extended else self.n

    @property
    def variables(self) -> Tuple[str, ...]:
        base = tuple(f"ϑ(x{i + 1})" for i in range(self.n))
        if self.extended:
            base += tuple(f"ϑ(ħ-x{i + 1})" for i in range(self.n))
        return base

    def is_zero(self) -> bool:
        return not self.generators

    def grading(self, generator: Sequence[int]) -> IntVector:
        """Z^{n+1} (拡張時) または Z^n の次数

        ϑ(x_i) は e_i、ϑ(ħ−x_i) は e_0 + e_i の次数を持つ。
        """
        if not self.extended:
            return tuple(int(x) for x in generator)
        plain = generator[: self.n]
        shifted = generator[self.n :]
        return (int(sum(shifted)),) + tuple(
            int(a + b) for a, b in zip(plain, shifted)
        )

    def format_generator(self, generator: Sequence[int]) -> str:
        parts = []
        for name, e in zip(self.variables, generator):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def __repr__(self):
        if self.is_zero():
            return "(0)"
        return "(" + ", ".join(self.format_generator(g) for g in self.generators) + ")"
