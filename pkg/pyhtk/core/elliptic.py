"""楕円曲線 E_τ = C/⟨1, τ⟩ とその冪の算術

点の簡約、整数行列によるトーラス写像、ヤコビ・テータ関数の評価、
保型因子、直線束の切断の次元を扱います。
"""

import cmath
import logging
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, List, Sequence, Tuple, Union

import numpy as np

from .errors import (
    AmbiguousPreimage,
    DimensionMismatch,
    InvalidModularParam,
    NotInKernel,
    TruncationWarning,
)
from .types import IntMatrix

logger = logging.getLogger(__name__)

LATTICE_TOLERANCE = 1e-9
DEFAULT_TRUNCATION = 40
TRUNCATION_TOLERANCE = 1e-16
_SNAP = 1e-12

Coordinate = Union[Fraction, float]


@dataclass(frozen=True)
class ModularParam:
    """τ ∈ H と q = exp(2πiτ)"""

    tau: complex
    q: complex = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        tau = complex(self.tau)
        if not tau.imag > 0:
            raise InvalidModularParam(f"Im τ > 0 が必要です: τ = {tau}")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "q", cmath.exp(2j * math.pi * tau))

    @property
    def im(self) -> float:
        return self.tau.imag


def _fractional(x: Coordinate) -> Coordinate:
    if isinstance(x, Fraction):
        return x - math.floor(x)
    x = float(x)
    nearest = round(x)
    if abs(x - nearest) < _SNAP:
        return 0.0
    frac = x - math.floor(x)
    return 0.0 if frac >= 1.0 else frac


def _circular_gap(a: float, b: float) -> float:
    gap = abs(a - b) % 1.0
    return min(gap, 1.0 - gap)


class EllipticPoint:
    """E_τ の点。格子座標 (s, t) ∈ [0,1)² で rep = s + t·τ

    (s, t) が Fraction のときは厳密な有理点として扱う。
    """

    __slots__ = ("s", "t", "m")

    def __init__(self, s: Coordinate, t: Coordinate, m: ModularParam):
        self.s = _fractional(s)
        self.t = _fractional(t)
        self.m = m

    @classmethod
    def zero(cls, m: ModularParam) -> "EllipticPoint":
        return cls(Fraction(0), Fraction(0), m)

    @classmethod
    def exact(cls, s, t, m: ModularParam) -> "EllipticPoint":
        return cls(Fraction(s), Fraction(t), m)

    @property
    def is_exact(self) -> bool:
        return isinstance(self.s, Fraction) and isinstance(self.t, Fraction)

    @property
    def coords(self) -> Tuple[float, float]:
        return (float(self.s), float(self.t))

    @property
    def rep(self) -> complex:
        return float(self.s) + float(self.t) * self.m.tau

    def _combine(self, other: "EllipticPoint", sign: int) -> "EllipticPoint":
        if self.is_exact and other.is_exact:
            return EllipticPoint(self.s + sign * other.s, self.t + sign * other.t, self.m)
        return EllipticPoint(
            float(self.s) + sign * float(other.s),
            float(self.t) + sign * float(other.t),
            self.m,
        )

    def __add__(self, other: "EllipticPoint") -> "EllipticPoint":
        return self._combine(other, 1)

    def __sub__(self, other: "EllipticPoint") -> "EllipticPoint":
        return self._combine(other, -1)

    def __neg__(self) -> "EllipticPoint":
        return EllipticPoint(-self.s, -self.t, self.m)

    def __mul__(self, k: int) -> "EllipticPoint":
        k = int(k)
        return EllipticPoint(k * self.s, k * self.t, self.m)

    __rmul__ = __mul__

    def divisions(self, d: int) -> List["EllipticPoint"]:
        """d·y = self の d² 個の解。先頭は格子座標が [0,1/d)² に入るもの"""
        solutions = []
        for a, b in product(range(d), repeat=2):
            if self.is_exact:
                solutions.append(
                    EllipticPoint((self.s + a) / Fraction(d), (self.t + b) / Fraction(d), self.m)
                )
            else:
                solutions.append(
                    EllipticPoint((float(self.s) + a) / d, (float(self.t) + b) / d, self.m)
                )
        return solutions

    def is_close(self, other: "EllipticPoint", tol: float = LATTICE_TOLERANCE) -> bool:
        if self.is_exact and other.is_exact:
            return self.s == other.s and self.t == other.t
        return (
            _circular_gap(float(self.s), float(other.s)) < tol
            and _circular_gap(float(self.t), float(other.t)) < tol
        )

    def is_zero(self, tol: float = LATTICE_TOLERANCE) -> bool:
        return self.is_close(EllipticPoint.zero(self.m), tol)

    def __eq__(self, other):
        if not isinstance(other, EllipticPoint):
            return NotImplemented
        return self.is_close(other)

    __hash__ = None

    def to_pair(self) -> Tuple[str, str]:
        """(s, t) を文字列で返す (厳密点は "p/q")"""
        if self.is_exact:
            return (str(self.s), str(self.t))
        return (repr(float(self.s)), repr(float(self.t)))

    def __repr__(self):
        s, t = self.to_pair()
        return f"[{s} + {t}τ]"


class TorusPointE:
    """E_τ^m の点"""

    __slots__ = ("components", "m")

    def __init__(self, components: Iterable[EllipticPoint], m: ModularParam):
        self.components: Tuple[EllipticPoint, ...] = tuple(components)
        self.m = m

    @classmethod
    def zero(cls, length: int, m: ModularParam) -> "TorusPointE":
        return cls([EllipticPoint.zero(m) for _ in range(length)], m)

    @classmethod
    def from_complex(cls, values: Sequence[complex], m: ModularParam) -> "TorusPointE":
        return cls([reduce(complex(x), m) for x in values], m)

    @classmethod
    def exact(cls, pairs: Sequence[Tuple], m: ModularParam) -> "TorusPointE":
        return cls([EllipticPoint.exact(s, t, m) for s, t in pairs], m)

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self) -> Iterator[EllipticPoint]:
        return iter(self.components)

    def __getitem__(self, i: int) -> EllipticPoint:
        return self.components[i]

    def _check(self, other: "TorusPointE"):
        if len(self) != len(other):
            raise DimensionMismatch(f"E^{len(self)} と E^{len(other)} は演算できません")

    def __add__(self, other: "TorusPointE") -> "TorusPointE":
        self._check(other)
        return TorusPointE([a + b for a, b in zip(self, other)], self.m)

    def __sub__(self, other: "TorusPointE") -> "TorusPointE":
        self._check(other)
        return TorusPointE([a - b for a, b in zip(self, other)], self.m)

    def __neg__(self) -> "TorusPointE":
        return TorusPointE([-a for a in self], self.m)

    def reps(self) -> List[complex]:
        return [p.rep for p in self]

    @property
    def is_exact(self) -> bool:
        return all(p.is_exact for p in self)

    def is_close(self, other: "TorusPointE", tol: float = LATTICE_TOLERANCE) -> bool:
        self._check(other)
        return all(a.is_close(b, tol) for a, b in zip(self, other))

    def is_zero(self, tol: float = LATTICE_TOLERANCE) -> bool:
        return all(p.is_zero(tol) for p in self)

    def __eq__(self, other):
        if not isinstance(other, TorusPointE):
            return NotImplemented
        return len(self) == len(other) and self.is_close(other)

    __hash__ = None

    def __repr__(self):
        return "(" + ", ".join(repr(p) for p in self) + ")"


@dataclass(frozen=True)
class InfiniteIntersection:
    """解集合が正次元であることを表す構造化された値"""

    dimension: int
    subset: Tuple[int, ...] = ()


def reduce(x: complex, m: ModularParam) -> EllipticPoint:
    """格子座標が [0,1)² に入る代表元"""
    x = complex(x)
    t = x.imag / m.tau.imag
    s = x.real - t * m.tau.real
    return EllipticPoint(s, t, m)


def truncation_ok(m: ModularParam, N: int, tolerance: float = TRUNCATION_TOLERANCE) -> bool:
    return abs(m.q) ** N <= tolerance


def theta(x, m: ModularParam, N: int = DEFAULT_TRUNCATION, tolerance: float = TRUNCATION_TOLERANCE):
    """(t^{1/2} − t^{−1/2}) ∏_{k=1}^{N} (1 − q^k t)(1 − q^k t^{−1})

    t = exp(2πix)、t^{1/2} = exp(πix)。x は配列でもよい。
    """
    if N < 1:
        raise ValueError(f"打ち切り次数 N は 1 以上: N = {N}")
    if not truncation_ok(m, N, tolerance):
        message = f"|q|^N = {abs(m.q) ** N:.3e} が許容誤差 {tolerance:.1e} を超えます"
        logger.warning(message)
        warnings.warn(message, TruncationWarning, stacklevel=2)
    x = np.asarray(x, dtype=complex)
    half = np.exp(1j * np.pi * x)
    t = half * half
    qs = np.exp(2j * np.pi * m.tau * np.arange(1, N + 1))
    factors = (1 - np.multiply.outer(t, qs)) * (1 - np.multiply.outer(1 / t, qs))
    value = (half - 1 / half) * np.prod(factors, axis=-1)
    if value.ndim == 0:
        return complex(value)
    return value


def theta_derivative(x, m: ModularParam, N: int = DEFAULT_TRUNCATION, h: float = 1e-5):
    """中心差分による ϑ'(x)"""
    return (theta(np.asarray(x) + h, m, N) - theta(np.asarray(x) - h, m, N)) / (2 * h)


def _lattice_complex(gamma: Tuple[int, int], m: ModularParam) -> complex:
    a, b = gamma
    return a + b * m.tau


def quasi_period_factor(gamma: Tuple[int, int], x, m: ModularParam):
    """θ(x + a + bτ) = (−1)^{a+b} q^{−b²/2} t^{−b} θ(x)

    t^{1/2} = exp(πix) の分岐では θ(x+1) = −θ(x) なので a の符号も入る。
    """
    a, b = (int(g) for g in gamma)
    sign = -1 if (a + b) % 2 else 1
    x = np.asarray(x, dtype=complex)
    value = sign * np.exp(-1j * np.pi * m.tau * b * b) * np.exp(-2j * np.pi * b * x)
    if value.ndim == 0:
        return complex(value)
    return value


def gauge_factor(gamma: Tuple[int, int], x, m: ModularParam, degree: int = 1):
    """f(x+γ)/f(x)、f(x) = exp(kπx²/(2 Im τ))

    アペル・フンベルト型の因子と正則な準周期因子はこの余境界だけ異なる。
    """
    g = _lattice_complex(gamma, m)
    x = np.asarray(x, dtype=complex)
    value = np.exp(degree * np.pi * ((x + g) ** 2 - x * x) / (2 * m.im))
    if value.ndim == 0:
        return complex(value)
    return value


@dataclass(frozen=True)
class AutomorphyData:
    """エルミート形式 H(x,y) = k x ȳ / Im τ と半指標 χ の組"""

    degree: int
    shift: complex

    @classmethod
    def for_theta(cls, m: ModularParam) -> "AutomorphyData":
        """O(e) (次数 1) の因子。ずらし x_0 = (1+τ)/2"""
        return cls(1, (1 + m.tau) / 2)

    def hermitian(self, x: complex, y: complex, m: ModularParam) -> complex:
        return self.degree * x * np.conj(y) / m.im

    def imaginary_part(self, x: complex, y: complex, m: ModularParam) -> float:
        return float(np.imag(self.hermitian(x, y, m)))

    def character(self, gamma: Tuple[int, int], m: ModularParam) -> complex:
        # 次数 k のとき (−1)^{k·ab} が半指標の符号
        a, b = gamma
        sign = -1 if (self.degree * a * b) % 2 else 1
        g = _lattice_complex(gamma, m)
        return sign * cmath.exp(2j * math.pi * self.imaginary_part(self.shift, g, m))

    def twisted_law_residual(
        self, gamma: Tuple[int, int], other: Tuple[int, int], m: ModularParam
    ) -> float:
        combined = (gamma[0] + other[0], gamma[1] + other[1])
        g1 = _lattice_complex(gamma, m)
        g2 = _lattice_complex(other, m)
        lhs = self.character(combined, m)
        rhs = (
            self.character(gamma, m)
            * self.character(other, m)
            * cmath.exp(1j * math.pi * self.imaginary_part(g1, g2, m))
        )
        return abs(lhs - rhs)


def automorphy_eval(ad: AutomorphyData, gamma: Tuple[int, int], x, m: ModularParam):
    """e_{(H,χ)}(γ, x) = χ(γ) exp(πH(x,γ) + (π/2)H(γ,γ))"""
    g = _lattice_complex(gamma, m)
    x = np.asarray(x, dtype=complex)
    exponent = np.pi * ad.degree * x * np.conj(g) / m.im + (np.pi / 2) * ad.degree * abs(g) ** 2 / m.im
    value = ad.character(gamma, m) * np.exp(exponent)
    if value.ndim == 0:
        return complex(value)
    return value


def cocycle_residual(
    ad: AutomorphyData, gamma: Tuple[int, int], other: Tuple[int, int], x: complex, m: ModularParam
) -> float:
    """|e(γ+γ′, x) − e(γ, x+γ′)·e(γ′, x)| を相対値で"""
    combined = (gamma[0] + other[0], gamma[1] + other[1])
    lhs = automorphy_eval(ad, combined, x, m)
    rhs = automorphy_eval(ad, gamma, x + _lattice_complex(other, m), m) * automorphy_eval(
        ad, other, x, m
    )
    return relative_residual(lhs, rhs)


def relative_residual(lhs, rhs) -> float:
    """|lhs − rhs| / max(1, |lhs|, |rhs|)"""
    scale = max(1.0, abs(lhs), abs(rhs))
    return float(abs(lhs - rhs) / scale)


def section_dim(degree: int) -> int:
    """E_τ 上の次数 degree の直線束の大域切断の次元 (リーマン・ロッホ)"""
    if degree < 0:
        return 0
    if degree == 0:
        return 1
    return degree


def map_matrix(M: IntMatrix, p: TorusPointE) -> TorusPointE:
    """[Σ_j M_{1j} x_j, …, Σ_j M_{rj} x_j] を簡約して返す"""
    if M.ncols != len(p):
        raise DimensionMismatch(
            f"行列 {M.shape} は E^{len(p)} の点に作用できません"
        )
    out = []
    for row in M.entries:
        acc = EllipticPoint.zero(p.m)
        for a, point in zip(row, p):
            if a:
                acc = acc + a * point
        out.append(acc)
    return TorusPointE(out, p.m)


def solve_on_torus(
    A: IntMatrix, b: TorusPointE, tol: float = LATTICE_TOLERANCE
) -> Union[List[TorusPointE], InfiniteIntersection]:
    """E_τ 上の連立方程式 A·y = b をスミス標準形で解く

    解が有限なら全解 (ねじれ平行移動を含む) を返し、正次元なら
    InfiniteIntersection を返す。矛盾する場合は空リスト。
    """
    from .lattice import smith_normal_form

    if A.nrows != len(b):
        raise DimensionMismatch(f"方程式の数 {A.nrows} と右辺の長さ {len(b)} が異なります")
    U, D, V = smith_normal_form(A)
    c = map_matrix(U, b)
    invariants = [D[i, i] for i in range(min(D.shape)) if D[i, i] != 0]
    rank = len(invariants)
    for i in range(rank, A.nrows):
        if not c[i].is_zero(tol):
            return []
    unknowns = A.ncols
    if rank < unknowns:
        return InfiniteIntersection(dimension=unknowns - rank)
    per_coordinate = [c[i].divisions(d_i) for i, d_i in enumerate(invariants)]
    solutions = []
    for choice in product(*per_coordinate):
        solutions.append(map_matrix(V, TorusPointE(choice, b.m)))
    return solutions


def torsion_count(Psi: IntMatrix) -> int:
    """ψ∨_τ の核の位数 ∏ d_i²"""
    from .lattice import smith_invariants

    count = 1
    for d_i in smith_invariants(Psi):
        count *= d_i * d_i
    return count


def kernel_preimage(
    Psi: IntMatrix, p: TorusPointE, a0: TorusPointE, tol: float = LATTICE_TOLERANCE
) -> TorusPointE:
    """ψ∨_τ(y) = p − a0 を満たす y ∈ E_τ^d

    ねじれがある場合は格子座標が [0,1/d_i)² に入る解を返す。
    """
    from .lattice import smith_invariants

    if len(smith_invariants(Psi)) < Psi.ncols:
        raise AmbiguousPreimage(f"{Psi} は格子写像として単射ではありません")
    solutions = solve_on_torus(Psi, p - a0, tol)
    if not solutions:
        raise NotInKernel(f"{p - a0} は ψ∨_τ の像に入りません")
    count = torsion_count(Psi)
    if count > 1:
        logger.debug(f"逆像は {count} 個のねじれ平行移動を持ちます")
    return solutions[0]
