"""微分幾何的な恒等式の数値検証

曲面 X_ϑ = {zw = ϑ(x)} 上で e-運動量写像の条件、Γ 作用の同変性、
ϑ の零点でのファイバーの退化を確かめ、加法的・乗法的・楕円的な
運動量写像の公式を評価します。すべての検査は種と許容誤差を結果に記録します。
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from pyhtk.core.elliptic import (
    DEFAULT_TRUNCATION,
    LATTICE_TOLERANCE,
    AutomorphyData,
    ModularParam,
    TorusPointE,
    automorphy_eval,
    cocycle_residual,
    gauge_factor,
    kernel_preimage,
    map_matrix,
    quasi_period_factor,
    reduce,
    relative_residual,
    theta,
    theta_derivative,
)
from pyhtk.core.errors import ChartFailure, DimensionMismatch, OffLocus
from pyhtk.core.lattice import right_inverse
from pyhtk.core.types import ExactSequenceData

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-4
CHART_RADIUS = 0.1
E_MOMENT_TOLERANCE = 1e-5
EQUIVARIANCE_TOLERANCE = 1e-9
NODAL_TOLERANCE = 1e-9

Lattice = Tuple[int, int]


@dataclass(frozen=True)
class SurfacePoint:
    """X̃_ϑ の点 (z, w, x)"""

    z: complex
    w: complex
    x: complex

    def residual(self, m: ModularParam, N: int = DEFAULT_TRUNCATION) -> float:
        return abs(self.z * self.w - theta(self.x, m, N))

    def as_array(self) -> np.ndarray:
        return np.array([self.z, self.w, self.x], dtype=complex)


@dataclass
class CheckResult:
    name: str
    residual: float
    tolerance: float
    passed: bool = field(init=False)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.residual = float(self.residual)
        self.passed = bool(self.residual < self.tolerance)


class FiberType(str, Enum):
    SMOOTH = "smooth_torus_fiber"
    NODAL = "nodal_fiber"


def _annulus_sample(rng: np.random.Generator, inner: float = 0.5, outer: float = 2.0) -> complex:
    # 面積について一様
    r = np.sqrt(rng.uniform(inner**2, outer**2))
    phase = rng.uniform(0.0, 2 * np.pi)
    return complex(r * np.exp(1j * phase))


def sample_surface(
    x: complex,
    m: ModularParam,
    seed: int = 0,
    branch: str = "z",
    N: int = DEFAULT_TRUNCATION,
) -> SurfacePoint:
    """z を円環 0.5 ≤ |z| ≤ 2 から引き w = ϑ(x)/z とする

    ϑ(x) = 0 のときは branch に応じて (z, 0, x) か (0, w, x) を返す。
    """
    rng = np.random.default_rng(seed)
    value = theta(x, m, N)
    sample = _annulus_sample(rng)
    if abs(value) < NODAL_TOLERANCE:
        if branch == "w":
            return SurfacePoint(0j, sample, complex(x))
        return SurfacePoint(sample, 0j, complex(x))
    return SurfacePoint(sample, value / sample, complex(x))


def fiber_type(x: complex, m: ModularParam, N: int = DEFAULT_TRUNCATION, tol: float = NODAL_TOLERANCE) -> FiberType:
    rep = reduce(x, m).rep
    if abs(theta(rep, m, N)) < tol:
        return FiberType.NODAL
    return FiberType.SMOOTH


def fiber_scan(m: ModularParam, grid: int = 41, N: int = DEFAULT_TRUNCATION) -> List[Tuple[float, float]]:
    """基本領域の grid×grid 格子点のうち節点ファイバーになるものの (s, t)"""
    axis = np.arange(grid) / grid
    s, t = np.meshgrid(axis, axis, indexing="ij")
    values = theta(s + t * m.tau, m, N)
    nodal = np.argwhere(np.abs(values) < NODAL_TOLERANCE)
    return [(float(axis[i]), float(axis[j])) for i, j in nodal]


# ---------------------------------------------------------------------------
# e-運動量写像
# ---------------------------------------------------------------------------


def _tangent_displacement(p: SurfacePoint, m: ModularParam, rng: np.random.Generator, N: int) -> np.ndarray:
    """zw − ϑ(x) の勾配 (w, z, −ϑ'(x)) に直交するよう射影した単位ベクトル"""
    gradient = np.array([p.w, p.z, -theta_derivative(p.x, m, N)], dtype=complex)
    delta = rng.normal(size=3) + 1j * rng.normal(size=3)
    norm = np.vdot(gradient, gradient).real
    if norm > 0:
        delta = delta - (gradient @ delta) / norm * np.conj(gradient)
    return delta / np.linalg.norm(delta)


def _chart(p: SurfacePoint) -> str:
    if abs(p.z) >= CHART_RADIUS:
        return "z"
    if abs(p.w) >= CHART_RADIUS:
        return "w"
    raise ChartFailure(f"|z| = {abs(p.z):.3e}, |w| = {abs(p.w):.3e} はどちらも小さすぎます")


def symplectic_form(p: SurfacePoint, first: np.ndarray, second: np.ndarray) -> complex:
    """ω を z ≠ 0 なら z^{-1}dz∧dx、w ≠ 0 なら −w^{-1}dw∧dx で評価する"""
    if _chart(p) == "z":
        return (first[0] * second[2] - first[2] * second[0]) / p.z
    return -(first[1] * second[2] - first[2] * second[1]) / p.w


def _flow(p: SurfacePoint, s: float, zeta: float) -> np.ndarray:
    """t·(z, w, x) = (tz, t^{-1}w, x) の t = exp(sζ)"""
    return np.array([p.z * np.exp(s * zeta), p.w * np.exp(-s * zeta), p.x], dtype=complex)


def e_moment_check(
    p: SurfacePoint,
    m: ModularParam,
    h: float = DEFAULT_STEP,
    zeta: float = 1.0,
    seed: int = 0,
    N: int = DEFAULT_TRUNCATION,
    tolerance: float = E_MOMENT_TOLERANCE,
) -> CheckResult:
    """ω(v_ζ, δ) と ζ·dx(δ) の差

    v_ζ は作用の流れの中心差分 (刻み h) で求めるので誤差は O(h²)。
    """
    chart = _chart(p)
    rng = np.random.default_rng(seed)
    delta = _tangent_displacement(p, m, rng, N)
    v = (_flow(p, h, zeta) - _flow(p, -h, zeta)) / (2 * h)
    lhs = symplectic_form(p, v, delta)
    rhs = zeta * delta[2]
    return CheckResult(
        name="e-moment",
        residual=abs(lhs - rhs),
        tolerance=tolerance,
        metadata={"point": (p.z, p.w, p.x), "step": h, "seed": seed, "chart": chart},
    )


def random_surface_points(
    m: ModularParam, samples: int, seed: int, N: int = DEFAULT_TRUNCATION
) -> List[SurfacePoint]:
    rng = np.random.default_rng(seed)
    points = []
    for k in range(samples):
        s, t = rng.uniform(0.0, 1.0, size=2)
        x = complex(s + t * m.tau)
        points.append(sample_surface(x, m, seed=seed + k, N=N))
    return points


def e_moment_sweep(
    m: ModularParam,
    samples: int = 100,
    h: float = DEFAULT_STEP,
    seed: int = 42,
    N: int = DEFAULT_TRUNCATION,
) -> List[CheckResult]:
    points = random_surface_points(m, samples, seed, N)
    return [e_moment_check(p, m, h, seed=seed + k, N=N) for k, p in enumerate(points)]


def e_moment_convergence(
    m: ModularParam,
    samples: int = 100,
    h: float = DEFAULT_STEP,
    seed: int = 42,
    N: int = DEFAULT_TRUNCATION,
) -> float:
    """刻みを半分にしたときの残差の中央値の比 (二次収束なら約 4)"""
    coarse = np.median([r.residual for r in e_moment_sweep(m, samples, h, seed, N)])
    fine = np.median([r.residual for r in e_moment_sweep(m, samples, h / 2, seed, N)])
    return float(coarse / fine)


# ---------------------------------------------------------------------------
# Γ 作用
# ---------------------------------------------------------------------------


def gamma_action(
    p: SurfacePoint,
    gamma: Lattice,
    m: ModularParam,
    factors: Optional[Tuple] = None,
) -> SurfacePoint:
    """γ·(z, w, x) = (e_1(γ,x) z, e_2(γ,x) w, x + γ)

    factors を省略すると e_1 = 1、e_2 は ϑ の準周期因子。
    """
    a, b = gamma
    shift = a + b * m.tau
    if factors is None:
        e1 = 1.0
        e2 = quasi_period_factor(gamma, p.x, m)
    else:
        e1 = factors[0](gamma, p.x, m)
        e2 = factors[1](gamma, p.x, m)
    return SurfacePoint(e1 * p.z, e2 * p.w, p.x + shift)


def _push_forward(p: SurfacePoint, delta: np.ndarray, gamma: Lattice, m: ModularParam) -> np.ndarray:
    """既定の作用の微分: dw' = α dw + w α'(x) dx、α' = −2πib α"""
    factor = quasi_period_factor(gamma, p.x, m)
    derivative = -2j * np.pi * gamma[1] * factor
    dz, dw, dx = delta
    return np.array([dz, factor * dw + p.w * derivative * dx, dx], dtype=complex)


def gamma_equivariance_check(
    p: SurfacePoint,
    gamma: Lattice,
    m: ModularParam,
    seed: int = 0,
    N: int = DEFAULT_TRUNCATION,
    tolerance: float = EQUIVARIANCE_TOLERANCE,
) -> CheckResult:
    """像が曲面上にあり、ω が保たれるか"""
    image = gamma_action(p, gamma, m)
    surface = relative_residual(image.z * image.w, theta(image.x, m, N))

    rng = np.random.default_rng(seed)
    first = _tangent_displacement(p, m, rng, N)
    second = _tangent_displacement(p, m, rng, N)
    before = symplectic_form(p, first, second)
    after = symplectic_form(
        image, _push_forward(p, first, gamma, m), _push_forward(p, second, gamma, m)
    )
    form = relative_residual(before, after)
    return CheckResult(
        name=f"gamma-equivariance{tuple(gamma)}",
        residual=max(surface, form),
        tolerance=tolerance,
        metadata={
            "point": (p.z, p.w, p.x),
            "gamma": tuple(gamma),
            "seed": seed,
            "surface_residual": surface,
            "form_residual": form,
        },
    )


def gamma_composition_check(
    p: SurfacePoint,
    gamma: Lattice,
    other: Lattice,
    m: ModularParam,
    tolerance: float = EQUIVARIANCE_TOLERANCE,
) -> CheckResult:
    """(γ + γ′)·p と γ·(γ′·p) の比較"""
    combined = gamma_action(p, (gamma[0] + other[0], gamma[1] + other[1]), m)
    sequential = gamma_action(gamma_action(p, other, m), gamma, m)
    residual = max(
        relative_residual(a, b) for a, b in zip(combined.as_array(), sequential.as_array())
    )
    return CheckResult(
        name=f"gamma-composition{tuple(gamma)}+{tuple(other)}",
        residual=residual,
        tolerance=tolerance,
        metadata={"point": (p.z, p.w, p.x), "gamma": tuple(gamma), "other": tuple(other)},
    )


# ---------------------------------------------------------------------------
# テータ関数の恒等式
# ---------------------------------------------------------------------------


def theta_identity_checks(
    m: ModularParam,
    samples: int = 100,
    seed: int = 42,
    N: int = DEFAULT_TRUNCATION,
    reach: int = 3,
) -> List[CheckResult]:
    """準周期性、奇関数性、ϑ(0) = 0、保型因子のコサイクル条件と規格化"""
    rng = np.random.default_rng(seed)
    xs = rng.uniform(0, 1, samples) + rng.uniform(0, 1, samples) * m.tau
    base = theta(xs, m, N)
    meta = {"seed": seed, "samples": samples, "truncation": N, "tau": m.tau}

    quasi = 0.0
    for a, b in product(range(-reach, reach + 1), repeat=2):
        shifted = theta(xs + a + b * m.tau, m, N)
        expected = quasi_period_factor((a, b), xs, m) * base
        quasi = max(quasi, max(relative_residual(l, r) for l, r in zip(shifted, expected)))

    odd = float(np.max(np.abs(theta(-xs, m, N) + base)))

    ad = AutomorphyData.for_theta(m)
    generators = [(1, 0), (0, 1), (1, 1), (-1, 2)]
    cocycle = max(
        cocycle_residual(ad, g1, g2, complex(x), m)
        for g1, g2 in product(generators, repeat=2)
        for x in xs[:10]
    )
    gauge = max(
        relative_residual(
            automorphy_eval(ad, g, x, m),
            quasi_period_factor(g, x, m) * gauge_factor(g, x, m),
        )
        for g in generators
        for x in xs[:10]
    )

    return [
        CheckResult("theta-quasi-periodicity", quasi, 1e-9, metadata=dict(meta, reach=reach)),
        CheckResult("theta-oddness", odd, 1e-10, metadata=dict(meta)),
        CheckResult("theta-zero", abs(theta(0.0, m, N)), 1e-12, metadata=dict(meta)),
        CheckResult("automorphy-cocycle", cocycle, 1e-9, metadata=dict(meta)),
        CheckResult("automorphy-gauge", gauge, 1e-9, metadata=dict(meta)),
    ]


# ---------------------------------------------------------------------------
# 運動量写像
# ---------------------------------------------------------------------------


class MomentFlavor(str, Enum):
    ADDITIVE_COMPLEX = "additive_complex"
    ADDITIVE_REAL = "additive_real"
    MULTIPLICATIVE = "multiplicative"
    ELLIPTIC_REAL = "elliptic_real"
    ELLIPTIC_CURVE_VALUED = "elliptic_curve_valued"


@dataclass(frozen=True)
class HypertoricPoint:
    """(z⃗, w⃗, x⃗)。加法的・乗法的フレーバーでは x は使わない"""

    z: Tuple[complex, ...]
    w: Tuple[complex, ...]
    x: Tuple[complex, ...] = ()

    @classmethod
    def of(cls, z: Sequence, w: Sequence, x: Sequence = ()) -> "HypertoricPoint":
        return cls(tuple(map(complex, z)), tuple(map(complex, w)), tuple(map(complex, x)))

    @classmethod
    def origin(cls, n: int) -> "HypertoricPoint":
        return cls.of([0] * n, [0] * n, [0] * n)


def _check_length(point: HypertoricPoint, seq: ExactSequenceData, need_x: bool):
    if len(point.z) != seq.n or len(point.w) != seq.n:
        raise DimensionMismatch(f"点の長さが n={seq.n} と一致しません")
    if need_x and len(point.x) != seq.n:
        raise DimensionMismatch(f"x⃗ の長さが n={seq.n} と一致しません")


def _damping(x: np.ndarray, m: ModularParam) -> np.ndarray:
    """exp(−2π (Im x)² / Im τ)"""
    return np.exp(-2 * np.pi * np.imag(x) ** 2 / m.im)


def moment_eval(
    flavor: Union[MomentFlavor, str],
    point: HypertoricPoint,
    seq: ExactSequenceData,
    m: Optional[ModularParam] = None,
):
    flavor = MomentFlavor(flavor)
    z = np.array(point.z, dtype=complex)
    w = np.array(point.w, dtype=complex)
    elliptic = flavor in (MomentFlavor.ELLIPTIC_REAL, MomentFlavor.ELLIPTIC_CURVE_VALUED)
    _check_length(point, seq, elliptic)

    if flavor == MomentFlavor.ADDITIVE_COMPLEX:
        return [complex(v) for v in seq.iota_vee.apply(list(z * w))]
    if flavor == MomentFlavor.ADDITIVE_REAL:
        values = 0.5 * (np.abs(z) ** 2 - np.abs(w) ** 2)
        return [float(v) for v in seq.iota_vee.apply(list(values))]
    if flavor == MomentFlavor.MULTIPLICATIVE:
        factors = 1 - z * w
        if np.any(np.abs(factors) == 0):
            bad = [i + 1 for i in np.flatnonzero(np.abs(factors) == 0)]
            raise OffLocus(f"1 − z_i w_i = 0 となる添字 {bad}")
        out = []
        for row in seq.iota_vee.entries:
            value = 1 + 0j
            for a, f in zip(row, factors):
                if a:
                    value *= complex(f) ** a
            out.append(value)
        return out

    if m is None:
        raise ValueError("楕円フレーバーには τ が必要です")
    x = np.array(point.x, dtype=complex)
    if flavor == MomentFlavor.ELLIPTIC_REAL:
        values = 0.5 * (np.abs(z) ** 2 - _damping(x, m) * np.abs(w) ** 2)
        return [float(v) for v in seq.iota_vee.apply(list(values))]
    return map_matrix(seq.iota_vee, TorusPointE.from_complex(x, m))


def _to_quotient(values: Sequence, seq: ExactSequenceData) -> list:
    values = list(values)
    if len(values) == seq.n and seq.n != seq.k:
        return seq.iota_vee.apply(values)
    if len(values) != seq.k:
        raise DimensionMismatch(f"水準の長さは n={seq.n} か k={seq.k}: {len(values)}")
    return values


def level_set_member(
    flavor: str,
    point: HypertoricPoint,
    seq: ExactSequenceData,
    alpha: Sequence,
    beta,
    m: Optional[ModularParam] = None,
    tol: float = LATTICE_TOLERANCE,
) -> bool:
    """実運動量写像が α、複素運動量写像が β に tol 以内で一致するか

    flavor は "additive"、"multiplicative"、"elliptic" のいずれか。
    """
    alpha = [float(a) for a in _to_quotient(alpha, seq)]
    if flavor == "elliptic":
        real = moment_eval(MomentFlavor.ELLIPTIC_REAL, point, seq, m)
        curve = moment_eval(MomentFlavor.ELLIPTIC_CURVE_VALUED, point, seq, m)
        if len(beta) == seq.n and seq.n != seq.k:
            beta = map_matrix(seq.iota_vee, beta)
        return bool(np.allclose(real, alpha, rtol=0, atol=tol)) and curve.is_close(beta, tol)
    if flavor == "additive":
        real = moment_eval(MomentFlavor.ADDITIVE_REAL, point, seq)
        holo = moment_eval(MomentFlavor.ADDITIVE_COMPLEX, point, seq)
        beta = [complex(b) for b in _to_quotient(beta, seq)]
    elif flavor == "multiplicative":
        real = moment_eval(MomentFlavor.ADDITIVE_REAL, point, seq)
        holo = moment_eval(MomentFlavor.MULTIPLICATIVE, point, seq)
        beta = [complex(b) for b in beta]
    else:
        raise ValueError(f"未知のフレーバー: {flavor}")
    return bool(
        np.allclose(real, alpha, rtol=0, atol=tol) and np.allclose(holo, beta, rtol=0, atol=tol)
    )


def construct_level_point(
    seq: ExactSequenceData,
    m: ModularParam,
    alpha: Sequence,
    beta: TorusPointE,
    seed: int = 0,
    N: int = DEFAULT_TRUNCATION,
) -> HypertoricPoint:
    """(μ_R, μ_{C,K})^{-1}(α, β) に入る X_ϑ^n の点を作る

    x⃗ は β の持ち上げに ψ∨(y) を足したもの、|z_i|² は
    |z|² − c|w|² = 2α̂_i (c = exp(−2π(Im x_i)²/Im τ)) の正の根。
    """
    rng = np.random.default_rng(seed)
    section = right_inverse(seq.iota_vee)
    alpha_hat = [float(a) for a in section.apply(list(alpha))]
    beta_hat = map_matrix(section, beta).reps()
    y = rng.uniform(-0.5, 0.5, seq.d) + 1j * rng.uniform(-0.3, 0.3, seq.d)
    offset = seq.pi_vee.apply(list(y))
    x = np.array(beta_hat, dtype=complex) + np.array(offset, dtype=complex)

    values = np.atleast_1d(theta(x, m, N)) if seq.n else np.zeros(0, dtype=complex)
    damping = _damping(x, m)
    z, w = [], []
    for a, th, c in zip(alpha_hat, values, damping):
        phase = np.exp(1j * rng.uniform(0, 2 * np.pi))
        r = a + np.sqrt(a * a + c * abs(th) ** 2)
        if r > 0:
            zi = np.sqrt(r) * phase
            z.append(zi)
            w.append(th / zi)
        else:
            # ϑ(x_i) = 0 かつ α̂_i ≤ 0
            z.append(0j)
            w.append(np.sqrt(-2 * a / c) * phase)
    return HypertoricPoint.of(z, w, x)


def a_moment_eval(
    point: HypertoricPoint,
    seq: ExactSequenceData,
    m: ModularParam,
    alpha_lift: Sequence,
    beta_lift: TorusPointE,
    tol: float = LATTICE_TOLERANCE,
) -> Tuple[List[float], TorusPointE]:
    """残余 A 作用の運動量写像

    実部分は ½(|z_i|² − c_i|w_i|²) − α̂_i を並べたもので、水準集合上では
    ι∨ で 0 に写る (a∨ = ker ι∨ に入る)。複素部分は (ψ∨_τ)^{-1}(x⃗ − β̂) ∈ E_τ^d。
    """
    _check_length(point, seq, True)
    z = np.abs(np.array(point.z)) ** 2
    w = np.abs(np.array(point.w)) ** 2
    x = np.array(point.x, dtype=complex)
    real = 0.5 * (z - _damping(x, m) * w) - np.array([float(a) for a in alpha_lift])
    curve = kernel_preimage(
        seq.pi_vee, TorusPointE.from_complex(x, m), beta_lift, tol
    )
    return [float(v) for v in real], curve
