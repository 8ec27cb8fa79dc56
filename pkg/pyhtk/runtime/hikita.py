"""楕円 Hikita 同型の検証

回路イデアル、A-余不変イデアル、Ell 表示の ħ = 0 特殊化の三つを
単項式イデアルとして構成し、可除性の証明書付きで比較します。
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from pyhtk.core.errors import VariableSetMismatch
from pyhtk.core.lattice import (
    bareiss_determinant,
    circuits,
    default_alpha,
    is_unimodular,
    kernel_basis,
)
from pyhtk.core.types import (
    IntMatrix,
    IntVector,
    ThetaMonomialIdeal,
    VectorConfig,
    is_primitive,
)
from pyhtk.runtime.branch_rings import ell_presentation

logger = logging.getLogger(__name__)

THREADS_ENV = "HTK_THREADS"


def circuit_ideal(v: VectorConfig) -> ThetaMonomialIdeal:
    """(∏_{i∈S} ϑ(x_i) | S は v の回路)"""
    generators = []
    for c in circuits(v):
        exponent = [0] * v.n
        for i in c.support:
            exponent[i] = 1
        generators.append(tuple(exponent))
    return ThetaMonomialIdeal(n=v.n, generators=tuple(generators))


@dataclass(frozen=True)
class CoinvariantIdeal:
    ideal: ThetaMonomialIdeal
    radius: int
    stable: bool


def _box_lattice_points(basis: IntMatrix, radius: int) -> np.ndarray:
    """Σ λ_i v_i = 0 かつ max|λ_i| ≤ radius となる非零 λ を行に並べる"""
    n, rank = basis.shape
    if rank == 0:
        return np.zeros((0, n), dtype=np.int64)
    B = np.array(basis.to_lists(), dtype=np.int64).reshape(n, rank)

    # λ の rank 個の座標で λ 全体が決まる。行列式の小さい座標を選ぶ
    best = None
    for rows in combinations(range(n), rank):
        det = bareiss_determinant([basis.row(i) for i in rows])
        if det and (best is None or abs(det) < abs(best[1])):
            best = (rows, det)
            if abs(det) == 1:
                break
    rows, det = best
    adjugate = sympy.Matrix([list(basis.row(i)) for i in rows]).adjugate()
    adj = np.array(adjugate.tolist(), dtype=np.int64)

    axis = np.arange(-radius, radius + 1, dtype=np.int64)
    grid = np.stack(np.meshgrid(*([axis] * rank), indexing="ij"), axis=0).reshape(rank, -1)
    numerators = adj @ grid
    integral = np.all(numerators % det == 0, axis=0)
    coords = numerators[:, integral] // det
    points = (B @ coords).T
    inside = np.all(np.abs(points) <= radius, axis=1) & np.any(points != 0, axis=1)
    return points[inside]


def coinvariant_ideal(v: VectorConfig, radius: int) -> CoinvariantIdeal:
    """(∏_i ϑ(x_i)^{|λ_i|} | 0 ≠ λ ∈ a∨_Z, max|λ_i| ≤ radius)

    δ(λ_i, −λ_i) = |λ_i| なので指数は |λ| そのもの。radius + 1 でも同じ極小生成系に
    なるかを stable に記録する。
    """
    if radius < 1:
        raise ValueError(f"半径は 1 以上: {radius}")
    basis = kernel_basis(v.matrix)

    def ideal_at(r: int) -> ThetaMonomialIdeal:
        points = _box_lattice_points(basis, r)
        return ThetaMonomialIdeal(n=v.n, generators=tuple(map(tuple, np.abs(points).tolist())))

    ideal = ideal_at(radius)
    stable = ideal.generators == ideal_at(radius + 1).generators
    if not stable:
        logger.info(f"余不変イデアルは半径 {radius} でまだ安定していません")
    return CoinvariantIdeal(ideal=ideal, radius=radius, stable=stable)


def specialize_hbar_zero(ideal: ThetaMonomialIdeal) -> ThetaMonomialIdeal:
    """ϑ(ħ − x_i) ↦ ϑ(x_i)。ϑ(−x) = −ϑ(x) の符号は単元なので捨てる"""
    if not ideal.extended:
        raise VariableSetMismatch("ħ = 0 への特殊化には ϑ(ħ−x_i) を含む変数集合が必要です")
    n = ideal.n
    merged = [
        tuple(a + b for a, b in zip(g[:n], g[n:])) for g in ideal.generators
    ]
    return ThetaMonomialIdeal(n=n, generators=tuple(merged))


@dataclass(frozen=True)
class Certificate:
    """generator を割る divisor (無ければ None)"""

    generator: IntVector
    divisor: Optional[IntVector]

    @property
    def holds(self) -> bool:
        return self.divisor is not None


def _divides(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _containment(source: ThetaMonomialIdeal, target: ThetaMonomialIdeal) -> List[Certificate]:
    found = []
    for g in source.generators:
        divisor = next((h for h in target.generators if _divides(h, g)), None)
        found.append(Certificate(generator=g, divisor=divisor))
    return found


def _require_same_variables(left: ThetaMonomialIdeal, right: ThetaMonomialIdeal):
    if left.n != right.n or left.extended != right.extended:
        raise VariableSetMismatch(
            f"変数集合が異なります: {left.variables} と {right.variables}"
        )


def ideal_contains(
    inner: ThetaMonomialIdeal, outer: ThetaMonomialIdeal
) -> Tuple[bool, List[Certificate]]:
    """inner ⊆ outer。inner の各生成元を割る outer の生成元を証明書にする"""
    _require_same_variables(inner, outer)
    certificates = _containment(inner, outer)
    return all(c.holds for c in certificates), certificates


def ideal_equal(
    left: ThetaMonomialIdeal, right: ThetaMonomialIdeal
) -> Tuple[bool, List[Certificate]]:
    """両方向の可除性を調べ、生成元ごとの証明書を返す"""
    _require_same_variables(left, right)
    certificates = _containment(left, right) + _containment(right, left)
    return all(c.holds for c in certificates), certificates


@dataclass
class HikitaReport:
    config: VectorConfig
    alpha_hat: Tuple[Fraction, ...]
    circuit: ThetaMonomialIdeal
    coinvariant: CoinvariantIdeal
    ell: ThetaMonomialIdeal
    specialized: ThetaMonomialIdeal
    unimodular: bool
    verdicts: Dict[str, bool] = field(default_factory=dict)
    certificates: Dict[str, List[Certificate]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    @property
    def in_hypotheses(self) -> bool:
        return self.unimodular

    def ell_gradings(self) -> List[IntVector]:
        return [self.ell.grading(g) for g in self.ell.generators]


def hikita_verify(
    v: VectorConfig,
    alpha_hat: Optional[Sequence] = None,
    radius: Optional[int] = None,
) -> HikitaReport:
    """三つのイデアルを構成し、対ごとの等号を判定する

    ユニモジュラでない v も受け付け、unimodular=False として報告する。
    """
    if alpha_hat is None:
        alpha_hat = default_alpha(v.n)
    alpha_hat = tuple(Fraction(a) for a in alpha_hat)
    if radius is None:
        radius = max(v.n, 1)

    unimodular = is_unimodular(v)
    if not unimodular:
        logger.warning(f"{v} はユニモジュラではありません。検証は仮定の外で実行します")

    circuit = circuit_ideal(v)
    coinvariant = coinvariant_ideal(v, radius)
    ell = ell_presentation(v, alpha_hat)
    specialized = specialize_hbar_zero(ell)

    report = HikitaReport(
        config=v,
        alpha_hat=alpha_hat,
        circuit=circuit,
        coinvariant=coinvariant,
        ell=ell,
        specialized=specialized,
        unimodular=unimodular,
    )
    named = {
        "circuit": circuit,
        "coinvariant": coinvariant.ideal,
        "specialized": specialized,
    }
    for (a, I), (b, J) in combinations(named.items(), 2):
        key = f"{a}={b}"
        report.verdicts[key], report.certificates[key] = ideal_equal(I, J)

    logger.info(f"Hikita 検証 {v}: {report.status}")
    return report


def _canonical_vectors(d: int, bound: int) -> List[IntVector]:
    found = []
    for vec in product(range(-bound, bound + 1), repeat=d):
        lead = next((x for x in vec if x != 0), 0)
        if lead > 0 and is_primitive(vec):
            found.append(vec)
    return sorted(found)


def _partial_unimodular(vectors: Sequence[IntVector], d: int) -> bool:
    """最後に加えたベクトルを含む d 部分集合だけを調べる"""
    if len(vectors) < d:
        return True
    *rest, last = vectors
    for subset in combinations(rest, d - 1):
        if bareiss_determinant(list(subset) + [last]) not in (0, 1, -1):
            return False
    return True


def unimodular_family(
    max_n: int, max_d: int, bound: int, limit: Optional[int] = None
) -> List[VectorConfig]:
    """原始的・全射・ユニモジュラな配置を (n, d, ベクトル列) の辞書式順で列挙する

    各ベクトルは最初の非零成分を正にそろえ、ラベルは辞書式に並べるので
    符号反転と並べ替えで同値なものは一度しか現れない。limit 個そろった時点で打ち切る。
    ユニモジュラな配置では階数 d と Z^d を張ることが同値なので、全射性は階数で判定する。
    """
    found: List[VectorConfig] = []

    def full() -> bool:
        return limit is not None and len(found) >= limit

    for n in range(1, max_n + 1):
        for d in range(1, min(n, max_d) + 1):
            candidates = _canonical_vectors(d, bound)

            def extend(chosen: List[IntVector], start: int):
                if full():
                    return
                if len(chosen) == n:
                    if np.linalg.matrix_rank(np.array(chosen, dtype=float)) == d:
                        found.append(VectorConfig(tuple(chosen), d, validate=False))
                    return
                for idx in range(start, len(candidates)):
                    chosen.append(candidates[idx])
                    if _partial_unimodular(chosen, d):
                        extend(chosen, idx)
                    chosen.pop()
                    if full():
                        return

            extend([], 0)
            if full():
                logger.debug(f"ユニモジュラ配置が上限 {limit} 個に達しました (n={n}, d={d})")
                return found
    logger.debug(f"ユニモジュラ配置を {len(found)} 個列挙しました")
    return found


def worker_count() -> int:
    value = os.environ.get(THREADS_ENV)
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            logger.warning(f"{THREADS_ENV}={value!r} を整数として読めません")
    return os.cpu_count() or 1


def hikita_sweep(
    configs: Sequence[VectorConfig],
    alpha_hat: Optional[Sequence] = None,
    radius: Optional[int] = None,
    threads: Optional[int] = None,
) -> List[HikitaReport]:
    """配置ごとに hikita_verify を並列実行する。結果は入力順"""
    threads = threads or worker_count()

    def run(v: VectorConfig) -> HikitaReport:
        alpha = alpha_hat if alpha_hat is not None and len(alpha_hat) == v.n else None
        return hikita_verify(v, alpha, radius)

    with ThreadPoolExecutor(max_workers=threads) as executor:
        reports = list(executor.map(run, configs))
    failed = [r for r in reports if not r.passed]
    logger.info(f"{len(reports)} 個の配置を検証、失敗 {len(failed)} 個")
    return reports
