"""実・楕円超平面配置

A_i = H_{R,i} × H_{τ,i} の組から単純性、滑らかさの三分法、
トーラス固定点と安定化部分群の次元を計算します。
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations, product
from typing import List, Optional, Sequence, Tuple, Union

import sympy

from pyhtk.core.elliptic import (
    LATTICE_TOLERANCE,
    EllipticPoint,
    InfiniteIntersection,
    ModularParam,
    TorusPointE,
    map_matrix,
    solve_on_torus,
)
from pyhtk.core.errors import DimensionMismatch, NotSimple
from pyhtk.core.lattice import (
    bareiss_determinant,
    exact_sequence,
    integer_rank,
    is_unimodular,
    right_inverse,
)
from pyhtk.core.types import ExactSequenceData, IntMatrix, IntVector, VectorConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RealHyperplane:
    """⟨a, u_i⟩ − α_i = 0"""

    normal: IntVector
    level: Fraction

    def contains(self, point: Sequence[Fraction]) -> bool:
        return sum(Fraction(u) * Fraction(a) for u, a in zip(self.normal, point)) == self.level


@dataclass(frozen=True, eq=False)
class EllipticHyperplane:
    """b_i = β_i (E_τ^d ⊂ E_τ^n の中で)"""

    index: int
    level: EllipticPoint


@dataclass(frozen=True, eq=False)
class CombinedArrangement:
    pairs: Tuple[Tuple[RealHyperplane, EllipticHyperplane], ...]
    sequence: ExactSequenceData
    alpha: Tuple[Fraction, ...]  # k∨ での値
    beta: TorusPointE  # E_τ^k での値
    alpha_lift: Tuple[Fraction, ...]
    beta_lift: TorusPointE
    m: ModularParam

    @property
    def config(self) -> VectorConfig:
        return self.sequence.config

    @property
    def n(self) -> int:
        return self.sequence.n

    @property
    def d(self) -> int:
        return self.sequence.d

    def normals(self, subset: Sequence[int]) -> List[IntVector]:
        return [self.config.vectors[i] for i in subset]


class Verdict(str, Enum):
    SMOOTH = "smooth"
    ORBIFOLD = "orbifold"
    SINGULAR = "non-orbifold-singular"


@dataclass(frozen=True)
class SmoothnessReport:
    simple: bool
    unimodular: bool
    verdict: Verdict
    witnesses: Tuple[Tuple[int, ...], ...] = ()
    real_generic: bool = True


@dataclass(frozen=True, eq=False)
class FixedPoint:
    real: Tuple[Fraction, ...]
    elliptic: TorusPointE
    subset: Tuple[int, ...]

    @property
    def point(self) -> Tuple[Tuple[Fraction, ...], TorusPointE]:
        return (self.real, self.elliptic)


@dataclass(frozen=True)
class RealIntersection:
    consistent: bool
    dimension: int = 0
    point: Optional[Tuple[Fraction, ...]] = None


def _lift_rational(
    values: Sequence, seq: ExactSequenceData
) -> Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]:
    """(k∨ の値, t∨ への持ち上げ) を返す。長さ n なら持ち上げとみなす"""
    values = tuple(Fraction(v) for v in values)
    if len(values) == seq.n:
        return tuple(Fraction(x) for x in seq.iota_vee.apply(values)), values
    if len(values) == seq.k:
        section = right_inverse(seq.iota_vee)
        return values, tuple(Fraction(x) for x in section.apply(values))
    raise DimensionMismatch(f"α の長さは n={seq.n} か k={seq.k}: {len(values)}")


def _lift_elliptic(
    beta: TorusPointE, seq: ExactSequenceData
) -> Tuple[TorusPointE, TorusPointE]:
    if len(beta) == seq.n:
        return map_matrix(seq.iota_vee, beta), beta
    if len(beta) == seq.k:
        section = right_inverse(seq.iota_vee)
        return beta, map_matrix(section, beta)
    raise DimensionMismatch(f"β の長さは n={seq.n} か k={seq.k}: {len(beta)}")


def build_arrangement(
    cfg: VectorConfig,
    alpha: Sequence,
    beta: TorusPointE,
    m: ModularParam,
) -> CombinedArrangement:
    """α と β を固定された切断で t∨ と E_τ^n に持ち上げ、各 A_i を記録する"""
    seq = exact_sequence(cfg)
    alpha_q, alpha_lift = _lift_rational(alpha, seq)
    beta_q, beta_lift = _lift_elliptic(beta, seq)
    pairs = tuple(
        (
            RealHyperplane(normal=u, level=alpha_lift[i]),
            EllipticHyperplane(index=i, level=beta_lift[i]),
        )
        for i, u in enumerate(cfg.vectors)
    )
    logger.debug(f"配置を構築: n={cfg.n}, d={cfg.d}, α̂={[str(a) for a in alpha_lift]}")
    return CombinedArrangement(
        pairs=pairs,
        sequence=seq,
        alpha=alpha_q,
        beta=beta_q,
        alpha_lift=alpha_lift,
        beta_lift=beta_lift,
        m=m,
    )


def real_intersection(arr: CombinedArrangement, subset: Sequence[int]) -> RealIntersection:
    """{⟨a, u_i⟩ = α_i : i ∈ S} を有理数体上で厳密に解く"""
    d = arr.d
    if not subset:
        return RealIntersection(consistent=True, dimension=d)
    A = sympy.Matrix([list(u) for u in arr.normals(subset)])
    b = sympy.Matrix([sympy.Rational(arr.alpha_lift[i].numerator, arr.alpha_lift[i].denominator) for i in subset])
    rank = A.rank()
    if A.row_join(b).rank() != rank:
        return RealIntersection(consistent=False)
    if rank < d:
        return RealIntersection(consistent=True, dimension=d - rank)
    solution, _ = A.gauss_jordan_solve(b)
    point = tuple(Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in solution)
    return RealIntersection(consistent=True, dimension=0, point=point)


def elliptic_intersection(
    arr: CombinedArrangement, subset: Sequence[int], tol: float = LATTICE_TOLERANCE
) -> Union[List[TorusPointE], InfiniteIntersection]:
    """E_τ^d 内で {b_i = β_i : i ∈ S} の解をすべて返す"""
    subset = tuple(subset)
    A = IntMatrix.from_rows(arr.normals(subset), ncols=arr.d)
    rhs = TorusPointE([arr.beta_lift[i] for i in subset], arr.m)
    result = solve_on_torus(A, rhs, tol)
    if isinstance(result, InfiniteIntersection):
        return InfiniteIntersection(dimension=result.dimension, subset=subset)
    return result


def combined_nonempty(arr: CombinedArrangement, subset: Sequence[int]) -> bool:
    """実部分と楕円部分の両方が解を持つか"""
    if not real_intersection(arr, subset).consistent:
        return False
    result = elliptic_intersection(arr, subset)
    return isinstance(result, InfiniteIntersection) or len(result) > 0


def _minimal_subsets(n: int, predicate) -> List[Tuple[int, ...]]:
    found: List[Tuple[int, ...]] = []
    for size in range(1, n + 1):
        for subset in combinations(range(n), size):
            if any(set(w) <= set(subset) for w in found):
                continue
            if predicate(subset):
                found.append(subset)
    return found


def is_simple(arr: CombinedArrangement) -> Tuple[bool, List[Tuple[int, ...]]]:
    """交わりが空でない部分集合の法線がすべて線形独立か

    違反する極小部分集合を証拠として返す。
    """

    def violates(subset):
        if integer_rank(arr.normals(subset)) == len(subset):
            return False
        return combined_nonempty(arr, subset)

    witnesses = _minimal_subsets(arr.n, violates)
    return (not witnesses, witnesses)


def is_real_generic(arr: CombinedArrangement) -> bool:
    """従属な部分集合の実超平面が共通点を持たないか"""

    def violates(subset):
        if integer_rank(arr.normals(subset)) == len(subset):
            return False
        return real_intersection(arr, subset).consistent

    return not _minimal_subsets(arr.n, violates)


def smoothness_report(arr: CombinedArrangement) -> SmoothnessReport:
    simple, witnesses = is_simple(arr)
    unimodular = is_unimodular(arr.config)
    if simple and unimodular:
        verdict = Verdict.SMOOTH
    elif simple:
        verdict = Verdict.ORBIFOLD
    else:
        verdict = Verdict.SINGULAR
    logger.info(f"滑らかさの判定: {verdict.value} (simple={simple}, unimodular={unimodular})")
    return SmoothnessReport(
        simple=simple,
        unimodular=unimodular,
        verdict=verdict,
        witnesses=tuple(witnesses),
        real_generic=is_real_generic(arr),
    )


def fixed_points(arr: CombinedArrangement) -> List[FixedPoint]:
    """線形独立な d 個の A_i の交点をすべて列挙する"""
    simple, witnesses = is_simple(arr)
    if not simple:
        raise NotSimple(f"配置が単純ではありません: 証拠 {[[i + 1 for i in w] for w in witnesses]}")
    points: List[FixedPoint] = []
    for subset in combinations(range(arr.n), arr.d):
        if integer_rank(arr.normals(subset)) < arr.d:
            continue
        real = real_intersection(arr, subset)
        if not real.consistent or real.point is None:
            continue
        solutions = elliptic_intersection(arr, subset)
        if isinstance(solutions, InfiniteIntersection):
            continue
        for y in solutions:
            points.append(FixedPoint(real=real.point, elliptic=y, subset=subset))
    logger.debug(f"{len(points)} 個の固定点")
    return points


def _residues(inverse: List[List[Fraction]], rhs: Sequence, det: int) -> List[tuple]:
    """A·y ≡ rhs (mod Z^d) の解 y ∈ (R/Z)^d を A^{-1}(rhs + k), k ∈ [0, |det|)^d から集める"""
    exact = all(isinstance(x, Fraction) for x in rhs)
    found = {}
    for shift in product(range(abs(det)), repeat=len(rhs)):
        y = []
        for row in inverse:
            value = sum(c * (x + k) for c, x, k in zip(row, rhs, shift))
            if exact:
                y.append(value - math.floor(value))
            else:
                y.append(round(float(value) % 1.0, 9) % 1.0)
        found.setdefault(tuple(y), tuple(y))
    return list(found.values())


def brute_force_fixed_point_count(arr: CombinedArrangement) -> int:
    """スミス標準形を使わずに固定点を数える

    線形独立な d 部分集合ごとに、格子座標 (s, t) の各成分で A^{-1}(β + k) を
    総当たりし、実交点と合わせて全 A_i (i ∈ S) に乗るものを数える。
    """
    total = 0
    for subset in combinations(range(arr.n), arr.d):
        normals = arr.normals(subset)
        det = bareiss_determinant(normals)
        if det == 0:
            continue
        real = real_intersection(arr, subset)
        if not real.consistent or real.point is None:
            continue
        inverse = [
            [Fraction(int(x.p), int(x.q)) for x in row]
            for row in sympy.Matrix([list(u) for u in normals]).inv().tolist()
        ]
        levels = [arr.beta_lift[i] for i in subset]
        s_part = _residues(inverse, [p.s for p in levels], det)
        t_part = _residues(inverse, [p.t for p in levels], det)
        for s, t in product(s_part, t_part):
            y = TorusPointE([EllipticPoint(a, b, arr.m) for a, b in zip(s, t)], arr.m)
            if all(point_on(arr, i, (real.point, y)) for i in subset):
                total += 1
    return total


def point_on(arr: CombinedArrangement, index: int, point, tol: float = LATTICE_TOLERANCE) -> bool:
    real, y = point
    real_hyperplane, elliptic_hyperplane = arr.pairs[index]
    if not real_hyperplane.contains(real):
        return False
    row = IntMatrix.from_rows([real_hyperplane.normal], ncols=arr.d)
    image = map_matrix(row, y)[0]
    return image.is_close(elliptic_hyperplane.level, tol)


def stabilizer_dimension(arr: CombinedArrangement, point) -> int:
    """p ∈ A_i となる u_i が張る空間の階数"""
    containing = [i for i in range(arr.n) if point_on(arr, i, point)]
    if not containing:
        return 0
    return integer_rank(arr.normals(containing))
