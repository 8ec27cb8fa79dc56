"""整数線形代数

スミス標準形・エルミート標準形を用いて、ベクトル配置から短完全列、
ゲール双対、回路、ユニモジュラ性を計算します。すべて多倍長整数で厳密に行います。
"""

import logging
from functools import lru_cache
from fractions import Fraction
from math import gcd
from itertools import combinations
from typing import List, Sequence, Tuple

import numpy as np
import sympy

from .errors import DegenerateConfig, NonGenericAlpha
from .types import Circuit, ExactSequenceData, IntMatrix, IntVector, VectorConfig

logger = logging.getLogger(__name__)


def _to_array(M: IntMatrix) -> np.ndarray:
    arr = np.zeros((M.nrows, M.ncols), dtype=object)
    for i, row in enumerate(M.entries):
        for j, x in enumerate(row):
            arr[i, j] = int(x)
    return arr


def _from_array(arr: np.ndarray) -> IntMatrix:
    nrows, ncols = arr.shape
    return IntMatrix.from_rows(
        [[int(arr[i, j]) for j in range(ncols)] for i in range(nrows)], ncols=ncols
    )


def exgcd(a: int, b: int) -> np.ndarray:
    """行列式 1 の 2×2 整数行列 M で M @ [a, b] = [g, 0] (|g| = gcd(a, b)) となるものを返す

    a が b を割り切るときは a を変えない基本変形 [[1, 0], [-b//a, 1]]。
    それ以外では |g| < |a| となり、消去のたびにピボットが真に小さくなる。
    """
    if a != 0 and b % a == 0:
        return np.array([[1, 0], [-(b // a), 1]], dtype=object)
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    g = old_r
    if g < 0:
        g, old_x, old_y = -g, -old_x, -old_y
    if g == 0:
        return np.array([[1, 0], [0, 1]], dtype=object)
    return np.array([[old_x, old_y], [-b // g, a // g]], dtype=object)


def smith_normal_form(M: IntMatrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """U·M·V = D となるスミス標準形 (U, D, V) を返す

    D は対角で d_1 | d_2 | … かつ d_i ≥ 0、U と V はユニモジュラ。
    """
    D = _to_array(M)
    m, n = D.shape
    U = np.eye(m, dtype=object)
    V = np.eye(n, dtype=object)

    def clear_col(i: int) -> bool:
        if (D[i + 1 :, i] == 0).all():
            return False
        for j in range(i + 1, m):
            if D[j, i] == 0:
                continue
            E = exgcd(D[i, i], D[j, i])
            D[[i, j]] = E @ D[[i, j]]
            U[[i, j]] = E @ U[[i, j]]
        return True

    def clear_row(i: int) -> bool:
        if (D[i, i + 1 :] == 0).all():
            return False
        for j in range(i + 1, n):
            if D[i, j] == 0:
                continue
            E = exgcd(D[i, i], D[i, j]).T
            D[:, [i, j]] = D[:, [i, j]] @ E
            V[:, [i, j]] = V[:, [i, j]] @ E
        return True

    for i in range(min(m, n)):
        nonzero = np.argwhere(D[i:, i:] != 0)
        if len(nonzero) == 0:
            break
        r, c = (int(x) + i for x in nonzero[0])
        D[[i, r]] = D[[r, i]]
        U[[i, r]] = U[[r, i]]
        D[:, [i, c]] = D[:, [c, i]]
        V[:, [i, c]] = V[:, [c, i]]

        while True:
            clear_col(i)
            while clear_row(i) and clear_col(i):
                pass
            pivot = D[i, i]
            offending = [
                (j, k)
                for j in range(i + 1, m)
                for k in range(i + 1, n)
                if D[j, k] % pivot != 0
            ]
            if not offending:
                break
            # 割り切れない成分の行を加えて gcd を下げる
            j = offending[0][0]
            D[i] = D[i] + D[j]
            U[i] = U[i] + U[j]

        if D[i, i] < 0:
            D[i] = -D[i]
            U[i] = -U[i]

    return _from_array(U), _from_array(D), _from_array(V)


def smith_invariants(M: IntMatrix) -> List[int]:
    """非零の不変因子 d_1 | d_2 | …"""
    _, D, _ = smith_normal_form(M)
    return [D[i, i] for i in range(min(D.shape)) if D[i, i] != 0]


def spans_lattice(M: IntMatrix) -> bool:
    """列が Z^{rows} を張るか (不変因子がすべて 1 で階数が行数)"""
    if M.nrows == 0:
        return True
    inv = smith_invariants(M)
    return len(inv) == M.nrows and all(x == 1 for x in inv)


def hermite_normal_form(M: IntMatrix) -> IntMatrix:
    """行型エルミート標準形

    ピボットは正、ピボットの上の成分は [0, pivot) に簡約し、零行は落とす。
    """
    H = _to_array(M)
    m, n = H.shape
    r = 0
    for c in range(n):
        if r >= m:
            break
        for j in range(r + 1, m):
            if H[j, c] == 0:
                continue
            E = exgcd(H[r, c], H[j, c])
            H[[r, j]] = E @ H[[r, j]]
        if H[r, c] == 0:
            continue
        if H[r, c] < 0:
            H[r] = -H[r]
        pivot = H[r, c]
        for s in range(r):
            H[s] = H[s] - (H[s, c] // pivot) * H[r]
        r += 1
    return _from_array(H[:r]) if r else IntMatrix.zeros(0, n)


def kernel_basis(M: IntMatrix) -> IntMatrix:
    """飽和整数核の Z 基底を列に持つ行列 (HNF で正規化)"""
    _, D, V = smith_normal_form(M)
    rank = sum(1 for i in range(min(D.shape)) if D[i, i] != 0)
    n = M.ncols
    if rank == n:
        return IntMatrix.zeros(n, 0)
    kernel_rows = IntMatrix.from_rows(
        [V.column(j) for j in range(rank, n)], ncols=n
    )
    return hermite_normal_form(kernel_rows).transpose()


def right_inverse(M: IntMatrix) -> IntMatrix:
    """全射な格子写像 M (k×n) の整数切断 R (n×k) で M·R = I となるもの"""
    U, D, V = smith_normal_form(M)
    k, n = M.shape
    if any(D[i, i] != 1 for i in range(k)):
        raise DegenerateConfig(f"{M} は格子として全射ではありません")
    embed = IntMatrix.from_rows(
        [[1 if i == j else 0 for j in range(k)] for i in range(n)], ncols=k
    )
    return V @ embed @ U


def bareiss_determinant(rows: Sequence[Sequence[int]]) -> int:
    """分数を使わないガウス消去 (Bareiss) による行列式"""
    A = [list(map(int, row)) for row in rows]
    size = len(A)
    if size == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(size - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[-1][-1]


def integer_rank(vectors: Sequence[Sequence[int]]) -> int:
    """整数ベクトル族の有理数体上の階数"""
    if not vectors or not len(vectors[0]):
        return 0
    return sympy.Matrix([list(v) for v in vectors]).rank()


def exact_sequence(cfg: VectorConfig) -> ExactSequenceData:
    """π(e_i) = u_i による短完全列の行列データ"""
    pi = cfg.matrix
    iota = kernel_basis(pi)
    seq = ExactSequenceData(
        config=cfg, pi=pi, iota=iota, pi_vee=pi.transpose(), iota_vee=iota.transpose()
    )
    logger.debug(f"短完全列を構築: n={cfg.n}, d={cfg.d}, k={seq.k}")
    return seq


def gale_dual(cfg: VectorConfig) -> VectorConfig:
    """v_i = ι∨(e_i∨)、すなわち核基底行列の行"""
    iota = kernel_basis(cfg.matrix)
    k = iota.ncols
    rows = iota.entries
    if k > 0:
        for idx, row in enumerate(rows):
            if not any(row):
                raise DegenerateConfig(
                    f"u_{idx + 1} はどの回路にも含まれないため双対ベクトルが 0 になります"
                )
    return VectorConfig(tuple(rows), k)


def is_unimodular(cfg: VectorConfig) -> bool:
    """線形独立な d 部分集合の行列式がすべて ±1 か"""
    return _unimodular_cached(cfg.vectors, cfg.d)


@lru_cache(maxsize=1024)
def _unimodular_cached(vectors: Tuple[IntVector, ...], d: int) -> bool:
    if d == 0:
        return True
    for subset in combinations(vectors, d):
        det = bareiss_determinant(subset)
        if det not in (0, 1, -1):
            return False
    return True


def _primitive_null_vector(columns: Sequence[Sequence[int]]) -> IntVector:
    """階数が |S|−1 の列族の核を張る原始整数ベクトル"""
    A = sympy.Matrix([list(c) for c in columns]).T
    (null,) = A.nullspace()
    denominators = [sympy.fraction(x)[1] for x in null]
    scale = sympy.ilcm(*denominators) if denominators else 1
    ints = [int(x * scale) for x in null]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(int(x // g) for x in ints)


def circuits(cfg: VectorConfig) -> List[Circuit]:
    """すべての回路を正準順序 (台を昇順に並べた添字列の辞書式) で返す

    係数は最小添字が正になるよう符号を正規化する。
    """
    vecs = cfg.vectors
    n = cfg.n
    if cfg.d == 0:
        # Z^0 の零ベクトルはそれぞれ単独でループ
        return [
            Circuit(support=(i,), coefficients=tuple(int(i == j) for j in range(n)))
            for i in range(n)
        ]
    rank_all = integer_rank(vecs)
    found: List[Circuit] = []
    for size in range(1, rank_all + 2):
        for support in combinations(range(n), size):
            if any(set(c.support) <= set(support) for c in found):
                continue
            subset = [vecs[i] for i in support]
            if integer_rank(subset) != size - 1:
                continue
            null = _primitive_null_vector(subset)
            if any(x == 0 for x in null):
                continue
            if null[0] < 0:
                null = tuple(-x for x in null)
            coefficients = [0] * n
            for i, a in zip(support, null):
                coefficients[i] = a
            found.append(Circuit(support=support, coefficients=tuple(coefficients)))
    found.sort(key=lambda c: c.support)
    logger.debug(f"{len(found)} 個の回路を列挙しました")
    return found


def circuit_splitting(c: Circuit, alpha_hat: Sequence) -> Circuit:
    """⟨β_S, α̂⟩ > 0 となるよう大域符号を選び S = S⁺ ⊔ S⁻ を確定する"""
    pairing = c.pairing(alpha_hat)
    if pairing == 0:
        raise NonGenericAlpha(
            f"回路 {c.label()} に対して ⟨β_S, α̂⟩ = 0 です (α̂ = {list(map(str, alpha_hat))})"
        )
    coefficients = c.coefficients
    if pairing < 0:
        coefficients = tuple(-a for a in coefficients)
    positive = tuple(i for i in c.support if coefficients[i] > 0)
    negative = tuple(i for i in c.support if coefficients[i] < 0)
    return Circuit(
        support=c.support,
        coefficients=coefficients,
        positive=positive,
        negative=negative,
    )


def canonical_signs(cfg: VectorConfig) -> VectorConfig:
    """各ベクトルの最初の非零成分が正になるよう符号をそろえる"""
    flipped = []
    for v in cfg.vectors:
        lead = next((x for x in v if x != 0), 0)
        flipped.append(tuple(-x for x in v) if lead < 0 else v)
    return VectorConfig(tuple(flipped), cfg.d)


def type_a_config(n: int) -> VectorConfig:
    """u_1 = … = u_n = 1 ∈ Z^1 (A_{n−1} 型)"""
    return VectorConfig(tuple((1,) for _ in range(n)), 1)


def cotangent_projective_config(n: int) -> VectorConfig:
    """u_1..u_{n−1} が標準基底で u_n = −Σ u_i (T*P^{n−1} 型)"""
    d = n - 1
    basis = [tuple(1 if i == j else 0 for j in range(d)) for i in range(d)]
    return VectorConfig(tuple(basis) + (tuple(-1 for _ in range(d)),), d)


def standard_basis_config(n: int) -> VectorConfig:
    return VectorConfig(
        tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), n
    )


def default_alpha(n: int) -> Tuple[Fraction, ...]:
    """省略時の α̂ = (1, 1/2, 1/4, …)。どの符号付き部分和も 0 にならない"""
    return tuple(Fraction(1, 2**i) for i in range(n))
