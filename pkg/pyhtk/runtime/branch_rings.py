"""λ 次数付き座標環 ⊕ C r^λ

加法的 (C[a∨] 係数)、乗法的 (C[A∨] 係数)、楕円的 (ϑ̄_i の単項式) の三種類について、
δ 規則による積と、それとは独立な不変単項式オラクルを提供します。
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy.polys.domains import ZZ
from sympy.polys.rings import PolyElement, ring

from pyhtk.core.elliptic import DEFAULT_TRUNCATION, ModularParam, theta
from pyhtk.core.errors import (
    ConfigMismatch,
    FlavorMismatch,
    NotInLattice,
    NotUnimodular,
    OracleMismatch,
)
from pyhtk.core.lattice import circuit_splitting, circuits, hermite_normal_form, is_unimodular
from pyhtk.core.types import (
    Circuit,
    Flavor,
    IntMatrix,
    IntVector,
    ThetaMonomialIdeal,
    VectorConfig,
)

logger = logging.getLogger(__name__)


def delta(l: int, m: int) -> int:
    """異符号なら min(|ℓ|, |m|)、それ以外 (どちらかが 0 を含む) は 0"""
    if l * m >= 0:
        return 0
    return min(abs(l), abs(m))


# ---------------------------------------------------------------------------
# λ 格子
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LambdaIndex:
    """λ ∈ a∨_Z。t∨_Z での座標と HNF 基底での座標の両方を持つ"""

    ambient: IntVector
    coords: IntVector

    def __repr__(self):
        return f"λ{list(self.ambient)}"


class LambdaLattice:
    """a∨_Z = π∨(Z^d) ⊂ Z^n とその HNF 基底"""

    def __init__(self, cfg: VectorConfig):
        self.config = cfg
        self.basis: IntMatrix = hermite_normal_form(cfg.matrix)
        self.rank = self.basis.nrows
        self._pivots: List[int] = []
        for row in self.basis.entries:
            self._pivots.append(next(j for j, x in enumerate(row) if x != 0))

    def from_coords(self, coords: Sequence[int]) -> LambdaIndex:
        coords = tuple(int(c) for c in coords)
        ambient = [0] * self.config.n
        for c, row in zip(coords, self.basis.entries):
            if c:
                for j, x in enumerate(row):
                    ambient[j] += c * x
        return LambdaIndex(ambient=tuple(ambient), coords=coords)

    def index(self, ambient: Union[LambdaIndex, Sequence[int]]) -> LambdaIndex:
        if isinstance(ambient, LambdaIndex):
            return ambient
        ambient = tuple(int(x) for x in ambient)
        if len(ambient) != self.config.n:
            raise NotInLattice(f"λ の長さが n={self.config.n} と一致しません: {ambient}")
        residual = list(ambient)
        coords = []
        for row, p in zip(self.basis.entries, self._pivots):
            c, rem = divmod(residual[p], row[p])
            if rem:
                raise NotInLattice(f"{ambient} は a∨_Z に入りません")
            coords.append(c)
            for j, x in enumerate(row):
                residual[j] -= c * x
        if any(residual):
            raise NotInLattice(f"{ambient} は a∨_Z に入りません")
        return LambdaIndex(ambient=ambient, coords=tuple(coords))

    def zero(self) -> LambdaIndex:
        return LambdaIndex(ambient=(0,) * self.config.n, coords=(0,) * self.rank)


# ---------------------------------------------------------------------------
# 係数環
# ---------------------------------------------------------------------------


def _eval_terms(terms, values: Sequence[complex]) -> complex:
    total = 0j
    for monom, coeff in terms:
        value = complex(int(coeff))
        for v, e in zip(values, monom):
            if e:
                value *= v**e
        total += value
    return total


class LaurentPoly:
    """s^{shift}·poly の形のローラン多項式。poly はどの変数でも割り切れない"""

    __slots__ = ("poly", "shift")

    def __init__(self, poly: PolyElement, shift: Sequence[int]):
        shift = list(shift)
        if not poly:
            self.poly = poly
            self.shift: IntVector = tuple(0 for _ in shift)
            return
        monoms = poly.monoms()
        lows = [min(m[j] for m in monoms) for j in range(len(shift))]
        if any(lows):
            poly = poly.ring.from_dict(
                {tuple(e - low for e, low in zip(m, lows)): c for m, c in poly.terms()}
            )
        self.poly = poly
        self.shift = tuple(s + low for s, low in zip(shift, lows))

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        return LaurentPoly(
            self.poly * other.poly, [a + b for a, b in zip(self.shift, other.shift)]
        )

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not self.poly:
            return other
        if not other.poly:
            return self
        low = [min(a, b) for a, b in zip(self.shift, other.shift)]

        def raised(lp: "LaurentPoly") -> PolyElement:
            up = tuple(s - m for s, m in zip(lp.shift, low))
            return lp.poly.ring.from_dict(
                {tuple(e + u for e, u in zip(mon, up)): c for mon, c in lp.poly.terms()}
            )

        return LaurentPoly(raised(self) + raised(other), low)

    def __pow__(self, k: int) -> "LaurentPoly":
        return LaurentPoly(self.poly**k, [k * s for s in self.shift])

    def __bool__(self):
        return bool(self.poly)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.shift == other.shift and self.poly == other.poly

    __hash__ = None

    def terms(self):
        return [
            (tuple(e + s for e, s in zip(mon, self.shift)), c)
            for mon, c in self.poly.terms()
        ]

    def __repr__(self):
        if not self.poly:
            return "0"
        if not any(self.shift):
            return str(self.poly)
        factor = "*".join(
            f"s{j + 1}**{e}" if e != 1 else f"s{j + 1}"
            for j, e in enumerate(self.shift)
            if e
        )
        return f"{factor}*({self.poly})"


class CoefficientRing:
    """各フレーバーの係数環の共通インターフェース"""

    flavor: Flavor

    def __init__(self, cfg: VectorConfig):
        self.config = cfg

    def one(self):
        raise NotImplementedError

    def zero(self):
        raise NotImplementedError

    def central(self, i: int):
        """z_i w_i の像"""
        raise NotImplementedError

    def evaluate(self, coeff, base: Sequence[complex], m: Optional[ModularParam] = None) -> complex:
        raise NotImplementedError

    def central_value(self, i: int, base: Sequence[complex], m: Optional[ModularParam] = None) -> complex:
        return self.evaluate(self.central(i), base, m)


class AdditiveCoefficients(CoefficientRing):
    """Z[y_1..y_d]、ρ_+(ζ_i) = Σ_j u_ij y_j"""

    flavor = Flavor.ADDITIVE

    def __init__(self, cfg: VectorConfig):
        super().__init__(cfg)
        names = ",".join(f"y{j + 1}" for j in range(cfg.d))
        self.ring, *self.gens = ring(names, ZZ)
        self._central = [
            sum((u_j * y for u_j, y in zip(u, self.gens)), self.ring.zero) for u in cfg.vectors
        ]

    def one(self):
        return self.ring.one

    def zero(self):
        return self.ring.zero

    def central(self, i: int):
        return self._central[i]

    def evaluate(self, coeff, base, m=None) -> complex:
        return _eval_terms(coeff.terms(), base)


class MultiplicativeCoefficients(CoefficientRing):
    """Z[s_1^{±1}..s_d^{±1}]、ρ_×(1 − t_i) = 1 − ∏_j s_j^{u_ij}"""

    flavor = Flavor.MULTIPLICATIVE

    def __init__(self, cfg: VectorConfig):
        super().__init__(cfg)
        names = ",".join(f"s{j + 1}" for j in range(cfg.d))
        self.ring, *self.gens = ring(names, ZZ)
        self._central = []
        for u in cfg.vectors:
            neg = tuple(max(-x, 0) for x in u)
            pos = tuple(max(x, 0) for x in u)
            poly = self.ring.from_dict({neg: 1}) - self.ring.from_dict({pos: 1})
            self._central.append(LaurentPoly(poly, [-x for x in neg]))

    def one(self):
        return LaurentPoly(self.ring.one, [0] * self.config.d)

    def zero(self):
        return LaurentPoly(self.ring.zero, [0] * self.config.d)

    def central(self, i: int):
        return self._central[i]

    def evaluate(self, coeff, base, m=None) -> complex:
        return _eval_terms(coeff.terms(), base)


class EllipticCoefficients(CoefficientRing):
    """ϑ̄_1..ϑ̄_n の単項式部分代数。ϑ̄_i(y) = ϑ(Σ_j u_ij y_j)"""

    flavor = Flavor.ELLIPTIC

    def __init__(self, cfg: VectorConfig, truncation: int = DEFAULT_TRUNCATION):
        super().__init__(cfg)
        names = ",".join(f"th{i + 1}" for i in range(cfg.n))
        self.ring, *self.gens = ring(names, ZZ)
        self.truncation = truncation

    def one(self):
        return self.ring.one

    def zero(self):
        return self.ring.zero

    def central(self, i: int):
        return self.gens[i]

    def theta_values(self, base: Sequence[complex], m: ModularParam) -> List[complex]:
        arguments = [sum(u_j * y for u_j, y in zip(u, base)) for u in self.config.vectors]
        return [complex(v) for v in theta(arguments, m, self.truncation)] if arguments else []

    def evaluate(self, coeff, base, m=None) -> complex:
        if m is None:
            raise ValueError("楕円係数の数値評価には τ が必要です")
        return _eval_terms(coeff.terms(), self.theta_values(base, m))


_COEFFICIENT_RINGS = {
    Flavor.ADDITIVE: AdditiveCoefficients,
    Flavor.MULTIPLICATIVE: MultiplicativeCoefficients,
    Flavor.ELLIPTIC: EllipticCoefficients,
}


# ---------------------------------------------------------------------------
# 記号元と環
# ---------------------------------------------------------------------------


class SymbolElement:
    """有限和 Σ_λ f_λ r^λ。零係数は保持しない"""

    __slots__ = ("ring", "terms")

    def __init__(self, branch_ring: "CoulombBranchRing", terms: Dict[IntVector, object]):
        self.ring = branch_ring
        self.terms: Dict[IntVector, object] = {
            lam: c for lam, c in sorted(terms.items()) if c
        }

    @property
    def flavor(self) -> Flavor:
        return self.ring.flavor

    def indices(self) -> List[LambdaIndex]:
        return [self.ring.lattice.index(lam) for lam in self.terms]

    def coefficient(self, lam) -> object:
        lam = self.ring.lattice.index(lam).ambient
        return self.terms.get(lam, self.ring.coefficients.zero())

    def __mul__(self, other: "SymbolElement") -> "SymbolElement":
        return mul(self, other)

    def __add__(self, other: "SymbolElement") -> "SymbolElement":
        _check_compatible(self, other)
        merged = dict(self.terms)
        for lam, c in other.terms.items():
            merged[lam] = merged[lam] + c if lam in merged else c
        return SymbolElement(self.ring, merged)

    def __eq__(self, other):
        if not isinstance(other, SymbolElement):
            return NotImplemented
        if self.flavor != other.flavor or self.ring.config != other.ring.config:
            return False
        return self.terms == other.terms

    __hash__ = None

    def grading(self) -> Dict[IntVector, List[IntVector]]:
        """楕円フレーバーの Z^n 次数 (deg z_i = 0, deg w_i = e_i, deg ϑ̄_i = e_i)"""
        degrees: Dict[IntVector, List[IntVector]] = {}
        for lam, coeff in self.terms.items():
            w_part = [max(-x, 0) for x in lam]
            if self.flavor == Flavor.ELLIPTIC:
                degrees[lam] = sorted(
                    tuple(w + e for w, e in zip(w_part, monom)) for monom, _ in coeff.terms()
                )
            else:
                degrees[lam] = [tuple(w_part)]
        return degrees

    def is_homogeneous(self) -> bool:
        found = {deg for degs in self.grading().values() for deg in degs}
        return len(found) <= 1

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for lam, coeff in self.terms.items():
            label = "r^" + ("(" + ",".join(map(str, lam)) + ")")
            text = str(coeff)
            parts.append(label if text == "1" else f"({text})*{label}")
        return " + ".join(parts)


def _check_compatible(a: SymbolElement, b: SymbolElement):
    if a.flavor != b.flavor:
        raise FlavorMismatch(f"{a.flavor.name} と {b.flavor.name} は掛けられません")
    if a.ring.config != b.ring.config:
        raise ConfigMismatch(f"{a.ring.config} と {b.ring.config} は異なる配置です")


class CoulombBranchRing:
    """配置 u とフレーバーで決まる λ 次数付き代数"""

    def __init__(
        self,
        cfg: VectorConfig,
        flavor: Flavor,
        truncation: int = DEFAULT_TRUNCATION,
    ):
        self.config = cfg
        self.flavor = flavor
        self.lattice = LambdaLattice(cfg)
        if flavor == Flavor.ELLIPTIC:
            self.coefficients: CoefficientRing = EllipticCoefficients(cfg, truncation)
        else:
            self.coefficients = _COEFFICIENT_RINGS[flavor](cfg)
        self._powers: Dict[Tuple[int, int], object] = {}
        self._oracle_ring, *oracle_gens = ring(
            ",".join([f"z{i + 1}" for i in range(cfg.n)] + [f"w{i + 1}" for i in range(cfg.n)]),
            ZZ,
        )
        logger.debug(f"{flavor.name} 環を構築: n={cfg.n}, d={cfg.d}, 階数={self.lattice.rank}")

    def central_power(self, i: int, e: int):
        key = (i, e)
        if key not in self._powers:
            self._powers[key] = self.coefficients.central(i) ** e
        return self._powers[key]

    def r(self, lam, coeff=None) -> SymbolElement:
        index = self.lattice.index(lam)
        if coeff is None:
            coeff = self.coefficients.one()
        return SymbolElement(self, {index.ambient: coeff})

    def r_coords(self, coords: Sequence[int], coeff=None) -> SymbolElement:
        return self.r(self.lattice.from_coords(coords), coeff)

    def one(self) -> SymbolElement:
        return self.r(self.lattice.zero())

    def zero(self) -> SymbolElement:
        return SymbolElement(self, {})

    def scalar(self, coeff) -> SymbolElement:
        return self.r(self.lattice.zero(), coeff)

    def generators(self, degree_bound: int = 1) -> List[SymbolElement]:
        """HNF 基底座標の L1 ノルムが degree_bound 以下の非零 λ に対する r^λ"""
        found = []
        rank = self.lattice.rank
        for coords in product(range(-degree_bound, degree_bound + 1), repeat=rank):
            norm = sum(abs(c) for c in coords)
            if norm == 0 or norm > degree_bound:
                continue
            found.append(coords)
        found.sort(key=lambda c: (sum(abs(x) for x in c), [-x for x in c]))
        return [self.r_coords(c) for c in found]

    def multiplication_table(self, degree_bound: int = 1) -> List["TableEntry"]:
        """{r^0} ∪ 生成元 の非順序対の積。各項目をオラクルと照合する"""
        elements = [self.one()] + self.generators(degree_bound)
        table = []
        for a, b in combinations_with_replacement(elements, 2):
            product_ab = mul(a, b)
            oracle = monomial_oracle_mul(a, b)
            table.append(
                TableEntry(
                    left=next(iter(a.terms)),
                    right=next(iter(b.terms)),
                    product=product_ab,
                    oracle_agrees=product_ab == oracle,
                )
            )
        return table

    def evaluate(
        self,
        element: SymbolElement,
        base: Sequence[complex],
        z: Sequence[complex],
        m: Optional[ModularParam] = None,
    ) -> complex:
        """z_i w_i = (中心元の値) を満たす点で元を数値評価する"""
        centrals = [self.coefficients.central_value(i, base, m) for i in range(self.config.n)]
        w = [c / zi for c, zi in zip(centrals, z)]
        total = 0j
        for lam, coeff in element.terms.items():
            value = self.coefficients.evaluate(coeff, base, m)
            for i, x in enumerate(lam):
                if x > 0:
                    value *= z[i] ** x
                elif x < 0:
                    value *= w[i] ** (-x)
            total += value
        return total


@dataclass
class TableEntry:
    left: IntVector
    right: IntVector
    product: SymbolElement
    oracle_agrees: bool


def mul(a: SymbolElement, b: SymbolElement) -> SymbolElement:
    """r^λ·r^μ = r^{λ+μ}·∏_i c_i^{δ(λ_i, μ_i)} の双線形拡張"""
    _check_compatible(a, b)
    R = a.ring
    result: Dict[IntVector, object] = {}
    for lam, f in a.terms.items():
        for mu, g in b.terms.items():
            coeff = f * g
            for i, (x, y) in enumerate(zip(lam, mu)):
                e = delta(x, y)
                if e:
                    coeff = coeff * R.central_power(i, e)
            nu = tuple(x + y for x, y in zip(lam, mu))
            result[nu] = result[nu] + coeff if nu in result else coeff
    return SymbolElement(R, result)


def _invariant_monomial(R: CoulombBranchRing, lam: IntVector) -> PolyElement:
    exponents = tuple(max(x, 0) for x in lam) + tuple(max(-x, 0) for x in lam)
    return R._oracle_ring.from_dict({exponents: 1})


def monomial_oracle_mul(a: SymbolElement, b: SymbolElement) -> SymbolElement:
    """不変単項式 z^{max(λ,0)} w^{max(−λ,0)} として掛け、z_i w_i を中心元に置き換える"""
    _check_compatible(a, b)
    R = a.ring
    n = R.config.n
    result: Dict[IntVector, object] = {}
    for lam, f in a.terms.items():
        for mu, g in b.terms.items():
            monomial = _invariant_monomial(R, lam) * _invariant_monomial(R, mu)
            ((exponents, _),) = monomial.terms()
            z_exp, w_exp = exponents[:n], exponents[n:]
            coeff = f * g
            nu = []
            for i in range(n):
                pairs = min(z_exp[i], w_exp[i])
                if pairs:
                    coeff = coeff * R.coefficients.central(i) ** pairs
                nu.append((z_exp[i] - pairs) - (w_exp[i] - pairs))
            nu = tuple(nu)
            result[nu] = result[nu] + coeff if nu in result else coeff
    return SymbolElement(R, result)


def checked_mul(a: SymbolElement, b: SymbolElement) -> SymbolElement:
    product_ab = mul(a, b)
    if product_ab != monomial_oracle_mul(a, b):
        raise OracleMismatch(f"{a} * {b}: δ 規則とオラクルが一致しません")
    return product_ab


def elliptic_coordinate_ring(u: VectorConfig, truncation: int = DEFAULT_TRUNCATION) -> CoulombBranchRing:
    return CoulombBranchRing(u, Flavor.ELLIPTIC, truncation)


# ---------------------------------------------------------------------------
# 同変コホモロジーと楕円コホモロジーの表示
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RingPresentation:
    """C[ħ, x_1..x_n] / (回路ごとの生成元)"""

    variables: Tuple[str, ...]
    relations: Tuple[PolyElement, ...]
    circuits: Tuple[Circuit, ...]

    def format_relations(self) -> List[str]:
        return [str(r) for r in self.relations]


def split_circuits(v: VectorConfig, alpha_hat: Sequence) -> List[Circuit]:
    alpha_hat = [Fraction(a) for a in alpha_hat]
    if not is_unimodular(v):
        logger.warning(f"{v} はユニモジュラではありません (定理の仮定の外)")
    return [circuit_splitting(c, alpha_hat) for c in circuits(v)]


def presentation_Hbk(v: VectorConfig, alpha_hat: Sequence) -> RingPresentation:
    """∏_{i∈S⁺} x_i ∏_{i∈S⁻} (ħ − x_i) を回路ごとに並べる"""
    names = ["hbar"] + [f"x{i + 1}" for i in range(v.n)]
    R, hbar, *xs = ring(",".join(names), ZZ)
    split = split_circuits(v, alpha_hat)
    relations = []
    for c in split:
        generator = R.one
        for i in c.positive:
            generator *= xs[i]
        for i in c.negative:
            generator *= hbar - xs[i]
        relations.append(generator)
    return RingPresentation(variables=tuple(names), relations=tuple(relations), circuits=tuple(split))


def ell_presentation(v: VectorConfig, alpha_hat: Sequence) -> ThetaMonomialIdeal:
    """ϑ_S = ∏_{S⁺} ϑ(x_i) ∏_{S⁻} ϑ(ħ − x_i) を生成元とする拡張変数のイデアル"""
    n = v.n
    generators = []
    for c in split_circuits(v, alpha_hat):
        exponent = [0] * (2 * n)
        for i in c.positive:
            exponent[i] = 1
        for i in c.negative:
            exponent[n + i] = 1
        generators.append(tuple(exponent))
    return ThetaMonomialIdeal(n=n, generators=tuple(generators), extended=True)


def require_unimodular(v: VectorConfig) -> None:
    if not is_unimodular(v):
        raise NotUnimodular(f"{v} はユニモジュラではありません")


def random_lambda(R: CoulombBranchRing, rng, bound: int = 3) -> LambdaIndex:
    coords = rng.integers(-bound, bound + 1, size=R.lattice.rank)
    return R.lattice.from_coords([int(c) for c in coords])
