class HypertoricError(Exception):
    """pyhtk が送出する例外の基底クラス"""

    pass


class DegenerateConfig(HypertoricError):
    """ベクトル配置が原始的でない、または Z^d を張らない"""

    pass


class NonGenericAlpha(HypertoricError):
    """安定性パラメータ α̂ がある回路に対して ⟨β_S, α̂⟩ = 0 となる"""

    pass


class DimensionMismatch(HypertoricError):
    pass


class NotInKernel(HypertoricError):
    """点が ker φ∨_τ = im ψ∨_τ に入っていない"""

    pass


class AmbiguousPreimage(HypertoricError):
    pass


class NotSimple(HypertoricError):
    pass


class FlavorMismatch(HypertoricError):
    pass


class ConfigMismatch(HypertoricError):
    pass


class VariableSetMismatch(HypertoricError):
    pass


class NotUnimodular(HypertoricError):
    pass


class ChartFailure(HypertoricError):
    """z ≠ 0 と w ≠ 0 のどちらのチャートにも入らない点"""

    pass


class OffLocus(HypertoricError):
    """乗法的モーメント写像が定義されない点 (z_i w_i = 1)"""

    pass


class UnsupportedDimension(HypertoricError):
    pass


class ParseError(HypertoricError):
    pass


class OracleMismatch(HypertoricError):
    """δ 規則による積と不変単項式オラクルの結果が一致しない"""

    pass


class InvalidModularParam(HypertoricError):
    pass


class NotInLattice(HypertoricError):
    pass


class TruncationWarning(UserWarning):
    """テータ関数の積の打ち切りが許容誤差を超える可能性"""

    pass
