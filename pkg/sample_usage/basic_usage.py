#!/usr/bin/env python3
"""
pyhtk 基本使用例
配置の解析、座標環の積、Hikita 検証、数値検査を順に実行するサンプル
"""

from pathlib import Path

from pyhtk import (
    CoulombBranchRing,
    Flavor,
    ModularParam,
    TorusPointE,
    VectorConfig,
    build_arrangement,
    circuits,
    exact_sequence,
    fixed_points,
    gale_dual,
    hikita_verify,
    smoothness_report,
)
from pyhtk.core.lattice import cotangent_projective_config, type_a_config
from pyhtk.parser.spec_loader import load_spec
from pyhtk.runtime.geometry_checks import e_moment_sweep, theta_identity_checks

SPECS = Path(__file__).parent / "specs"


def lattice_example():
    """完全系列、Gale 双対、回路"""
    print("=== 完全系列と Gale 双対 ===")
    u = cotangent_projective_config(3)
    seq = exact_sequence(u)
    print(f"u = {u}")
    print(f"n={seq.n}, d={seq.d}, k={seq.k}")
    print(f"Gale 双対 v = {gale_dual(u)}")
    for c in circuits(u):
        print(f"  回路 {c.label()}: {c.coefficients}")
    print()


def arrangement_example():
    """A_2 の配置: 滑らかさの判定と固定点"""
    print("=== 超平面配置と固定点 ===")
    m = ModularParam(complex(0.3, 1.1))
    u = type_a_config(3)
    beta = TorusPointE.exact([(0, 0), ("1/3", "1/5"), ("2/3", "3/5")], m)
    arr = build_arrangement(u, [1, "1/2", "1/4"], beta, m)
    report = smoothness_report(arr)
    print(f"判定: {report.verdict.value}")
    for p in fixed_points(arr):
        print(f"  部分集合 {[i + 1 for i in p.subset]}: 実 {p.real}, 楕円 {p.elliptic}")
    print()


def ring_example():
    """A_1 で r^λ r^{-λ} が中心元の積になることを確かめる"""
    print("=== 座標環の積 ===")
    u = VectorConfig.from_vectors([[1], [1]])
    for flavor in Flavor:
        R = CoulombBranchRing(u, flavor)
        product = R.r((1, 1)) * R.r((-1, -1))
        print(f"{flavor.name:15s} r^(1,1) * r^(-1,-1) = {product}")
    print()


def hikita_example():
    """T*P^1 の双対側で三つのイデアルを比較する"""
    print("=== Hikita 検証 ===")
    spec = load_spec(SPECS / "tp1.toml")
    report = hikita_verify(spec.v_config())
    print(f"回路イデアル      : {report.circuit}")
    print(f"余不変イデアル    : {report.coinvariant.ideal}")
    print(f"ħ = 0 での Ell 表示: {report.specialized}")
    print(f"結果: {report.status}")
    print()


def numeric_example():
    print("=== テータ関数と e-運動量写像 ===")
    m = ModularParam(complex(0.3, 1.1))
    for check in theta_identity_checks(m, samples=20):
        print(f"  {check.name:25s} {check.residual:.2e} (< {check.tolerance:.0e}) {check.passed}")
    worst = max(r.residual for r in e_moment_sweep(m, samples=20))
    print(f"  e-moment 最大残差 {worst:.2e}")
    print()


def main():
    lattice_example()
    arrangement_example()
    ring_example()
    hikita_example()
    numeric_example()


if __name__ == "__main__":
    main()
