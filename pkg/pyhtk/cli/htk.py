#!/usr/bin/python3
"""htk: 問題ファイルを読み、解析を実行してレポートを出力するバッチ CLI

    htk analyze --spec tp1.toml
    htk hikita --spec tp1.toml --json --out tp1.json
    htk verify --spec tp1.toml --samples 50 --seed 7
"""

import argparse
import sys
from enum import IntEnum
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from colorama import Fore, Style, just_fix_windows_console

import pyhtk
from pyhtk.core.elliptic import TorusPointE, map_matrix
from pyhtk.core.errors import (
    DegenerateConfig,
    DimensionMismatch,
    HypertoricError,
    InvalidModularParam,
    NonGenericAlpha,
    NotSimple,
    OracleMismatch,
    ParseError,
    UnsupportedDimension,
)
from pyhtk.core.lattice import circuits, exact_sequence, is_unimodular
from pyhtk.core.types import Flavor
from pyhtk.parser.report import (
    Report,
    check_to_dict,
    circuit_to_dict,
    encode,
    hikita_to_dict,
    sequence_to_dict,
    table_rows,
)
from pyhtk.parser.spec_loader import ProblemSpec, load_spec
from pyhtk.runtime.arrangements import (
    brute_force_fixed_point_count,
    build_arrangement,
    fixed_points,
    smoothness_report,
    stabilizer_dimension,
)
from pyhtk.runtime.branch_rings import CoulombBranchRing
from pyhtk.runtime.geometry_checks import (
    CheckResult,
    E_MOMENT_TOLERANCE,
    EQUIVARIANCE_TOLERANCE,
    a_moment_eval,
    construct_level_point,
    e_moment_convergence,
    e_moment_sweep,
    fiber_scan,
    gamma_composition_check,
    gamma_equivariance_check,
    level_set_member,
    moment_eval,
    MomentFlavor,
    random_surface_points,
    theta_identity_checks,
)
from pyhtk.runtime.hikita import hikita_sweep, hikita_verify, unimodular_family
from pyhtk.util.logger import get_logger, setup_logging

logger = get_logger("cli.htk")

COMMANDS = ("analyze", "rings", "hikita", "verify", "plot")
GAMMAS = ((1, 0), (0, 1), (1, 1), (-1, 2))
CONVERGENCE_TOLERANCE = 0.125


class ExitCode(IntEnum):
    OK = 0
    CHECK_FAILED = 1
    PARSE = 2
    DEGENERATE = 3
    ORACLE_MISMATCH = 4
    HIKITA_FAIL = 5
    NON_GENERIC_ALPHA = 6
    UNSUPPORTED_DIMENSION = 7


# 上から順に isinstance で照合する
_ERROR_CODES: Tuple[Tuple[type, ExitCode], ...] = (
    (ParseError, ExitCode.PARSE),
    (DimensionMismatch, ExitCode.PARSE),
    (InvalidModularParam, ExitCode.PARSE),
    (DegenerateConfig, ExitCode.DEGENERATE),
    (OracleMismatch, ExitCode.ORACLE_MISMATCH),
    (NonGenericAlpha, ExitCode.NON_GENERIC_ALPHA),
    (UnsupportedDimension, ExitCode.UNSUPPORTED_DIMENSION),
)


def exit_code_for(error: HypertoricError) -> ExitCode:
    for kind, code in _ERROR_CODES:
        if isinstance(error, kind):
            return code
    return ExitCode.CHECK_FAILED


def provenance(spec: ProblemSpec) -> Dict[str, object]:
    opts = spec.options
    return {
        "version": pyhtk.__version__,
        "spec": Path(spec.source).name if spec.source else None,
        "seed": opts.seed,
        "tolerance": opts.tolerance,
        "truncation": opts.truncation,
        "tau": spec.tau,
    }


# ---------------------------------------------------------------------------
# コマンド
# ---------------------------------------------------------------------------


def _arrangement(spec: ProblemSpec):
    u = spec.u_config()
    m = spec.modular()
    seq = exact_sequence(u)
    alpha = spec.alpha_or_default(u.n)
    beta = spec.beta_point(u.n, m)
    return build_arrangement(u, alpha, beta, m), seq


def cmd_analyze(spec: ProblemSpec) -> Tuple[Report, ExitCode]:
    arr, seq = _arrangement(spec)
    u = arr.config
    try:
        v = spec.v_config()
    except DegenerateConfig as e:
        # u に余ループがあると Gale 双対のベクトルが零になる
        logger.warning(f"Gale 双対を作れません: {e}")
        v = None

    report = smoothness_report(arr)
    points = []
    if report.simple:
        for p in fixed_points(arr):
            points.append(
                {
                    "subset": [i + 1 for i in p.subset],
                    "real": p.real,
                    "elliptic": p.elliptic,
                    "stabilizer_dimension": stabilizer_dimension(arr, p.point),
                }
            )

    results = {
        "role": spec.role,
        "u": u,
        "gale_dual": v,
        "exact_sequence": sequence_to_dict(seq),
        "circuits": [circuit_to_dict(c) for c in circuits(u)],
        "unimodular": is_unimodular(u),
        "alpha": arr.alpha,
        "alpha_lift": arr.alpha_lift,
        "beta": arr.beta,
        "beta_lift": arr.beta_lift,
        "smoothness": {
            "verdict": report.verdict,
            "simple": report.simple,
            "unimodular": report.unimodular,
            "real_generic": report.real_generic,
            "witnesses": [[i + 1 for i in w] for w in report.witnesses],
        },
        "fixed_points": points,
        "fixed_point_count": len(points),
        "brute_force_count": brute_force_fixed_point_count(arr) if report.simple else None,
    }
    logger.info(f"analyze: {report.verdict.value}, 固定点 {len(points)} 個")
    return Report("analyze", results, provenance(spec)), ExitCode.OK


def cmd_rings(spec: ProblemSpec, degree_bound: int) -> Tuple[Report, ExitCode]:
    u = spec.u_config()
    results: Dict[str, object] = {"degree_bound": degree_bound, "u": u}
    for flavor in Flavor:
        R = CoulombBranchRing(u, flavor, spec.options.truncation)
        table = R.multiplication_table(degree_bound)
        bad = [e for e in table if not e.oracle_agrees]
        if bad:
            raise OracleMismatch(
                f"{flavor.name}: r^{bad[0].left}·r^{bad[0].right} がオラクルと一致しません"
            )
        results[flavor.name.lower()] = {
            "generators": [list(g.terms) for g in R.generators(degree_bound)],
            "table": [
                {"left": e.left, "right": e.right, "product": repr(e.product)} for e in table
            ],
        }
        logger.info(f"rings: {flavor.name} の表 {len(table)} 項目")
    return Report("rings", results, provenance(spec)), ExitCode.OK


def _alpha_hat_for(spec: ProblemSpec, n: int):
    if spec.alpha is None:
        return None
    if len(spec.alpha) != n:
        raise DimensionMismatch(f"hikita の alpha は長さ n={n} の α̂ です: {len(spec.alpha)}")
    return spec.alpha


def cmd_hikita(spec: ProblemSpec) -> Tuple[Report, ExitCode]:
    radius = spec.options.radius
    if spec.sweep or spec.family:
        configs = [spec.v_config()] + spec.sweep_configs()
        if spec.family:
            family = spec.family
            configs += unimodular_family(
                family["max_n"], family["max_d"], family["bound"], family.get("limit")
            )
        reports = hikita_sweep(configs, spec.alpha, radius)
        passed = all(r.passed for r in reports)
        results = {
            "status": "PASS" if passed else "FAIL",
            "count": len(reports),
            "failed": [encode(r.config) for r in reports if not r.passed],
            "reports": [hikita_to_dict(r) for r in reports],
        }
    else:
        v = spec.v_config()
        report = hikita_verify(v, _alpha_hat_for(spec, v.n), radius)
        passed = report.passed
        if not report.in_hypotheses:
            logger.warning("ユニモジュラでない入力の結果は参考値です")
        results = hikita_to_dict(report)
    code = ExitCode.OK if passed else ExitCode.HIKITA_FAIL
    return Report("hikita", results, provenance(spec)), code


def _aggregate(name: str, checks: List[CheckResult], tolerance: float, **metadata) -> CheckResult:
    residuals = [c.residual for c in checks]
    worst = max(residuals) if residuals else 0.0
    meta = dict(metadata, count=len(checks))
    if residuals:
        meta["median"] = float(np.median(residuals))
    return CheckResult(name, worst, tolerance, metadata=meta)


def _moment_checks(spec: ProblemSpec) -> List[CheckResult]:
    """配置の水準集合に点を作り、運動量写像が α と β に戻るか"""
    arr, seq = _arrangement(spec)
    if seq.k == 0:
        return []
    m, opts = arr.m, spec.options
    point = construct_level_point(seq, m, arr.alpha, arr.beta, seed=opts.seed, N=opts.truncation)
    real = moment_eval(MomentFlavor.ELLIPTIC_REAL, point, seq, m)
    level = max(
        (abs(r - float(a)) for r, a in zip(real, arr.alpha)), default=0.0
    )
    member = level_set_member("elliptic", point, seq, arr.alpha, arr.beta, m, opts.tolerance)
    a_real, y = a_moment_eval(point, seq, m, arr.alpha_lift, arr.beta_lift, opts.tolerance)
    leak = max((abs(float(v)) for v in seq.iota_vee.apply(a_real)), default=0.0)
    rebuilt = map_matrix(seq.pi_vee, y) + arr.beta_lift
    x = TorusPointE.from_complex(point.x, m)
    mismatched = sum(not a.is_close(b, opts.tolerance) for a, b in zip(rebuilt, x))
    return [
        CheckResult(
            "moment-level-set",
            level if member else float("inf"),
            opts.tolerance,
            metadata={"seed": opts.seed, "member": member},
        ),
        CheckResult("a-moment-real", leak, opts.tolerance, metadata={"seed": opts.seed}),
        CheckResult(
            "a-moment-preimage",
            float(mismatched),
            0.5,
            metadata={"seed": opts.seed, "tolerance": opts.tolerance, "value": y},
        ),
    ]


def cmd_verify(spec: ProblemSpec, samples: int) -> Tuple[Report, ExitCode]:
    opts = spec.options
    m = spec.modular()
    N, seed, h = opts.truncation, opts.seed, opts.step
    checks: List[CheckResult] = list(theta_identity_checks(m, samples, seed, N))

    sweep = e_moment_sweep(m, samples, h, seed, N)
    checks.append(_aggregate("e-moment", sweep, E_MOMENT_TOLERANCE, step=h, seed=seed))
    ratio = e_moment_convergence(m, samples, h, seed, N)
    checks.append(
        CheckResult(
            "e-moment-convergence",
            abs(ratio - 4.0) / 4.0,
            CONVERGENCE_TOLERANCE,
            metadata={"ratio": ratio, "step": h, "seed": seed},
        )
    )

    points = random_surface_points(m, min(samples, 10), seed + 1, N)
    for gamma in GAMMAS:
        equivariance = [
            gamma_equivariance_check(p, gamma, m, seed=seed + k, N=N) for k, p in enumerate(points)
        ]
        checks.append(
            _aggregate(f"gamma-equivariance{gamma}", equivariance, EQUIVARIANCE_TOLERANCE, seed=seed)
        )
    composition = [
        gamma_composition_check(p, g1, g2, m) for p in points for g1 in GAMMAS for g2 in GAMMAS
    ]
    checks.append(_aggregate("gamma-composition", composition, EQUIVARIANCE_TOLERANCE, seed=seed))

    nodal = fiber_scan(m, N=N)
    checks.append(
        CheckResult(
            "fiber-scan",
            float(len(set(nodal) ^ {(0.0, 0.0)})),
            0.5,
            metadata={"nodal": nodal},
        )
    )
    checks.extend(_moment_checks(spec))

    failed = [c.name for c in checks if not c.passed]
    if failed:
        logger.warning(f"verify: 失敗した検査 {failed}")
    results = {"checks": [check_to_dict(c) for c in checks], "failed": failed}
    code = ExitCode.CHECK_FAILED if failed else ExitCode.OK
    return Report("verify", results, provenance(spec)), code


def cmd_plot(spec: ProblemSpec, out_dir: Path) -> Tuple[Report, ExitCode]:
    from pyhtk.cli.plots import plot_arrangement

    arr, _ = _arrangement(spec)
    try:
        points = fixed_points(arr)
    except NotSimple as e:
        logger.warning(f"固定点なしで描きます: {e}")
        points = []
    stem = Path(spec.source).stem if spec.source else "arrangement"
    files = plot_arrangement(arr, points, out_dir, stem)
    results = {"files": [str(f) for f in files], "fixed_points": len(points)}
    return Report("plot", results, provenance(spec)), ExitCode.OK


# ---------------------------------------------------------------------------
# 出力
# ---------------------------------------------------------------------------


def _paint(text: str, color: str, enabled: bool) -> str:
    return f"{color}{text}{Style.RESET_ALL}" if enabled else text


def _status(passed: bool, color: bool) -> str:
    if passed:
        return _paint("PASS", Fore.GREEN, color)
    return _paint("FAIL", Fore.RED, color)


def render_text(report: Report, color: bool = False) -> str:
    """人間向けの整列した表。color が真なら PASS/FAIL と見出しに色を付ける"""
    data = report.to_dict()["results"]
    lines = [_paint(f"━━━ htk {report.command} ━━━", Fore.CYAN, color)]
    if report.command == "analyze":
        smooth = data["smoothness"]
        lines += table_rows(
            [
                ["configuration u", data["u"]["vectors"]],
                ["circuits", len(data["circuits"])],
                ["unimodular", data["unimodular"]],
                ["verdict", smooth["verdict"]],
                ["fixed points", data["fixed_point_count"]],
            ]
        )
        rows = [["subset", "real", "elliptic", "stab"]]
        for p in data["fixed_points"]:
            elliptic = ", ".join(f"{c['s']}+{c['t']}τ" for c in p["elliptic"])
            rows.append([p["subset"], p["real"], elliptic, p["stabilizer_dimension"]])
        if len(rows) > 1:
            lines += [""] + table_rows(rows)
    elif report.command == "rings":
        for flavor in ("additive", "multiplicative", "elliptic"):
            lines.append(_paint(flavor, Fore.YELLOW, color))
            lines += table_rows(
                [[e["left"], "*", e["right"], "=", e["product"]] for e in data[flavor]["table"]]
            )
    elif report.command == "hikita":
        entries = data["reports"] if "reports" in data else [data]
        rows = []
        for entry in entries:
            verdicts = entry["verdicts"]
            rows.append(
                [entry["config"]["vectors"], entry["unimodular"]]
                + [verdicts[k] for k in sorted(verdicts)]
                + [_status(entry["status"] == "PASS", color)]
            )
        lines += table_rows(rows)
    elif report.command == "verify":
        lines += table_rows(
            [
                [c["name"], f"{c['residual']:.3e}", f"{c['tolerance']:.1e}", _status(c["passed"], color)]
                for c in data["checks"]
            ]
        )
    else:
        lines += [str(f) for f in data["files"]]
    return "\n".join(lines) + "\n"


def emit(report: Report, as_json: bool, out: Optional[Path]) -> None:
    """標準出力へ書き、--out があれば同じ内容 (色なし) をファイルにも書く"""
    if as_json:
        text = plain = report.to_json()
    else:
        plain = render_text(report)
        text = render_text(report, color=sys.stdout.isatty())
    if out is not None and report.command != "plot":
        out.write_text(plain, encoding="utf-8")
    sys.stdout.write(text)


# ---------------------------------------------------------------------------
# 引数
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="htk",
        description="Elliptic hypertoric varieties: arrangements, rings and Hikita checks",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {pyhtk.__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--spec", required=True, type=Path, help="問題ファイル (TOML)")
        p.add_argument("--out", type=Path, help="出力先 (plot ではディレクトリ)")
        p.add_argument("--json", action="store_true", help="JSON を出力する")
        p.add_argument("--seed", type=int)
        p.add_argument("--radius", type=int)
        p.add_argument("--degree", type=int)
        p.add_argument("--samples", type=int)
        p.add_argument("--step", type=float)
        p.add_argument("--debug", action="store_true", help="デバッグログを有効にする")
    return ap


def _run(args: argparse.Namespace, spec: ProblemSpec) -> Tuple[Report, ExitCode]:
    opts = spec.options
    handlers: Dict[str, Callable[[], Tuple[Report, ExitCode]]] = {
        "analyze": lambda: cmd_analyze(spec),
        "rings": lambda: cmd_rings(spec, opts.degree),
        "hikita": lambda: cmd_hikita(spec),
        "verify": lambda: cmd_verify(spec, opts.samples),
        "plot": lambda: cmd_plot(spec, args.out or Path(".")),
    }
    return handlers[args.command]()


def main(argv: Optional[List[str]] = None) -> int:
    just_fix_windows_console()
    args = build_parser().parse_args(argv)
    if args.debug:
        setup_logging("debug", force_reinit=True)

    try:
        spec = load_spec(args.spec).with_options(
            seed=args.seed,
            radius=args.radius,
            degree=args.degree,
            samples=args.samples,
            step=args.step,
        )
        report, code = _run(args, spec)
    except HypertoricError as e:
        code = exit_code_for(e)
        message = _paint(f"エラー ({code.name}): {e}", Fore.RED, sys.stderr.isatty())
        print(message, file=sys.stderr)
        return int(code)

    emit(report, args.json, args.out)
    return int(code)


if __name__ == "__main__":
    sys.exit(main())
