"""レポートの構造化と JSON 直列化

有理数は "p/q" 文字列、複素数は {"re", "im"}、E_τ の点は格子座標の組で書き出すので
同じ入力と種からはバイト単位で同じ出力が得られます。
"""

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List

import numpy as np

from pyhtk.core.elliptic import EllipticPoint, TorusPointE
from pyhtk.core.types import Circuit, ExactSequenceData, IntMatrix, ThetaMonomialIdeal, VectorConfig

SCHEMA_VERSION = 1


def encode(value: Any) -> Any:
    """JSON にそのまま書ける値へ再帰的に変換する"""
    if isinstance(value, Enum):
        return encode(value.value)
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, EllipticPoint):
        s, t = value.to_pair()
        return {"s": s, "t": t}
    if isinstance(value, TorusPointE):
        return [encode(p) for p in value]
    if isinstance(value, IntMatrix):
        return value.to_lists()
    if isinstance(value, VectorConfig):
        return {"d": value.d, "vectors": [list(v) for v in value.vectors]}
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [encode(v) for v in value]
    raise TypeError(f"直列化できない値: {type(value).__name__}")


def sequence_to_dict(seq: ExactSequenceData) -> Dict[str, Any]:
    return {
        "n": seq.n,
        "d": seq.d,
        "k": seq.k,
        "pi": seq.pi.to_lists(),
        "iota": seq.iota.to_lists(),
        "pi_vee": seq.pi_vee.to_lists(),
        "iota_vee": seq.iota_vee.to_lists(),
    }


def circuit_to_dict(c: Circuit) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "support": [i + 1 for i in c.support],
        "coefficients": list(c.coefficients),
    }
    if c.is_split:
        out["positive"] = [i + 1 for i in c.positive]
        out["negative"] = [i + 1 for i in c.negative]
    return out


def ideal_to_dict(ideal: ThetaMonomialIdeal) -> Dict[str, Any]:
    return {
        "variables": list(ideal.variables),
        "generators": [list(g) for g in ideal.generators],
        "display": repr(ideal),
        "grading": [list(ideal.grading(g)) for g in ideal.generators],
    }


def check_to_dict(result) -> Dict[str, Any]:
    return {
        "name": result.name,
        "residual": float(result.residual),
        "tolerance": float(result.tolerance),
        "passed": bool(result.passed),
        "metadata": encode(result.metadata),
    }


def hikita_to_dict(report) -> Dict[str, Any]:
    return {
        "config": encode(report.config),
        "alpha_hat": encode(report.alpha_hat),
        "unimodular": report.unimodular,
        "status": report.status,
        "ideals": {
            "circuit": ideal_to_dict(report.circuit),
            "coinvariant": dict(
                ideal_to_dict(report.coinvariant.ideal),
                radius=report.coinvariant.radius,
                stable=report.coinvariant.stable,
            ),
            "ell": ideal_to_dict(report.ell),
            "specialized": ideal_to_dict(report.specialized),
        },
        "verdicts": dict(report.verdicts),
        "certificates": {
            key: [
                {
                    "generator": list(c.generator),
                    "divisor": list(c.divisor) if c.divisor is not None else None,
                }
                for c in certs
            ]
            for key, certs in report.certificates.items()
        },
    }


@dataclass
class Report:
    command: str
    results: Dict[str, Any] = field(default_factory=dict)
    provenance: Dict[str, Any] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "provenance": encode(self.provenance),
            "results": encode(self.results),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        data = json.loads(text)
        return cls(
            command=data["command"],
            results=data["results"],
            provenance=data["provenance"],
            schema_version=data["schema_version"],
        )

    def __eq__(self, other):
        if not isinstance(other, Report):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def table_rows(rows: List[List[Any]]) -> List[str]:
    """列幅をそろえた文字列の行"""
    if not rows:
        return []
    cells = [[str(c) for c in row] for row in rows]
    widths = [max(len(row[i]) for row in cells if i < len(row)) for i in range(max(map(len, cells)))]
    return ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
