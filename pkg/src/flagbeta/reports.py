"""Structured verification reports with canonical, reproducible serialization.

A report is a record tree: global metadata plus one record per check.  The
file form is canonical JSON (sorted keys, fixed separators, shortest
round-trip floats), so identical run specifications produce byte-identical
files.  Wall-clock timings are kept on the in-memory records and printed to
the console but excluded from the canonical file; the serialized ``cost``
field is a deterministic work counter instead.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["CheckRecord", "Report", "config_hash"]

_STATUSES = ("pass", "fail", "warn")


def _encode_value(v):
    if v is None or isinstance(v, (str, int, bool)):
        return v
    if isinstance(v, complex):
        if v.imag == 0.0:
            return float(v.real)
        return {"re": float(v.real), "im": float(v.imag)}
    if isinstance(v, float):
        if v != v or v in (float("inf"), float("-inf")):
            return {"special": repr(v)}
        return v
    return float(v)


def _decode_value(v):
    if isinstance(v, dict):
        if "special" in v:
            return float(v["special"])
        return complex(v["re"], v["im"])
    return v


@dataclass
class CheckRecord:
    """One verification check: what was measured against what, and the verdict."""

    name: str
    anchor: str
    status: str
    observed: object = None
    expected: object = None
    tolerance: object = None
    metric: float | None = None
    metric_kind: str = "rel_err"
    detail: str = ""
    cost: int = 0
    runtime_s: float = 0.0   # console only; not serialized

    def __post_init__(self):
        if self.status not in _STATUSES:
            raise ValueError(f"status must be one of {_STATUSES}")
        if not self.anchor:
            raise ValueError("every record carries an anchor string")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "status": self.status,
            "observed": _encode_value(self.observed),
            "expected": _encode_value(self.expected),
            "tolerance": _encode_value(self.tolerance),
            "metric": _encode_value(self.metric),
            "metric_kind": self.metric_kind,
            "detail": self.detail,
            "cost": int(self.cost),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CheckRecord":
        return cls(
            name=d["name"], anchor=d["anchor"], status=d["status"],
            observed=_decode_value(d.get("observed")),
            expected=_decode_value(d.get("expected")),
            tolerance=_decode_value(d.get("tolerance")),
            metric=_decode_value(d.get("metric")),
            metric_kind=d.get("metric_kind", "rel_err"),
            detail=d.get("detail", ""),
            cost=d.get("cost", 0),
        )

    def console_line(self) -> str:
        metric = "" if self.metric is None else \
            f" {self.metric_kind}={self.metric:.3g}"
        tol = "" if self.tolerance is None else f" tol={self.tolerance}"
        time_part = f" [{self.runtime_s:.2f}s]" if self.runtime_s else ""
        return f"[{self.status.upper():4s}] {self.name}{metric}{tol}{time_part}"


@dataclass
class Report:
    """Metadata plus check records; serializes canonically."""

    meta: dict
    records: list = field(default_factory=list)

    def passed(self) -> bool:
        return all(r.status != "fail" for r in self.records)

    def counts(self) -> dict:
        out = {s: 0 for s in _STATUSES}
        for r in self.records:
            out[r.status] += 1
        return out

    def to_dict(self) -> dict:
        return {"meta": self.meta, "checks": [r.to_dict() for r in self.records]}

    def to_json_bytes(self) -> bytes:
        return (json.dumps(self.to_dict(), sort_keys=True,
                           separators=(",", ":"), allow_nan=False) + "\n"
                ).encode("utf-8")

    def write(self, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(self.to_json_bytes())
        return path

    @classmethod
    def from_json_bytes(cls, data: bytes) -> "Report":
        obj = json.loads(data.decode("utf-8"))
        return cls(meta=obj["meta"],
                   records=[CheckRecord.from_dict(d) for d in obj["checks"]])

    @classmethod
    def read(cls, path) -> "Report":
        return cls.from_json_bytes(Path(path).read_bytes())

    def console_summary(self) -> str:
        lines = [r.console_line() for r in self.records]
        c = self.counts()
        lines.append(f"-- {c['pass']} pass, {c['fail']} fail, {c['warn']} warn "
                     f"(seed={self.meta.get('seed')}, "
                     f"config={self.meta.get('config_hash', '')[:12]})")
        return "\n".join(lines)


def config_hash(config: dict) -> str:
    """Stable hash of a resolved configuration dictionary."""
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"),
                       default=str)
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()
