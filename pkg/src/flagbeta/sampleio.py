"""Delimited-text persistence for flag samples.

Files are comma-separated with ``#``-prefixed metadata lines, then a header
naming the columns: one column per real component of each free entry plus the
per-sample unnormalized log-density.  Floats are written in shortest
round-trip form, so identical (measure, seed, worker count) runs produce
byte-identical files and every value reads back exactly.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .fields import Field
from .sampling import FlagBatch, FlagMeasure, sample_flags

__all__ = ["emit_samples", "write_samples", "read_samples"]

_FORMAT_TAG = "flagbeta-samples-v1"


def _columns(n: int, kappa: int) -> list[str]:
    cols = []
    for p in range(1, n):
        for q in range(p + 1, n + 1):
            for m in range(kappa):
                cols.append(f"z_{p}_{q}_{m}")
    cols.append("log_density")
    return cols


def write_samples(batch: FlagBatch, path) -> Path:
    """Write a sampled batch with its provenance metadata."""
    measure = batch.measure
    kappa = measure.field.kappa
    n = measure.n
    cols = _columns(n, kappa)
    lines = [
        f"# format={_FORMAT_TAG}",
        f"# field={measure.field.value}",
        f"# n={n}",
        "# lambda=" + ",".join(repr(v) for v in measure.lam),
        f"# seed={batch.seed}",
        f"# workers={batch.workers}",
        f"# count={len(batch)}",
        ",".join(["index"] + cols),
    ]
    for i in range(len(batch)):
        vals = [str(i)]
        for p in range(1, n):
            for q in range(p + 1, n + 1):
                for m in range(kappa):
                    vals.append(repr(float(batch.components[i, p - 1, q - 1, m])))
        vals.append(repr(float(batch.log_density[i])))
        lines.append(",".join(vals))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="ascii")
    return path


def emit_samples(measure: FlagMeasure, count: int, seed: int, path,
                 workers: int = 1) -> Path:
    """Sample ``count`` matrices and persist them; returns the written path."""
    batch = sample_flags(measure, count, seed, workers=workers)
    return write_samples(batch, path)


def read_samples(path) -> FlagBatch:
    """Reconstruct a batch (components, log-density, metadata) from a file."""
    meta: dict[str, str] = {}
    rows: list[list[str]] = []
    header: list[str] | None = None
    for line in Path(path).read_text(encoding="ascii").splitlines():
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key.strip()] = value.strip()
            continue
        if header is None:
            header = line.split(",")
            continue
        rows.append(line.split(","))
    if header is None:
        raise ValueError(f"{path}: no header line")
    if meta.get("format") != _FORMAT_TAG:
        raise ValueError(f"{path}: unknown format {meta.get('format')!r}")

    field = Field.from_string(meta["field"])
    n = int(meta["n"])
    lam = tuple(float(v) for v in meta["lambda"].split(",")) if meta["lambda"] \
        else ()
    measure = FlagMeasure(n, field, lam)

    expected = ["index"] + _columns(n, field.kappa)
    if header != expected:
        raise ValueError(f"{path}: unexpected columns {header}")

    count = len(rows)
    comps = np.zeros((count, n, n, 4))
    comps[:, np.arange(n), np.arange(n), 0] = 1.0
    logd = np.zeros(count)
    for i, row in enumerate(rows):
        pos = 1
        for p in range(1, n):
            for q in range(p + 1, n + 1):
                for m in range(field.kappa):
                    comps[i, p - 1, q - 1, m] = float(row[pos])
                    pos += 1
        logd[i] = float(row[pos])
    return FlagBatch(comps, logd, measure, int(meta["seed"]),
                     int(meta["workers"]))
