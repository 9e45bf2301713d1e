"""CSV / JSON serialisation of traces and reports, written atomically."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any

import numpy as np

from .sweeps import PowerTrace

SCHEMA_VERSION = 1


def atomic_write_text(path: str | os.PathLike, text: str) -> Path:
    """Write via a temp file in the target directory and rename into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
    return path


def dumps_json(doc: Any) -> str:
    # float repr is shortest round-trip, so values reload bit-exactly
    return json.dumps(_plain(doc), indent=1, sort_keys=True, allow_nan=False) + "\n"


def _plain(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def trace_to_csv(trace: PowerTrace) -> str:
    lam = trace.wavelength
    if lam is None:
        raise ValueError("trace has no wavelength in its config snapshot; cannot write l_over_lambda")
    power_col = "power_norm" if trace.normalized else "power_w"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["l_m", "l_over_lambda", power_col, "model"])
    for l, v in zip(trace.grid, trace.values):
        w.writerow([_fmt(l), _fmt(l / lam), _fmt(v), trace.model_tag])
    return buf.getvalue()


def trace_to_json(trace: PowerTrace) -> str:
    return dumps_json({
        "schema_version": SCHEMA_VERSION,
        "config": trace.config_snapshot,
        "grid": trace.grid,
        "values": trace.values,
        "tag": trace.model_tag,
    })


def write_trace(trace: PowerTrace, fmt: str, path: str | os.PathLike) -> Path:
    """Serialise ``trace`` as ``csv`` or ``json`` to ``path`` (atomic)."""
    if len(trace) == 0:
        raise ValueError("refusing to write an empty trace")
    if fmt == "csv":
        text = trace_to_csv(trace)
    elif fmt == "json":
        text = trace_to_json(trace)
    else:
        raise ValueError(f"unknown trace format {fmt!r}")
    try:
        return atomic_write_text(path, text)
    except OSError as exc:
        raise OSError(f"cannot write trace to {path}: {exc}") from exc


def read_trace(path: str | os.PathLike) -> PowerTrace:
    """Load a trace written by :func:`write_trace`; the format follows the suffix."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() == ".json":
        doc = json.loads(text)
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"{path}: unsupported schema_version {doc.get('schema_version')!r}")
        return PowerTrace(np.array(doc["grid"], dtype=float), np.array(doc["values"], dtype=float),
                          doc["tag"], doc.get("config", {}))
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0][:1] != ["l_m"] or len(rows[0]) != 4:
        raise ValueError(f"{path}: not a trace CSV")
    header = rows[0]
    body = rows[1:]
    grid = np.array([float(r[0]) for r in body])
    values = np.array([float(r[2]) for r in body])
    tags = {r[3] for r in body}
    if len(tags) != 1:
        raise ValueError(f"{path}: mixed model tags {sorted(tags)}")
    # CSV carries no geometry, only the wavelength implied by the two length columns
    snap: dict[str, Any] = {"normalized": header[2] == "power_norm"}
    if body and float(body[0][1]) > 0:
        snap["wavelength"] = float(body[0][0]) / float(body[0][1])
    return PowerTrace(grid, values, tags.pop(), snap)
