"""Dataset CSV and result JSON persistence.

Dataset files: UTF-8, LF endings, header ``id,label,f0,...,f{d-1}``, labels
0 (normal), 1 (anomalous) or -1 (unknown), floats with 17 significant
digits so that a write/read cycle is value-identical.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from ..core import Dataset, Role
from ..errors import ConfigError, PurifierError

SCHEMA_VERSION = 1


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_dataset(dataset: Dataset, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = ["id", "label"] + [f"f{j}" for j in range(dataset.dim)]
    lines = [",".join(header)]
    for i in range(dataset.n):
        row = [str(int(dataset.ids[i])), str(int(dataset.labels[i]))]
        row += [_fmt(v) for v in dataset.features[i]]
        lines.append(",".join(row))
    path.write_bytes(("\n".join(lines) + "\n").encode("utf-8"))
    return path


def read_dataset(path, role: Role = Role.TRAIN) -> Dataset:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read dataset ({exc.strerror})") from None
    rows = csv.reader(text.splitlines())
    try:
        header = next(rows)
    except StopIteration:
        raise ConfigError(f"{path}: empty file") from None
    d = len(header) - 2
    expected = ["id", "label"] + [f"f{j}" for j in range(d)]
    if d < 1 or header != expected:
        raise ConfigError(f"{path}:1: header must be id,label,f0,...; got {','.join(header)}")
    ids, labels, feats = [], [], []
    for lineno, row in enumerate(rows, start=2):
        if not row:
            continue
        if len(row) != d + 2:
            raise ConfigError(f"{path}:{lineno}: expected {d + 2} fields, got {len(row)}")
        try:
            ids.append(int(row[0]))
            labels.append(int(row[1]))
            feats.append([float(v) for v in row[2:]])
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from None
    if not ids:
        raise ConfigError(f"{path}: no samples")
    try:
        return Dataset(ids, np.array(feats, dtype=np.float64), labels, role)
    except PurifierError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


def write_json(payload: dict, path) -> Path:
    """Write ``payload`` with a leading schema_version; output is byte-stable."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {"schema_version": SCHEMA_VERSION, **_plain(payload)}
    path.write_bytes((json.dumps(doc, indent=1, allow_nan=False) + "\n").encode("utf-8"))
    return path


def read_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return doc
