"""Bit-exact serialization: binary snapshots, CSV tables, run manifests.

Snapshot layout (all little-endian regardless of host):

    bytes 0..7    magic "FZKSNAP1"
    bytes 8..11   N      (u32)  mode cutoff
    bytes 12..15  M      (u32)  grid points per axis
    bytes 16..23  L      (f64)  domain half-width factor
    bytes 24..31  alpha  (f64)
    bytes 32..39  t      (f64)  sample time
    bytes 40..    M*M f64 grid values, row-major

CSV floats are printed with 17 significant digits so that parsing them
back reproduces the exact double.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import struct
from dataclasses import dataclass

import numpy as np

from .errors import SnapshotFormatError
from .grid import RealField

MAGIC = b"FZKSNAP1"
_HEADER = struct.Struct("<IIddd")


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _atomic_write(path, data: bytes):
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


@dataclass(frozen=True)
class SnapshotMeta:
    n: int
    alpha: float
    t: float


def write_snapshot(path, field: RealField, meta: SnapshotMeta) -> None:
    payload = np.ascontiguousarray(field.values, dtype="<f8").tobytes()
    header = MAGIC + _HEADER.pack(meta.n, field.M, field.L, meta.alpha, meta.t)
    _atomic_write(path, header + payload)


def read_snapshot(path) -> tuple[RealField, SnapshotMeta]:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < len(MAGIC) + _HEADER.size:
        raise SnapshotFormatError(f"{path}: file shorter than the snapshot header")
    if data[: len(MAGIC)] != MAGIC:
        raise SnapshotFormatError(f"{path}: bad magic {data[:len(MAGIC)]!r}")
    n, m, L, alpha, t = _HEADER.unpack_from(data, len(MAGIC))
    payload = data[len(MAGIC) + _HEADER.size :]
    if len(payload) != m * m * 8:
        raise SnapshotFormatError(
            f"{path}: payload is {len(payload)} bytes, expected {m * m * 8}"
        )
    values = np.frombuffer(payload, dtype="<f8").reshape(m, m).astype(float)
    return RealField(values, L), SnapshotMeta(n=n, alpha=alpha, t=t)


def write_error_table(path, table) -> None:
    lines = [["n", "l2_error", "l2_order", "linf_error", "linf_order"]]
    for row in table.rows:
        lines.append(
            [
                str(row.n),
                _fmt(row.l2_error),
                "" if row.l2_order is None else _fmt(row.l2_order),
                _fmt(row.linf_error),
                "" if row.linf_order is None else _fmt(row.linf_order),
            ]
        )
    _write_csv(path, lines)


def write_invariants(path, series) -> None:
    lines = [["t", "mass", "momentum", "hamiltonian"]]
    for rec in series:
        lines.append([_fmt(rec.t), _fmt(rec.mass), _fmt(rec.momentum), _fmt(rec.hamiltonian)])
    _write_csv(path, lines)


def write_temporal_orders(path, rows) -> None:
    lines = [["dt", "l2_error", "order"]]
    for row in rows:
        lines.append([_fmt(row.dt), _fmt(row.error), "" if row.order is None else _fmt(row.order)])
    _write_csv(path, lines)


def write_cross_section(path, x, slices) -> None:
    """y = 0 cross-sections, one column per sample time."""
    header = ["x"] + [f"u_t{t:g}" for t, _ in slices]
    lines = [header]
    for i in range(len(x)):
        lines.append([_fmt(x[i])] + [_fmt(vals[i]) for _, vals in slices])
    _write_csv(path, lines)


def _write_csv(path, lines) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", newline="") as fh:
        csv.writer(fh).writerows(lines)
    os.replace(tmp, path)


def sha256_of(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(path, config_echo: dict, timings: dict, drifts: dict, files) -> None:
    """Run manifest with a checksummed inventory of the written artifacts."""
    from . import __version__

    inventory = []
    base = os.path.dirname(os.path.abspath(path))
    for f in files:
        inventory.append(
            {
                "path": os.path.relpath(os.path.abspath(f), base),
                "bytes": os.path.getsize(f),
                "sha256": sha256_of(f),
            }
        )
    doc = {
        "artifact_version": __version__,
        "config": config_echo,
        "timings_seconds": timings,
        "invariant_drifts": drifts,
        "files": inventory,
    }
    _atomic_write(path, json.dumps(doc, indent=2).encode() + b"\n")
