"""Persistence: portable bitmaps, versioned CSV/JSON, and run manifests.

Every emitted file is deterministic given the run parameters, and every
output directory carries a manifest recording the command line, the
parameters, and a content hash per artifact, so a run can be replayed and
verified bit for bit. Timestamps live only in the manifest.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version as _dist_version
from pathlib import Path

import numpy as np

from .classify import SweepReport
from .coefficient import CoefficientResult, FitResult, RunParams, VariabilityCurve

SCHEMA_CURVE = "caprog.curve.v1"
SCHEMA_COEFFICIENT = "caprog.coefficient.v1"
SCHEMA_SWEEP_CSV = "caprog.sweep.v1"
SCHEMA_SWEEP_JSON = "caprog.sweep.v1"
SCHEMA_COMPARE = "caprog.compare.v1"
SCHEMA_MANIFEST = "caprog.manifest.v1"

MANIFEST_NAME = "manifest.json"


def tool_version() -> str:
    try:
        return _dist_version("caprog")
    except PackageNotFoundError:
        return "0+unknown"


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def json_bytes(obj) -> bytes:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Portable bitmap (P4). Cell value 1 renders black, which in P4 is bit 1;
# each row is padded to a whole byte, per the format.

def pbm_bytes(rows: np.ndarray) -> bytes:
    arr = np.ascontiguousarray(rows, dtype=np.uint8)
    if arr.ndim != 2:
        raise ValueError("a bitmap needs a 2-D array of 0/1 cells")
    if arr.max(initial=0) > 1:
        raise ValueError("bitmaps are binary; higher colours need a different format")
    height, width = arr.shape
    header = f"P4\n{width} {height}\n".encode("ascii")
    return header + np.packbits(arr, axis=1).tobytes()


def parse_pbm(data: bytes) -> np.ndarray:
    """Inverse of :func:`pbm_bytes`; tolerates comments and any whitespace."""
    if not data.startswith(b"P4"):
        raise ValueError("not a P4 bitmap")
    pos, fields = 2, []
    while len(fields) < 2:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        fields.append(int(data[start:pos]))
    pos += 1  # single whitespace separates the header from the raster
    width, height = fields
    row_bytes = (width + 7) // 8
    raster = np.frombuffer(data, dtype=np.uint8, count=height * row_bytes, offset=pos)
    bits = np.unpackbits(raster.reshape(height, row_bytes), axis=1)
    return np.ascontiguousarray(bits[:, :width])


# ---------------------------------------------------------------------------
# Tabular and structured result formats.

def curve_csv_bytes(curve: VariabilityCurve) -> bytes:
    lines = [f"# schema={SCHEMA_CURVE}", "t_prime,S"]
    lines += [f"{t},{value!r}" for t, value in curve.points]
    return ("\n".join(lines) + "\n").encode("utf-8")


def coefficient_json_obj(res: CoefficientResult, curve: VariabilityCurve | None = None) -> dict:
    obj = {
        "schema": SCHEMA_COEFFICIENT,
        "c_value": res.c_value,
        "fit": asdict(res.fit),
        "params": asdict(res.params),
    }
    if curve is not None:
        obj["curve"] = {
            "family": curve.family_descriptor,
            "points": [[t, value] for t, value in curve.points],
        }
    return obj


def coefficient_from_obj(obj: dict) -> CoefficientResult:
    """Rebuild a stored coefficient result, e.g. for later comparison."""
    if obj.get("schema") != SCHEMA_COEFFICIENT:
        raise ValueError("not a stored coefficient result")
    return CoefficientResult(
        c_value=obj["c_value"],
        fit=FitResult(**obj["fit"]),
        params=RunParams(**obj["params"]),
    )


def sweep_csv_bytes(report: SweepReport) -> bytes:
    lines = [f"# schema={SCHEMA_SWEEP_CSV}", "rule,c_value,rmse,rank,cluster"]
    for entry in report.entries:
        rid = entry.params.rule_id
        lines.append(
            f"{rid},{entry.c_value!r},{entry.fit.rmse!r},"
            f"{report.rank(rid)},{report.clusters[rid]}"
        )
    return ("\n".join(lines) + "\n").encode("utf-8")


def sweep_json_obj(report: SweepReport, notes: dict | None = None) -> dict:
    obj = {
        "schema": SCHEMA_SWEEP_JSON,
        "epsilon": report.epsilon,
        "ranking": list(report.ranking),
        "entries": [
            {
                "rule": e.params.rule_id,
                "c_value": e.c_value,
                "rmse": e.fit.rmse,
                "rank": report.rank(e.params.rule_id),
                "cluster": report.clusters[e.params.rule_id],
            }
            for e in report.entries
        ],
        "params": asdict(report.entries[0].params) if report.entries else {},
    }
    if obj["params"]:
        del obj["params"]["rule_id"]  # grid parameters; the rule varies per entry
    if notes:
        obj["notes"] = notes
    return obj


# ---------------------------------------------------------------------------
# Manifests.

@dataclass(frozen=True)
class RunManifest:
    argv: list[str]
    params: dict
    outputs: dict[str, str]  # artifact name -> sha256 of its bytes
    timestamp: str
    version: str
    schema: str = SCHEMA_MANIFEST

    def to_obj(self) -> dict:
        return {
            "schema": self.schema,
            "tool": "caprog",
            "version": self.version,
            "argv": list(self.argv),
            "params": self.params,
            "outputs": dict(sorted(self.outputs.items())),
            "timestamp": self.timestamp,
        }


def load_manifest(path: str | Path) -> RunManifest:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    if obj.get("schema") != SCHEMA_MANIFEST:
        raise ValueError(f"not a run manifest: {path}")
    return RunManifest(
        argv=list(obj["argv"]),
        params=obj["params"],
        outputs=dict(obj["outputs"]),
        timestamp=obj["timestamp"],
        version=obj.get("version", "0+unknown"),
    )


def write_outputs(out_dir: str | Path, files: dict[str, bytes], argv, params: dict) -> RunManifest:
    """Write a fully materialised artifact set plus its manifest.

    ``files`` must be complete before this is called; nothing is written
    incrementally, so a failed run leaves no partial directory content.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(
        argv=list(argv),
        params=params,
        outputs={name: sha256_hex(data) for name, data in files.items()},
        timestamp=datetime.now(timezone.utc).isoformat(),
        version=tool_version(),
    )
    for name, data in files.items():
        (out / name).write_bytes(data)
    (out / MANIFEST_NAME).write_bytes(json_bytes(manifest.to_obj()))
    return manifest


def verify_outputs(out_dir: str | Path, manifest: RunManifest) -> dict[str, bool]:
    """Per-artifact hash check of a directory against a manifest."""
    out = Path(out_dir)
    return {
        name: out.joinpath(name).is_file()
        and sha256_hex(out.joinpath(name).read_bytes()) == digest
        for name, digest in manifest.outputs.items()
    }
