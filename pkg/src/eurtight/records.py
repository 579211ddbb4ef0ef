"""Run records: one JSON document per CLI invocation."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .certify import Certificate, OptimizationResult
from .quantum import PureState, StateParams

SCHEMA_VERSION = 1
SEED_ENV = "EURTIGHT_SEED"


class RecordError(ValueError):
    pass


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError as exc:
        raise RecordError(f"{SEED_ENV}={raw!r} is not an integer") from exc


def timestamp() -> str:
    """UTC time, or SOURCE_DATE_EPOCH when set so records can be reproduced
    byte for byte."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return when.replace(microsecond=0).isoformat()


def complex_list(v) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex).ravel()]


def from_complex_list(rows) -> np.ndarray:
    return np.array([complex(re, im) for re, im in rows])


def state_dict(s: PureState) -> list[list[float]]:
    return complex_list(s.amplitudes)


def params_dict(p: StateParams) -> dict:
    return {"angles": [float(x) for x in p.angles], "phases": [float(x) for x in p.phases]}


def result_dict(r: OptimizationResult, certificate: Certificate | None = None) -> dict:
    out = {
        "min_value": r.min_value,
        "labels": list(r.labels),
        "best_params": params_dict(r.best_params),
        "best_state": state_dict(r.best_state),
        "cluster_representatives": [state_dict(s) for s in r.cluster_representatives],
        "restarts_converged_to_best": r.restarts_converged_to_best,
        "fraction_at_best": r.fraction_at_best,
        "next_best_gap": r.next_best_gap(),
        "nonconvergence_warning": r.nonconvergence_warning,
        "converged_starts": int(np.sum(r.converged)),
        "final_values": [float(v) for v in r.final_values],
    }
    if certificate is not None:
        out["certificate"] = certificate.as_dict()
    return out


@dataclass(frozen=True)
class RunRecord:
    command: dict
    config: dict
    payload: dict
    timestamp: str = field(default_factory=timestamp)
    version: str = __version__
    schema: int = SCHEMA_VERSION

    def as_dict(self) -> dict:
        return {
            "schema": self.schema,
            "version": self.version,
            "timestamp": self.timestamp,
            "command": self.command,
            "config": self.config,
            "payload": self.payload,
        }

    def dumps(self) -> str:
        # repr-precision floats survive a load/dump cycle unchanged
        return json.dumps(self.as_dict(), indent=2, allow_nan=False) + "\n"

    @classmethod
    def loads(cls, text: str) -> RunRecord:
        data = json.loads(text)
        if data.get("schema") != SCHEMA_VERSION:
            raise RecordError(f"unsupported record schema {data.get('schema')!r}")
        try:
            return cls(
                command=data["command"],
                config=data["config"],
                payload=data["payload"],
                timestamp=data["timestamp"],
                version=data["version"],
                schema=data["schema"],
            )
        except KeyError as exc:
            raise RecordError(f"record missing field {exc}") from exc


def write_atomic(path, text: str) -> Path:
    """Write via a temp file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def save_record(record: RunRecord, path) -> Path:
    return write_atomic(path, record.dumps())


def load_record(path) -> RunRecord:
    return RunRecord.loads(Path(path).read_text(encoding="utf-8"))
