"""JSON and CSV artifacts written by the CLI."""
import json
import logging
import math
import re
from pathlib import Path
from typing import Any, TypeVar

import pandas as pd
from pydantic import BaseModel

from .schemas import FidelityTrace

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)

FLOAT_FORMAT = "%.17g"

# finite floats are swapped for tagged strings, then unquoted after dumping
_FLOAT_TAG = "@float17@"
_TAGGED_FLOAT = re.compile(f'"{_FLOAT_TAG}([^"]+)"')


def _plain(payload: Any) -> Any:
    if isinstance(payload, BaseModel):
        return _plain(payload.model_dump(mode="json"))
    if isinstance(payload, dict):
        return {key: _plain(value) for key, value in payload.items()}
    if isinstance(payload, (list, tuple)):
        return [_plain(item) for item in payload]
    if isinstance(payload, float) and math.isfinite(payload):
        text = FLOAT_FORMAT % payload
        # keep integral values typed as floats
        return _FLOAT_TAG + (text if any(c in text for c in ".e") else text + ".0")
    return payload


def write_json(path: Path, payload: Any) -> None:
    """Sorted keys, two-space indent, trailing newline; floats at 17 significant digits."""
    path = Path(path)
    if path.parent != Path("."):
        path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_plain(payload), sort_keys=True, indent=2)
    path.write_text(_TAGGED_FLOAT.sub(r"\1", text) + "\n")
    logger.info("Wrote %s", path)


def read_json(path: Path) -> Any:
    return json.loads(Path(path).read_text())


def read_model(path: Path, model: type[ModelT]) -> ModelT:
    return model.model_validate(read_json(path))


def sidecar_path(csv_path: Path) -> Path:
    return Path(csv_path).with_suffix(".json")


def write_trace_csv(path: Path, trace: FidelityTrace, summary: BaseModel | None = None) -> Path:
    """Grid samples as ``t,fidelity`` rows; argmax and refinement points go to a JSON sidecar."""
    path = Path(path)
    if path.parent != Path("."):
        path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame({"t": trace.times, "fidelity": trace.fidelities})
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    sidecar = sidecar_path(path)
    payload = {
        "argmax_time": trace.argmax_time,
        "argmax_fidelity": trace.argmax_fidelity,
        "refinement_times": trace.refinement_times,
        "refinement_fidelities": trace.refinement_fidelities,
        "samples": len(trace.times),
    }
    if summary is not None:
        payload["summary"] = summary.model_dump(mode="json")
    write_json(sidecar, payload)
    logger.info("Wrote %s (%d samples)", path, len(trace.times))
    return sidecar


def read_trace_csv(path: Path) -> pd.DataFrame:
    return pd.read_csv(path, dtype=float)
