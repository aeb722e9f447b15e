"""
Report Writing

Deterministic JSON (sorted keys, fixed float precision, no timestamps) and
pandas CSV output, plus the run manifest that ties a report to its inputs.
"""

import hashlib
import json
import math
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Sequence

import pandas as pd
import typer
from pydantic import BaseModel

from src import __version__
from src.config import FLOAT_SIGNIFICANT_DIGITS, TOOL_NAME
from src.utils.logger import logger

_FLOAT_FORMAT = f"%.{FLOAT_SIGNIFICANT_DIGITS}g"


def format_float(value: float) -> Optional[float]:
    """Round to the report precision; NaN and infinities become null."""
    if math.isnan(value) or math.isinf(value):
        return None
    return float(_FLOAT_FORMAT % value)


def normalize(value: Any) -> Any:
    """Recursively turn models, enums, tuples and floats into stable JSON values."""
    if isinstance(value, BaseModel):
        return normalize(value.model_dump(mode="python"))
    if isinstance(value, Mapping):
        return {str(normalize_key(key)): normalize(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [normalize(item) for item in value]
        return sorted(items) if isinstance(value, (set, frozenset)) else items
    if isinstance(value, bool) or value is None:
        return value
    if hasattr(value, "value") and isinstance(getattr(value, "value"), (str, int)):
        return value.value
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, Path):
        return str(value)
    if hasattr(value, "item"):
        # numpy scalars
        return normalize(value.item())
    return value


def normalize_key(key: Any) -> Any:
    if hasattr(key, "value") and isinstance(getattr(key, "value"), (str, int)):
        return key.value
    if isinstance(key, tuple):
        return "/".join(str(part) for part in key)
    return key


def render_json(payload: Any) -> str:
    return json.dumps(normalize(payload), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def file_sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as handle:
        for block in iter(lambda: handle.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()


def run_manifest(
    command: str, flags: Mapping[str, Any], inputs: Sequence[Optional[Path]]
) -> Dict[str, Any]:
    """Tool version, command, flags and the sha256 of every input file."""
    return {
        "tool": TOOL_NAME,
        "version": __version__,
        "command": command,
        "flags": {name: normalize(value) for name, value in flags.items()},
        "inputs": {str(path): file_sha256(path) for path in inputs if path is not None},
    }


def write_json(payload: Any, out: Optional[Path]) -> None:
    """Write a report to ``out``, or to stdout when no path is given."""
    text = render_json(payload)
    if out is None:
        typer.echo(text, nl=False)
        return

    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    logger.info(f"Wrote report to {out}")


def write_csv(frame: pd.DataFrame, out: Optional[Path]) -> None:
    if out is None:
        return
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out, index=False, float_format=_FLOAT_FORMAT, lineterminator="\n")
    logger.info(f"Wrote {len(frame)} CSV rows to {out}")
