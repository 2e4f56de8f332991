"""
File output: sweep results, trajectories, netlists and tomography artifacts.

Every file is written once through a temporary file in the target directory
followed by os.replace, so readers never see a partially written file.
"""

import csv
import io
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Union

import numpy as np

from application.services.classical_map import sphere_to_angles
from domain import ClassicalState, ConfigurationError, OutputFormat, ShotRecord, SweepResult

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def ensure_output_dir(path: PathLike, mkdirs: bool = True) -> Path:
    """Return the output directory, creating it when allowed.

    Raises:
        ConfigurationError: if the directory is missing and mkdirs is False,
            or the path exists but is not a directory
    """
    directory = Path(path)
    if directory.exists():
        if not directory.is_dir():
            raise ConfigurationError(f"Output path {directory} is not a directory")
        return directory
    if not mkdirs:
        raise ConfigurationError(f"Output directory {directory} does not exist (pass --mkdirs to create it)")
    directory.mkdir(parents=True, exist_ok=True)
    logger.info(f"Created output directory {directory}")
    return directory


def atomic_write_text(path: PathLike, text: str) -> Path:
    target = Path(path)
    fd, temp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(temp_name, target)
    except BaseException:
        if os.path.exists(temp_name):
            os.unlink(temp_name)
        raise
    logger.info(f"Wrote {target}")
    return target


def format_value(value: Any) -> str:
    """15 significant digits for floats, plain text for everything else."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.15g}"
    return str(value)


def to_jsonable(value: Any) -> Any:
    """Convert numpy scalars and arrays into plain JSON types."""
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, complex):
        return {"real": value.real, "imag": value.imag}
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def sweep_to_csv(result: SweepResult) -> str:
    """Long format: axis columns, then constant columns for fixed parameters, then value."""
    fixed_keys = list(result.fixed)
    fixed_values = [result.fixed[k] for k in fixed_keys]
    header = result.axis_names + fixed_keys + ["value"]
    rows = (list(coords) + fixed_values + [value] for coords, value in result.cells())
    return _csv_text(header, rows)


def sweep_to_dict(result: SweepResult, stamp: bool = False) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "observable": result.observable.value,
        "axes": [{"name": name, "values": to_jsonable(list(values))} for name, values in result.axes],
        "values": to_jsonable(result.values),
        "fixed": to_jsonable(result.fixed),
        "metadata": to_jsonable(result.metadata),
    }
    if stamp:
        data["created_at"] = result.created_at.isoformat()
    return data


def sweep_to_json(result: SweepResult, stamp: bool = False) -> str:
    """JSON document with axes, value matrix and metadata.

    The creation timestamp is only included when `stamp` is set, so repeated
    runs produce byte-identical files by default.
    """
    return json.dumps(sweep_to_dict(result, stamp), indent=2) + "\n"


def write_sweep(
    result: SweepResult,
    directory: PathLike,
    stem: str,
    fmt: OutputFormat = OutputFormat.CSV,
    stamp: bool = False,
) -> Path:
    path = Path(directory) / f"{stem}.{fmt.value}"
    text = sweep_to_csv(result) if fmt is OutputFormat.CSV else sweep_to_json(result, stamp)
    return atomic_write_text(path, text)


def trajectory_rows(trajectories: Sequence[Sequence[ClassicalState]]) -> List[List[Any]]:
    rows: List[List[Any]] = []
    for index, trajectory in enumerate(trajectories):
        for kick, state in enumerate(trajectory):
            angles = sphere_to_angles(state)
            rows.append([index, kick, state.x, state.y, state.z, angles.theta, angles.phi])
    return rows


def trajectories_to_csv(trajectories: Sequence[Sequence[ClassicalState]]) -> str:
    """Columns point, kick, x, y, z, theta, phi; points in input order."""
    header = ["point", "kick", "x", "y", "z", "theta", "phi"]
    return _csv_text(header, trajectory_rows(trajectories))


def trajectories_to_json(trajectories: Sequence[Sequence[ClassicalState]], fixed: Mapping[str, Any]) -> str:
    keys = ["point", "kick", "x", "y", "z", "theta", "phi"]
    rows = [dict(zip(keys, row)) for row in trajectory_rows(trajectories)]
    return json.dumps({"fixed": to_jsonable(fixed), "rows": to_jsonable(rows)}, indent=2) + "\n"


def write_json(directory: PathLike, name: str, data: Any) -> Path:
    return atomic_write_text(Path(directory) / name, json.dumps(to_jsonable(data), indent=2) + "\n")


def write_text(directory: PathLike, name: str, text: str) -> Path:
    return atomic_write_text(Path(directory) / name, text)


def write_shot_records(directory: PathLike, records: Iterable[ShotRecord], name: str = "shots.json") -> Path:
    return write_json(directory, name, [record.to_dict() for record in records])


def read_shot_records(path: PathLike) -> List[ShotRecord]:
    with open(path, encoding="utf-8") as handle:
        return [ShotRecord.from_dict(item) for item in json.load(handle)]


def density_to_dict(matrix: np.ndarray) -> Dict[str, Any]:
    """Real and imaginary parts as nested lists."""
    matrix = np.asarray(matrix, dtype=complex)
    return {"real": matrix.real.tolist(), "imag": matrix.imag.tolist()}
