"""
Experiment configuration.

Values are resolved with the precedence command-line flag > JSON config file >
environment > built-in default. The environment is read after python-dotenv
has loaded a `.env` file, if one exists.
"""

import json
import logging
import math
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple, Union

from domain import DEFAULT_FIDELITY_KAPPAS, CircuitLevel, ConfigurationError, OutputFormat, SweepMode

logger = logging.getLogger(__name__)

CONFIG_VERSION = 1
DEFAULT_SHOTS = 8192

COMMANDS = (
    "classical-map",
    "compile",
    "kappa-sweep",
    "phase-grid",
    "oscs",
    "tomo-demo",
    "fidelity",
)

# Per-command defaults layered over the ExperimentConfig field defaults.
COMMAND_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "classical-map": {"kappa": 2.5, "kicks": 150},
    "compile": {"kappa": 2.5, "kicks": 1},
    "kappa-sweep": {"theta": 2.25, "phi": 2.0, "kicks": 200},
    "phase-grid": {"kappa": 2.5, "kicks": 200},
    "oscs": {"theta": math.pi / 2, "phi": 0.0, "kappa": 2.5, "kicks": 50},
    "tomo-demo": {"theta": 2.25, "phi": 2.0, "kappa": 2.5, "kicks": 1, "mode": SweepMode.SHOTS},
    "fidelity": {"kicks": 50, "mode": SweepMode.NOISY, "p1": 0.001, "p2": 0.01},
}

DEFAULT_KAPPA_GRID = tuple(0.5 * i for i in range(25))


def _env_int(environ: Mapping[str, str], name: str, default: int) -> int:
    raw = environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise ConfigurationError(f"Environment variable {name} must be an integer, got '{raw}'") from e


@dataclass(frozen=True)
class Settings:
    """Process-wide defaults taken from the environment."""
    log_level: str = "INFO"
    log_file: Optional[str] = None
    jobs: int = 1
    seed: int = 0
    shots: int = DEFAULT_SHOTS

    def __post_init__(self) -> None:
        if self.log_level.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ConfigurationError(f"Unknown log level '{self.log_level}'")
        if self.jobs < 1:
            raise ConfigurationError(f"KICKED_TOP_JOBS must be at least 1, got {self.jobs}")
        if self.shots < 1:
            raise ConfigurationError(f"KICKED_TOP_SHOTS must be at least 1, got {self.shots}")

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "Settings":
        env = os.environ if environ is None else environ
        return cls(
            log_level=env.get("KICKED_TOP_LOG_LEVEL", "INFO").upper(),
            log_file=env.get("KICKED_TOP_LOG_FILE") or None,
            jobs=_env_int(env, "KICKED_TOP_JOBS", 1),
            seed=_env_int(env, "KICKED_TOP_SEED", 0),
            shots=_env_int(env, "KICKED_TOP_SHOTS", DEFAULT_SHOTS),
        )


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved parameters of one command run. Angles are in radians."""
    command: str
    kappa: float = 2.5
    kappas: Optional[Tuple[float, ...]] = None
    p: float = math.pi / 2
    theta: Optional[float] = None
    phi: Optional[float] = None
    grid_theta: int = 17
    grid_phi: int = 17
    kicks: int = 1
    mode: SweepMode = SweepMode.EXACT
    shots: int = DEFAULT_SHOTS
    p1: float = 0.0
    p2: float = 0.0
    seed: int = 0
    jobs: int = 1
    out: str = "."
    format: OutputFormat = OutputFormat.CSV
    level: CircuitLevel = CircuitLevel.ROTATION
    mkdirs: bool = False
    prune: bool = False
    per_kick: bool = False
    stamp: bool = False
    verify_netlist: Optional[str] = None
    oscs_resolution: Tuple[int, int] = (181, 360)
    version: int = CONFIG_VERSION

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigurationError(f"Unknown command '{self.command}'")
        if self.version != CONFIG_VERSION:
            raise ConfigurationError(f"Unsupported config version {self.version}")
        for name in ("kappa", "p"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigurationError(f"{name} must be finite")
        if self.kappa < 0:
            raise ConfigurationError(f"kappa must be non-negative, got {self.kappa}")
        if self.kappas is not None:
            if not self.kappas:
                raise ConfigurationError("kappas must not be empty")
            if any(not math.isfinite(k) or k < 0 for k in self.kappas):
                raise ConfigurationError("kappas must be finite and non-negative")
        if self.theta is not None and not (0.0 <= self.theta <= math.pi):
            raise ConfigurationError(f"theta must lie in [0, pi], got {self.theta}")
        if self.phi is not None and not math.isfinite(self.phi):
            raise ConfigurationError("phi must be finite")
        if (self.theta is None) != (self.phi is None):
            raise ConfigurationError("theta and phi must be given together")
        if self.grid_theta < 1 or self.grid_phi < 1:
            raise ConfigurationError("grid dimensions must be positive")
        if self.kicks < 0:
            raise ConfigurationError(f"kicks must be non-negative, got {self.kicks}")
        if self.shots < 1:
            raise ConfigurationError(f"shots must be at least 1, got {self.shots}")
        for name in ("p1", "p2"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise ConfigurationError(f"{name} must lie in [0, 1], got {value}")
        if self.jobs < 1:
            raise ConfigurationError(f"jobs must be at least 1, got {self.jobs}")
        if self.level is CircuitLevel.TEMPLATE:
            raise ConfigurationError("level must be rotation or ibmq")
        n_theta, n_phi = self.oscs_resolution
        if n_theta < 2 or n_phi < 1:
            raise ConfigurationError(f"oscs_resolution too small: {self.oscs_resolution}")

    @property
    def out_dir(self) -> Path:
        return Path(self.out)

    def to_dict(self) -> Dict[str, Any]:
        """Plain JSON-compatible view, suitable for writing back as a config file."""
        data: Dict[str, Any] = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, (SweepMode, OutputFormat, CircuitLevel)):
                value = value.value
            elif isinstance(value, tuple):
                value = list(value)
            data[f.name] = value
        return data


FIELD_NAMES = frozenset(f.name for f in fields(ExperimentConfig))


def _coerce(name: str, value: Any) -> Any:
    """Turn JSON/CLI values into the types ExperimentConfig stores."""
    try:
        if name == "mode":
            return value if isinstance(value, SweepMode) else SweepMode(value)
        if name == "format":
            return value if isinstance(value, OutputFormat) else OutputFormat(value)
        if name == "level":
            return value if isinstance(value, CircuitLevel) else CircuitLevel(value)
        if name == "kappas":
            return None if value is None else tuple(float(k) for k in value)
        if name == "oscs_resolution":
            n_theta, n_phi = value
            return int(n_theta), int(n_phi)
        if name in ("kappa", "p", "p1", "p2"):
            return float(value)
        if name in ("theta", "phi"):
            return None if value is None else float(value)
        if name in ("grid_theta", "grid_phi", "kicks", "shots", "seed", "jobs", "version"):
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise ValueError(f"expected an integer, got {value!r}")
            return int(value)
        if name in ("mkdirs", "prune", "per_kick", "stamp"):
            if not isinstance(value, bool):
                raise ValueError(f"expected true or false, got {value!r}")
            return value
        if name in ("out", "command"):
            return str(value)
        return value
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"Invalid value for '{name}': {e}") from e


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a JSON config file.

    The document must be an object with "version": 1; every other key must
    name an ExperimentConfig field.

    Raises:
        ConfigurationError: on unreadable files, bad JSON, a wrong version or unknown keys
    """
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as e:
        raise ConfigurationError(f"Cannot read config file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Config file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"Config file {path} must contain a JSON object")
    if data.get("version") != CONFIG_VERSION:
        raise ConfigurationError(
            f"Config file {path} must declare \"version\": {CONFIG_VERSION}, got {data.get('version')!r}"
        )
    unknown = sorted(set(data) - FIELD_NAMES)
    if unknown:
        raise ConfigurationError(f"Unknown config keys: {', '.join(unknown)}")
    return {key: _coerce(key, value) for key, value in data.items()}


def build_config(
    command: str,
    cli_values: Optional[Mapping[str, Any]] = None,
    file_values: Optional[Mapping[str, Any]] = None,
    settings: Optional[Settings] = None,
) -> ExperimentConfig:
    """Resolve an ExperimentConfig from its layered sources.

    Args:
        command: subcommand name
        cli_values: flags given explicitly on the command line
        file_values: values from load_config_file
        settings: environment defaults

    Returns:
        ExperimentConfig: validated configuration

    Raises:
        ConfigurationError: on unknown keys or invalid values
    """
    if command not in COMMANDS:
        raise ConfigurationError(f"Unknown command '{command}'")
    settings = settings or Settings()
    merged: Dict[str, Any] = {"jobs": settings.jobs, "seed": settings.seed, "shots": settings.shots}
    merged.update(COMMAND_DEFAULTS[command])
    for source in (file_values or {}, cli_values or {}):
        unknown = sorted(set(source) - FIELD_NAMES)
        if unknown:
            raise ConfigurationError(f"Unknown config keys: {', '.join(unknown)}")
        merged.update({key: _coerce(key, value) for key, value in source.items()})
    merged["command"] = command
    config = ExperimentConfig(**merged)
    logger.debug(f"Resolved configuration for {command}: {config.to_dict()}")
    return config


def kappa_grid(config: ExperimentConfig) -> Tuple[float, ...]:
    """kappa values of a sweep: explicit list, else the command's default grid."""
    if config.kappas is not None:
        return config.kappas
    if config.command == "fidelity":
        return DEFAULT_FIDELITY_KAPPAS
    return DEFAULT_KAPPA_GRID


def parse_kappas(text: str) -> Tuple[float, ...]:
    """Parse 'a,b,c' or an inclusive range 'start:stop:step'.

    Raises:
        ConfigurationError: on malformed input
    """
    try:
        if ":" in text:
            start, stop, step = (float(part) for part in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError("range needs start <= stop and a positive step")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return tuple(round(start + i * step, 12) for i in range(count))
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as e:
        raise ConfigurationError(f"Invalid kappa list '{text}': {e}") from e
