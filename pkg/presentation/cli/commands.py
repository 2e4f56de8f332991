"""
Command handlers. Each takes a resolved ExperimentConfig, runs the
computation and returns the paths it wrote.
"""

import logging
import math
from pathlib import Path
from typing import Callable, Dict, List

from application.services.classical_map import grid_phis, grid_thetas, phase_grid, stroboscopic_map
from application.services.diagnostics import entanglement_summary, fidelity
from application.services.floquet import effective_unitary
from application.services.spin_algebra import scs_to_qubits
from application.services.sweeps import SweepRunner, fidelity_trend
from application.services.synthesis import (
    CNOT_COUNT,
    RECONSTRUCTION_TOLERANCE,
    ROTATION_GATE_COUNT,
    compile_qkt,
    parse_netlist,
    prune_identities,
    reconstruction_error,
    to_netlist,
)
from config import ExperimentConfig, kappa_grid
from domain import (
    DEFAULT_FIDELITY_POINTS,
    CircuitLevel,
    ConfigurationError,
    GateSequence,
    KickedTopParams,
    NoiseConfig,
    OutputFormat,
    PhasePoint,
    QuantumState,
    SweepMode,
    VerificationError,
)
from infrastructure import storage
from infrastructure.backends import create_backend
from infrastructure.executor import create_executor
from infrastructure.simulator import run_circuit, run_noisy
from infrastructure.tomography import measure_all_bases, tomography

logger = logging.getLogger(__name__)


def _point(config: ExperimentConfig) -> PhasePoint:
    if config.theta is None or config.phi is None:
        raise ConfigurationError(f"{config.command} needs --theta and --phi")
    return PhasePoint(config.theta, config.phi)


def _params(config: ExperimentConfig, kappa: float) -> KickedTopParams:
    return KickedTopParams(kappa=kappa, p=config.p)


def _noise(config: ExperimentConfig) -> NoiseConfig:
    return NoiseConfig(p1=config.p1, p2=config.p2, seed=config.seed)


def _runner(config: ExperimentConfig, tomograph_noisy: bool = False) -> SweepRunner:
    """Backend and worker pool for a sweep command.

    Noisy sweeps use the exact noisy density matrix unless `tomograph_noisy`
    asks for simulated tomography on top.
    """
    if config.mode is SweepMode.SHOTS or tomograph_noisy:
        shots = config.shots
    else:
        shots = None
    backend = create_backend(config.mode, shots=shots, noise=_noise(config), level=config.level)
    return SweepRunner(backend, create_executor(config.jobs), seed=config.seed, p=config.p)


def _close(runner: SweepRunner) -> None:
    if runner.executor is not None:
        runner.executor.shutdown()


def _out(config: ExperimentConfig) -> Path:
    return storage.ensure_output_dir(config.out_dir, config.mkdirs)


def cmd_classical_map(config: ExperimentConfig) -> List[Path]:
    """Stroboscopic trajectories for one point or the (theta, phi) lattice."""
    if not math.isclose(config.p, math.pi / 2):
        raise ConfigurationError("The classical map is defined for p = pi/2 only")
    out = _out(config)
    if config.theta is not None and config.phi is not None:
        points = [PhasePoint(config.theta, config.phi)]
    else:
        points = phase_grid(config.grid_theta, config.grid_phi)
    logger.info(f"classical map: {len(points)} points, kappa={config.kappa}, {config.kicks} kicks")
    trajectories = stroboscopic_map(points, config.kappa, config.kicks)
    if config.format is OutputFormat.CSV:
        return [storage.write_text(out, "classical_map.csv", storage.trajectories_to_csv(trajectories))]
    fixed = {"kappa": config.kappa, "n_kicks": config.kicks}
    return [storage.write_text(out, "classical_map.json", storage.trajectories_to_json(trajectories, fixed))]


def _check_counts(sequence: GateSequence) -> None:
    if sequence.cnot_count != CNOT_COUNT:
        raise VerificationError(f"Circuit has {sequence.cnot_count} CNOTs, expected {CNOT_COUNT}")
    if sequence.level is CircuitLevel.ROTATION and len(sequence) != ROTATION_GATE_COUNT:
        raise VerificationError(f"Circuit has {len(sequence)} gates, expected {ROTATION_GATE_COUNT}")


def _verify_netlist(config: ExperimentConfig, out: Path) -> List[Path]:
    path = Path(config.verify_netlist or "")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"Cannot read netlist {path}: {e}") from e
    sequence = parse_netlist(text)
    target = effective_unitary(_params(config, config.kappa), config.kicks)
    error = reconstruction_error(sequence, target)
    report = {
        "netlist": str(path),
        "kappa": config.kappa,
        "p": config.p,
        "kicks": config.kicks,
        "level": sequence.level.value,
        "reconstruction_error": error,
        "tolerance": RECONSTRUCTION_TOLERANCE,
        "counts": sequence.counts(),
        "passed": error <= RECONSTRUCTION_TOLERANCE,
    }
    written = [storage.write_json(out, "verify_report.json", report)]
    if error > RECONSTRUCTION_TOLERANCE:
        raise VerificationError(
            f"Netlist {path} misses U^{config.kicks} by {error:.3e} (tolerance {RECONSTRUCTION_TOLERANCE:.0e})"
        )
    logger.info(f"Netlist {path} verified, error {error:.3e}")
    return written


def cmd_compile(config: ExperimentConfig) -> List[Path]:
    """Netlist of U^N plus a JSON verification report."""
    out = _out(config)
    if config.verify_netlist:
        return _verify_netlist(config, out)

    params = _params(config, config.kappa)
    sequence = compile_qkt(params, config.kicks, config.level)
    error = reconstruction_error(sequence, effective_unitary(params, config.kicks))
    if error > RECONSTRUCTION_TOLERANCE:
        raise VerificationError(f"Compiled circuit misses U^{config.kicks} by {error:.3e}")
    _check_counts(sequence)

    written = sequence
    if config.prune:
        written = prune_identities(sequence)
        logger.info(f"Pruned {len(sequence) - len(written)} identity rotations")
    header = {"kappa": config.kappa, "p": config.p, "kicks": config.kicks}
    netlist_name = f"circuit_{config.level.value}.txt"
    report = {
        **header,
        "level": config.level.value,
        "reconstruction_error": error,
        "tolerance": RECONSTRUCTION_TOLERANCE,
        "counts": sequence.counts(),
        "pruned": config.prune,
        "written_counts": written.counts(),
        "netlist": netlist_name,
    }
    return [
        storage.write_text(out, netlist_name, to_netlist(written, header)),
        storage.write_json(out, "compile_report.json", report),
    ]


def cmd_kappa_sweep(config: ExperimentConfig) -> List[Path]:
    """Time-averaged concurrence against kappa, or the full kappa x kick map."""
    out = _out(config)
    runner = _runner(config)
    try:
        point = _point(config)
        kappas = kappa_grid(config)
        if config.per_kick:
            result = runner.kappa_kick_map(point, kappas, config.kicks)
            stem = "kappa_kick_map"
        else:
            result = runner.kappa_sweep(point, kappas, config.kicks)
            stem = "kappa_sweep"
    finally:
        _close(runner)
    return [storage.write_sweep(result, out, stem, config.format, config.stamp)]


def cmd_phase_grid(config: ExperimentConfig) -> List[Path]:
    """Time-averaged concurrence over the (theta, phi) lattice of initial points."""
    out = _out(config)
    runner = _runner(config)
    try:
        result = runner.phase_grid_sweep(
            config.kappa, grid_thetas(config.grid_theta), grid_phis(config.grid_phi), config.kicks
        )
    finally:
        _close(runner)
    return [storage.write_sweep(result, out, "phase_grid", config.format, config.stamp)]


def cmd_oscs(config: ExperimentConfig) -> List[Path]:
    """O_SCS along the exact evolution, plus the concurrence after every kick."""
    out = _out(config)
    runner = _runner(config)
    try:
        point = _point(config)
        localization = runner.oscs_series(point, config.kappa, config.kicks, config.oscs_resolution)
        entanglement = runner.concurrence_series(point, config.kappa, config.kicks)
    finally:
        _close(runner)
    return [
        storage.write_sweep(localization, out, "oscs", config.format, config.stamp),
        storage.write_sweep(entanglement, out, "concurrence", config.format, config.stamp),
    ]


def cmd_tomo_demo(config: ExperimentConfig) -> List[Path]:
    """Evolve, tomograph over nine bases and compare with the exact state."""
    out = _out(config)
    point = _point(config)
    params = _params(config, config.kappa)
    circuit = compile_qkt(params, config.kicks, config.level)
    initial = scs_to_qubits(point)
    ideal = run_circuit(circuit, initial)
    measured: QuantumState = ideal
    if config.mode is SweepMode.NOISY:
        measured = run_noisy(circuit, initial.to_density(), _noise(config))
    records = measure_all_bases(measured, config.shots, config.seed)
    reconstructed = tomography(records)
    value = fidelity(reconstructed, ideal)
    logger.info(f"Tomography fidelity {value:.6f} with {config.shots} shots per basis")
    summary = {
        "theta": point.theta,
        "phi": point.phi,
        "kappa": config.kappa,
        "p": config.p,
        "kicks": config.kicks,
        "mode": config.mode.value,
        "shots": config.shots,
        "seed": config.seed,
        "fidelity": value,
        "reconstructed_entanglement": entanglement_summary(reconstructed),
        "ideal_entanglement": entanglement_summary(ideal),
        "reconstructed": storage.density_to_dict(reconstructed.entries),
        "ideal": storage.density_to_dict(ideal.to_density().entries),
    }
    if config.mode is SweepMode.NOISY:
        summary.update({"p1": config.p1, "p2": config.p2})
    return [
        storage.write_shot_records(out, records),
        storage.write_json(out, "density_matrix.json", summary),
    ]


def cmd_fidelity(config: ExperimentConfig) -> List[Path]:
    """Fidelity of tomographed states against kick number, with its fitted trend."""
    out = _out(config)
    if config.kicks < 1:
        raise ConfigurationError("fidelity needs at least one kick")
    if config.mode is SweepMode.EXACT:
        logger.warning("fidelity in exact mode compares each state with itself; --shots is ignored and every value is 1")
    points = [_point(config)] if config.theta is not None else list(DEFAULT_FIDELITY_POINTS)
    runner = _runner(config, tomograph_noisy=True)
    try:
        result = runner.fidelity_sweep(points, kappa_grid(config), range(1, config.kicks + 1))
    finally:
        _close(runner)
    written = [storage.write_sweep(result, out, "fidelity", config.format, config.stamp)]
    if config.kicks >= 3:
        trend = fidelity_trend(result)
        logger.info(f"Fidelity slope {trend.slope:.3e} +/- {trend.stderr:.3e} per kick")
        written.append(storage.write_json(out, "fidelity_trend.json", {**trend.to_dict(), "flat": trend.is_flat()}))
    return written


COMMAND_HANDLERS: Dict[str, Callable[[ExperimentConfig], List[Path]]] = {
    "classical-map": cmd_classical_map,
    "compile": cmd_compile,
    "kappa-sweep": cmd_kappa_sweep,
    "phase-grid": cmd_phase_grid,
    "oscs": cmd_oscs,
    "tomo-demo": cmd_tomo_demo,
    "fidelity": cmd_fidelity,
}
