"""CSV and JSON artifact writers for the command line."""

import io
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel

from core.config import settings
from dynamics.forces import total_energy
from dynamics.state import StateH2, Trajectory
from hypergeom.conversion import halfplane_to_hyperboloid
from hypergeom.minkowski import minkowski_dot
from releq.schemas import RegionMap

L2_COLUMNS = ["t", "body", "x", "y", "z", "vx", "vy", "vz", "energy", "constraint_drift"]
H2_COLUMNS = ["t", "body", "re", "im", "vre", "vim", "energy", "constraint_drift"]


def float_format() -> str:
    return f"%.{settings.OUTPUT_DIGITS}g"


def _write(payload: bytes, output_path: Path | str | None) -> bytes:
    if output_path:
        Path(output_path).write_bytes(payload)
    return payload


def trajectory_frame(trajectory: Trajectory) -> pd.DataFrame:
    """One row per (time, body); energy is the total energy at that time."""
    rows = []
    for t, state in zip(trajectory.times, trajectory.states):
        energy = total_energy(state)
        if isinstance(state, StateH2):
            Q = np.asarray(halfplane_to_hyperboloid(state.positions))
            defect = np.abs(np.asarray(minkowski_dot(Q, Q)) + 1.0)
            for k, (w, wd) in enumerate(zip(state.positions, state.velocities)):
                rows.append([t, k, w.real, w.imag, wd.real, wd.imag, energy, defect[k]])
        else:
            Q, V = state.positions, state.velocities
            defect = np.abs(np.asarray(minkowski_dot(Q, Q)) + 1.0)
            for k in range(state.n):
                rows.append([t, k, *Q[k], *V[k], energy, defect[k]])
    columns = H2_COLUMNS if trajectory.states and isinstance(trajectory.states[0], StateH2) else L2_COLUMNS
    return pd.DataFrame(rows, columns=columns)


def export_trajectory_to_csv(trajectory: Trajectory, output_path: Path | str | None = None) -> bytes:
    """Export a trajectory to CSV with a trailing ``# energy_drift=…`` diagnostics line.

    Args:
        trajectory: Integrated (possibly partial) trajectory.
        output_path: Optional path to save the CSV file.

    Returns:
        CSV content as bytes
    """
    buffer = io.StringIO()
    trajectory_frame(trajectory).to_csv(buffer, index=False, float_format=float_format())
    d = trajectory.diagnostics
    if d is not None:
        fmt = float_format()
        summary = " ".join(
            f"{key}={fmt % value}"
            for key, value in (
                ("energy_drift", d.energy_drift),
                ("Lxy_drift", d.lxy_drift),
                ("Lxz_drift", d.lxz_drift),
                ("Lyz_drift", d.lyz_drift),
                ("constraint_drift", d.constraint_drift),
            )
        )
        buffer.write(f"# {summary} steps={d.steps}\n")
    return _write(buffer.getvalue().encode("utf-8"), output_path)


def export_region_map_to_csv(region: RegionMap, output_path: Path | str | None = None) -> bytes:
    """Export the f2 sign map; omega_sq_at_solution is empty where no positive m exists."""
    return _write(region.to_csv(float_format=float_format()).encode("utf-8"), output_path)


def export_report_to_json(report: BaseModel, output_path: Path | str | None = None) -> bytes:
    """Serialize a report model; floats keep their shortest round-trip repr."""
    return _write((report.model_dump_json(indent=2) + "\n").encode("utf-8"), output_path)
