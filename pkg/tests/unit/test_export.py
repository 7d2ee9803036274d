"""Unit tests for the CSV and JSON artifact writers."""

import io
import json

import numpy as np
import pandas as pd

from dynamics.integrator import integrate
from dynamics.state import StateH2
from interface.cli.export import (
    H2_COLUMNS,
    L2_COLUMNS,
    export_region_map_to_csv,
    export_report_to_json,
    export_trajectory_to_csv,
    float_format,
    trajectory_frame,
)
from releq.boundary import pbar_root_report
from releq.collinear import f2_region


def test_float_format_keeps_seventeen_digits():
    """Test the default float format."""
    assert float_format() == "%.17g"


def test_trajectory_csv_layout(two_body_state, tmp_path):
    """Test columns, row count and the trailing diagnostics line."""
    traj = integrate(two_body_state, 0.05, 0.01)
    out = tmp_path / "traj.csv"
    payload = export_trajectory_to_csv(traj, out)
    assert out.read_bytes() == payload
    text = payload.decode()
    lines = text.splitlines()
    assert lines[0] == ",".join(L2_COLUMNS)
    assert lines[-1].startswith("# energy_drift=")
    assert lines[-1].endswith("steps=5")
    for key in ("Lxy_drift=", "Lxz_drift=", "Lyz_drift=", "constraint_drift="):
        assert key in lines[-1]
    frame = pd.read_csv(io.StringIO(text), comment="#")
    assert len(frame) == 2 * len(traj)
    assert frame["body"].tolist()[:2] == [0, 1]


def test_trajectory_values_round_trip_exactly(two_body_state):
    """Test 17 significant digits reproduce the stored floats."""
    traj = integrate(two_body_state, 0.02, 0.01)
    frame = pd.read_csv(io.BytesIO(export_trajectory_to_csv(traj)), comment="#", float_precision="round_trip")
    final = traj.final
    last = frame[frame["t"] == frame["t"].max()]
    np.testing.assert_array_equal(last[["x", "y", "z"]].to_numpy(), final.positions)


def test_halfplane_frame_columns(halfplane_state):
    """Test half-plane trajectories are written with re/im columns."""
    traj = integrate(halfplane_state, 0.01, 0.005)
    frame = trajectory_frame(traj)
    assert list(frame.columns) == H2_COLUMNS
    assert (frame["im"] > 0).all()
    assert isinstance(traj.final, StateH2)


def test_region_csv_has_empty_omega_where_unsolvable():
    """Test cells without a positive mass leave omega_sq_at_solution empty."""
    region = f2_region(2, 2)
    lines = export_region_map_to_csv(region).decode().splitlines()
    assert lines[0] == "alpha,beta,f1,f2,f3,omega_sq_at_solution"
    assert len(lines) == 5
    for line, cell in zip(lines[1:], region.cells):
        last = line.split(",")[-1]
        assert (last == "") == (cell.omega_sq_at_solution is None)


def test_report_json(tmp_path):
    """Test JSON reports end with a newline and keep full precision."""
    report = pbar_root_report()
    out = tmp_path / "root.json"
    payload = export_report_to_json(report, out)
    assert payload.endswith(b"\n")
    data = json.loads(out.read_text())
    assert data["x0"] == report.x0
    assert data["alpha1"] == report.alpha1
