import subprocess

import numpy as np
import pytest


def run_cli(*args):
    proc = subprocess.run(["wallwalk", *args], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def fig1_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig1")
    run_cli("run", "--preset", "fig1", "--steps", "30", "--out-dir", str(out))
    return out


@pytest.fixture(scope="session")
def fig2_pair(tmp_path_factory):
    walled = tmp_path_factory.mktemp("fig2_walled")
    free = tmp_path_factory.mktemp("fig2_free")
    run_cli("run", "--preset", "fig2", "--steps", "60", "--out-dir", str(walled))
    run_cli("run", "--preset", "fig2", "--steps", "60", "--mass", "0", "--out-dir", str(free))
    return walled, free


@pytest.fixture(scope="session")
def fig4_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig4")
    run_cli("run", "--preset", "fig4", "--out-dir", str(out))
    return out


@pytest.fixture
def synthetic_run(tmp_path):
    """Hand-written run directory in the documented file formats."""
    rows, cols = 12, 10
    grid = np.full((rows, cols), 1.0 / (rows * cols))
    lines = [f"# density j=5 t=0.5 shape={rows},{cols} epsilon=0.1 origin=6,5 layout=row-major"]
    lines += [",".join(format(v, ".17e") for v in row) for row in grid]
    (tmp_path / "density_j0005.csv").write_text("\n".join(lines) + "\n")

    series = ["j,t,norm,mean_x,mean_y,sigma_x,sigma_y"]
    for j in range(1, 9):
        t = 0.1 * j
        series.append(f"{j},{t},1.0,0.0,0.0,{0.3 * t},{0.2 * t}")
    (tmp_path / "series.csv").write_text("\n".join(series) + "\n")

    meta = (
        '{"config": {"mass": 1.0}, "outputs": {"densities": ["density_j0005.csv"],'
        ' "series": "series.csv"}, "tool": "wallwalk", "version": "0.1.0"}'
    )
    (tmp_path / "meta.json").write_text(meta)
    return tmp_path
