import numpy as np
import pytest

from wallplot.io import PlotDataError, last_density, read_density, read_meta, read_series


class TestReaders:
    def test_round_trip_synthetic(self, synthetic_run):
        grid = last_density(synthetic_run)
        assert grid.values.shape == (12, 10)
        assert grid.step == 5 and grid.time == 0.5
        assert np.isclose(grid.values.sum(), 1.0)
        assert grid.coordinates(0)[6] == 0.0
        series = read_series(synthetic_run, require_sigma=True)
        assert len(series["t"]) == 8

    def test_missing_meta_names_file(self, tmp_path):
        with pytest.raises(PlotDataError, match="meta.json"):
            read_meta(tmp_path)

    def test_corrupt_meta(self, synthetic_run):
        (synthetic_run / "meta.json").write_text("{nope")
        with pytest.raises(PlotDataError, match="corrupt JSON"):
            read_meta(synthetic_run)

    def test_series_bad_cell_names_line(self, synthetic_run):
        path = synthetic_run / "series.csv"
        path.write_text(path.read_text().replace("0.30000000000000004", "zero", 1)
                        if "0.30000000000000004" in path.read_text()
                        else path.read_text().replace("1.0,0.0", "one,0.0", 1))
        with pytest.raises(PlotDataError, match="line"):
            read_series(synthetic_run)

    def test_series_ragged_row_rejected(self, synthetic_run):
        path = synthetic_run / "series.csv"
        path.write_text(path.read_text() + "9,0.9,1.0\n")
        with pytest.raises(PlotDataError, match="cells"):
            read_series(synthetic_run)

    def test_density_header_required(self, synthetic_run):
        path = synthetic_run / "density_j0005.csv"
        body = path.read_text().splitlines()[1:]
        path.write_text("\n".join(body) + "\n")
        with pytest.raises(PlotDataError, match="not a density grid"):
            read_density(path)

    def test_density_size_mismatch(self, synthetic_run):
        path = synthetic_run / "density_j0005.csv"
        lines = path.read_text().splitlines()
        path.write_text("\n".join(lines[:-2]) + "\n")
        with pytest.raises(PlotDataError, match="promises"):
            read_density(path)

    def test_empty_density_rejected(self, synthetic_run):
        path = synthetic_run / "density_j0005.csv"
        path.write_text(path.read_text().splitlines()[0] + "\n")
        with pytest.raises(PlotDataError):
            read_density(path)

    def test_run_without_snapshots(self, synthetic_run):
        (synthetic_run / "meta.json").write_text(
            '{"outputs": {"densities": [], "series": "series.csv"}}'
        )
        with pytest.raises(PlotDataError, match="no density snapshots"):
            last_density(synthetic_run)
