import numpy as np
import pytest

from wallplot.cli import main
from wallplot.io import PlotDataError
from wallplot.render import PlotJob, render_heatmap, render_sigma_curves


class TestHeatmap:
    def test_uniform_grid_gives_flat_marginals(self, synthetic_run, tmp_path):
        out = tmp_path / "h.png"
        fig = render_heatmap(PlotJob(run_dirs=(synthetic_run,), kind="density-heatmap", output=out))
        assert out.exists() and out.stat().st_size > 0
        inset = fig.axes[0].child_axes[0]
        lines = inset.get_lines()
        assert len(lines) == 2
        for line in lines:
            y = line.get_ydata()
            assert np.allclose(y, y[0])

    def test_missing_density_fails_without_partial_image(self, synthetic_run, tmp_path):
        (synthetic_run / "density_j0005.csv").unlink()
        out = tmp_path / "h.png"
        with pytest.raises(PlotDataError, match="density_j0005.csv"):
            render_heatmap(PlotJob(run_dirs=(synthetic_run,), kind="density-heatmap", output=out))
        assert not out.exists()

    def test_rerender_is_byte_identical(self, synthetic_run, tmp_path):
        job_a = PlotJob(run_dirs=(synthetic_run,), kind="density-heatmap", output=tmp_path / "a.png")
        job_b = PlotJob(run_dirs=(synthetic_run,), kind="density-heatmap", output=tmp_path / "b.png")
        render_heatmap(job_a)
        render_heatmap(job_b)
        assert (tmp_path / "a.png").read_bytes() == (tmp_path / "b.png").read_bytes()


class TestSigmaCurves:
    def test_constant_ratio_series_gives_horizontal_line(self, synthetic_run, tmp_path):
        out = tmp_path / "s.png"
        fig = render_sigma_curves(PlotJob(run_dirs=(synthetic_run,), kind="sigma-curves", output=out))
        main_axis = fig.axes[0]
        y = main_axis.get_lines()[0].get_ydata()
        assert np.allclose(y, y[0])  # sigma_y = 0.2 t exactly
        assert out.exists()

    def test_single_record_series_renders(self, synthetic_run, tmp_path):
        (synthetic_run / "series.csv").write_text(
            "j,t,norm,mean_x,mean_y,sigma_x,sigma_y\n1,0.1,1.0,0.0,0.0,0.05,0.04\n"
        )
        out = tmp_path / "one.png"
        fig = render_sigma_curves(PlotJob(run_dirs=(synthetic_run,), kind="sigma-curves", output=out))
        assert len(fig.axes[0].get_lines()[0].get_ydata()) == 1
        assert out.exists()

    def test_missing_sigma_columns_rejected(self, synthetic_run, tmp_path):
        (synthetic_run / "series.csv").write_text("j,t,norm\n1,0.1,1.0\n")
        with pytest.raises(PlotDataError, match="sigma"):
            render_sigma_curves(
                PlotJob(run_dirs=(synthetic_run,), kind="sigma-curves", output=tmp_path / "x.png")
            )


class TestCli:
    def test_cli_renders_heatmap(self, synthetic_run, tmp_path, capsys):
        out = tmp_path / "cli.png"
        assert main(["density-heatmap", str(synthetic_run), "-o", str(out)]) == 0
        assert out.exists()
        assert "wrote" in capsys.readouterr().out

    def test_cli_reports_bad_input(self, tmp_path, capsys):
        assert main(["sigma-curves", str(tmp_path / "nowhere"), "-o", str(tmp_path / "x.png")]) == 1
        assert "plot error" in capsys.readouterr().err

    def test_cli_rejects_unknown_kind(self, synthetic_run, tmp_path):
        with pytest.raises(SystemExit):
            main(["volumetric", str(synthetic_run), "-o", str(tmp_path / "x.png")])
