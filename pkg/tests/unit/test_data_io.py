"""Tests for sweep files, measured-data ingestion and CSV exports."""

import math

import numpy as np
import pytest

from app.core.exceptions import DataError, FormatError, ParseError
from app.data_io.csv_format import fmt, write_lines
from app.data_io.curves import write_pointer_curve, write_singularities
from app.data_io.grid_file import read_phase_grid, write_phase_grid
from app.data_io.ingest import TabulatedResponse, ingest_pointer_curve
from app.data_io.sweep import (
    read_any_sweep,
    read_phase_magnitude_csv,
    read_sweep_csv,
    sweep_from_response,
    write_sweep_csv,
)
from app.models.domain import (
    Axis,
    DiffSettings,
    GridSpec,
    ParamPoint,
    PhaseGrid,
    PointerCurve,
    SingularityRecord,
    Stencil,
    SweepTable,
)
from app.singularities.grid import phase_grid
from app.waveplate.model import omega_to_ghz
from app.weak.engine import pointer_from_response


def _data_lines(path):
    return [line for line in path.read_text().splitlines() if not line.startswith("#")]


def _table(t, omega=None):
    t = np.asarray(t, dtype=complex)
    omega = np.arange(t.size, dtype=float) if omega is None else omega
    return SweepTable(beta=0.3, omega=omega, t=t)


class TestSweepFiles:
    def test_round_trip_is_exact(self, response, tmp_path):
        table = sweep_from_response(response, 0.6, np.linspace(0.0, 20.0, 101))
        path = tmp_path / "sweep.csv"
        write_sweep_csv(table, path)
        assert read_sweep_csv(path) == table

    def test_random_tables_round_trip(self, rng, tmp_path):
        for k in range(100):
            n = int(rng.integers(3, 40))
            omega = np.cumsum(rng.uniform(1e-3, 2.0, n)) + rng.uniform(-50.0, 50.0)
            t = rng.normal(size=n) + 1j * rng.normal(size=n)
            table = SweepTable(beta=float(rng.uniform(-math.pi, math.pi)), omega=omega, t=t)
            path = tmp_path / f"sweep{k}.csv"
            write_sweep_csv(table, path, include_ghz=bool(k % 2))
            assert read_sweep_csv(path) == table

    def test_header_and_beta_comment(self, response, tmp_path):
        path = tmp_path / "sweep.csv"
        write_sweep_csv(sweep_from_response(response, 0.6, np.linspace(1.0, 2.0, 3)), path, include_ghz=True)
        lines = path.read_text().splitlines()
        assert lines[0] == "# beta_rad=0.59999999999999998"
        assert lines[1] == "omega,re_t,im_t,f_ghz"
        assert float(lines[2].split(",")[3]) == pytest.approx(1.0 / (2 * math.pi))

    def test_comments_and_ghz_column_accepted(self, tmp_path):
        path = tmp_path / "measured.csv"
        path.write_text(
            "# beta_rad=0.5 instrument=vna\nomega,re_t,im_t,f_ghz\n1.0,1.0,0.0,0.16\n# mid-sweep note\n"
            "2.0,0.0,1.0,0.32\n\n3.0,-1.0,0.0,0.48\n"
        )
        table = read_sweep_csv(path)
        assert table.beta == 0.5
        assert np.array_equal(table.t, [1.0, 1j, -1.0])

    def test_bad_value_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("# beta_rad=0.5\nomega,re_t,im_t\n1.0,1.0,0.0\n2.0,abc,0.0\n3.0,1.0,0.0\n")
        with pytest.raises(ParseError) as exc:
            read_sweep_csv(path)
        assert exc.value.line == 4
        assert "line 4" in str(exc.value)

    def test_wrong_field_count(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("# beta_rad=0.5\nomega,re_t,im_t\n1.0,1.0\n")
        with pytest.raises(ParseError):
            read_sweep_csv(path)

    def test_non_increasing_omega_is_format_error(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("# beta_rad=0.5\nomega,re_t,im_t\n1.0,1.0,0.0\n3.0,1.0,0.0\n2.0,1.0,0.0\n")
        with pytest.raises(FormatError) as exc:
            read_sweep_csv(path)
        assert not isinstance(exc.value, ParseError)

    def test_too_few_rows(self, tmp_path):
        path = tmp_path / "short.csv"
        path.write_text("# beta_rad=0.5\nomega,re_t,im_t\n1.0,1.0,0.0\n2.0,1.0,0.0\n")
        with pytest.raises(FormatError):
            read_sweep_csv(path)

    def test_missing_beta(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("omega,re_t,im_t\n1.0,1.0,0.0\n2.0,1.0,0.0\n3.0,1.0,0.0\n")
        with pytest.raises(ParseError):
            read_sweep_csv(path)

    def test_phase_magnitude_columns(self, tmp_path):
        path = tmp_path / "polar.csv"
        path.write_text("# beta_rad=0.2\nomega,phase_rad,magnitude\n1.0,0.0,1.0\n2.0,1.5707963267948966,0.5\n3.0,0.0,2.0\n")
        for reader in (read_phase_magnitude_csv, read_any_sweep):
            table = reader(path)
            assert np.allclose(table.t, [1.0, 0.5j, 2.0])

    def test_negative_magnitude(self, tmp_path):
        path = tmp_path / "polar.csv"
        path.write_text("# beta_rad=0.2\nomega,phase_rad,magnitude\n1.0,0.0,1.0\n2.0,0.0,-0.5\n3.0,0.0,2.0\n")
        with pytest.raises(FormatError):
            read_phase_magnitude_csv(path)

    def test_stdout_destination(self, capsys):
        write_lines("-", ["a,b", "1,2"])
        assert capsys.readouterr().out == "a,b\n1,2\n"


class TestIngest:
    def _max_error(self, response, n):
        omega = np.linspace(6.0, 10.0, n)
        curve = ingest_pointer_curve(sweep_from_response(response, 0.6, omega))
        reference = np.array(
            [pointer_from_response(response, ParamPoint(rho=w, eta=0.6), Axis.RHO).value for w in omega]
        )
        return float(np.max(np.abs(curve.re + 1j * curve.im - reference)))

    def test_second_order_convergence(self, response):
        ratio = self._max_error(response, 401) / self._max_error(response, 801)
        assert 3.3 <= ratio <= 4.7

    def test_matches_central_difference_on_same_grid(self, response):
        h = 0.01
        omega = 6.0 + h * np.arange(401)
        curve = ingest_pointer_curve(sweep_from_response(response, 0.6, omega))
        diff = DiffSettings(step_rho=h, step_eta=h, stencil=Stencil.CENTRAL_2, absolute=True)
        for k in range(1, omega.size - 1, 25):
            p = pointer_from_response(response, ParamPoint(rho=omega[k], eta=0.6), Axis.RHO, diff)
            assert curve.re[k] == pytest.approx(p.re, abs=1e-9)
            assert curve.im[k] == pytest.approx(p.im, abs=1e-9)

    def test_zero_at_node_becomes_gap(self, response, omega_s):
        omega = omega_s + 0.01 * np.arange(-5, 6)
        curve = ingest_pointer_curve(sweep_from_response(response, math.pi / 4, omega))
        assert curve.gap_indices() == [5]
        assert np.isnan(curve.re[5])
        assert np.all(np.isfinite(curve.re[~curve.gap]))

    def test_too_few_usable_rows(self):
        with pytest.raises(DataError):
            ingest_pointer_curve(_table([0.0, 1.0, 1.0, 0.0]))

    def test_isolated_rows_become_gaps(self):
        curve = ingest_pointer_curve(_table([1, 1, 0, 1, 0, 1, 1]))
        assert curve.gap_indices() == [2, 3, 4]
        assert curve.re[0] == 0.0

    def test_linear_phase(self):
        omega = np.linspace(0.0, 10.0, 50)
        curve = ingest_pointer_curve(_table(np.exp(1j * 1.7 * omega), omega))
        assert np.allclose(curve.re, 1.7)
        assert np.allclose(curve.im, 0.0, atol=1e-12)


class TestTabulatedResponse:
    def test_interpolates_nodes(self, response):
        omega = np.linspace(0.0, 5.0, 51)
        table = sweep_from_response(response, 0.3, omega)
        tab = TabulatedResponse(table)
        assert tab(omega[7]) == pytest.approx(table.t[7])
        assert tab(2.55, 0.3) == pytest.approx(response(2.55, 0.3), abs=1e-4)
        assert tab.omega_range == (0.0, 5.0)

    def test_outside_range(self, response):
        tab = TabulatedResponse(sweep_from_response(response, 0.3, np.linspace(0.0, 5.0, 51)))
        with pytest.raises(DataError):
            tab(5.5)


class TestGridFile:
    @pytest.fixture
    def grid(self, response):
        g = GridSpec(rho_min=7.0, rho_max=9.0, eta_min=0.5, eta_max=1.0, n_rho=5, n_eta=4)
        return phase_grid(response, g)

    def test_round_trip(self, grid, tmp_path):
        path = tmp_path / "grid.csv"
        write_phase_grid(grid, path)
        loaded = read_phase_grid(path)
        assert loaded.spec == grid.spec
        assert np.array_equal(loaded.phase, grid.phase)
        assert np.array_equal(loaded.magnitude, grid.magnitude)

    def test_random_grids_round_trip(self, rng, tmp_path):
        for k in range(25):
            rho_min, eta_min = rng.uniform(-10.0, 10.0, 2)
            spec = GridSpec(
                rho_min=rho_min,
                rho_max=rho_min + rng.uniform(0.1, 60.0),
                eta_min=eta_min,
                eta_max=eta_min + rng.uniform(0.1, 3.0),
                n_rho=int(rng.integers(2, 9)),
                n_eta=int(rng.integers(2, 9)),
            )
            shape = (spec.n_rho, spec.n_eta)
            grid = PhaseGrid(
                spec=spec,
                phase=rng.uniform(-math.pi, math.pi, shape),
                magnitude=rng.exponential(1.0, shape),
            )
            path = tmp_path / f"grid{k}.csv"
            write_phase_grid(grid, path)
            loaded = read_phase_grid(path)
            assert loaded.spec == spec
            assert np.array_equal(loaded.phase, grid.phase)
            assert np.array_equal(loaded.magnitude, grid.magnitude)

    def test_missing_node(self, grid, tmp_path):
        path = tmp_path / "grid.csv"
        write_phase_grid(grid, path)
        lines = path.read_text().splitlines()
        path.write_text("\n".join(lines[:-1]) + "\n")
        with pytest.raises(FormatError):
            read_phase_grid(path)

    def test_node_outside_grid(self, grid, tmp_path):
        path = tmp_path / "grid.csv"
        write_phase_grid(grid, path)
        with path.open("a") as fh:
            fh.write("9,0,0.0,1.0\n")
        with pytest.raises(FormatError):
            read_phase_grid(path)

    def test_missing_header_keys(self, tmp_path):
        path = tmp_path / "grid.csv"
        path.write_text("# rho_min=0 rho_max=1 n_rho=2\ni,j,arg_t,abs_t\n")
        with pytest.raises(ParseError):
            read_phase_grid(path)


class TestExports:
    def test_pointer_curve_with_gap(self, tmp_path):
        curve = PointerCurve(
            axis="beta",
            fixed=7.5,
            coord=np.array([0.0, 0.5, 1.0]),
            re=np.array([0.8, np.nan, 1.1]),
            im=np.array([0.0, np.nan, 0.0]),
            gap=np.array([False, True, False]),
            analytic=np.array([0.8, np.nan, 1.1]),
        )
        path = tmp_path / "curve.csv"
        write_pointer_curve(curve, path)
        lines = path.read_text().splitlines()
        assert lines[0] == f"# axis=beta omega=7.5 f_ghz={fmt(omega_to_ghz(7.5))}"
        assert float(lines[0].rsplit("=", 1)[1]) == pytest.approx(7.5 / (2 * math.pi))
        assert lines[1] == "beta,re_pointer,im_pointer,analytic,gap"
        assert lines[3].split(",")[1:3] == ["", ""]
        assert lines[3].endswith(",1")
        assert lines[2].endswith(",0")

    def test_omega_curve_has_ghz_column(self, tmp_path):
        curve = PointerCurve(
            axis="omega",
            fixed=0.3,
            coord=np.array([2 * math.pi]),
            re=np.array([1.0]),
            im=np.array([0.0]),
            gap=np.array([False]),
        )
        path = tmp_path / "curve.csv"
        write_pointer_curve(curve, path)
        rows = _data_lines(path)
        assert rows[0] == "omega,f_ghz,re_pointer,im_pointer,gap"
        assert float(rows[1].split(",")[1]) == pytest.approx(1.0)

    def test_singularities(self, tmp_path):
        path = tmp_path / "zeros.csv"
        record = SingularityRecord(rho=2 * math.pi, eta=math.pi / 4, charge=-1, residual=1e-12, iterations=3)
        write_singularities([record], path)
        header, row = path.read_text().splitlines()
        assert header == "rho,eta,charge,residual,iterations,f_ghz"
        fields = row.split(",")
        assert fields[2] == "-1"
        assert fields[4] == "3"
        assert float(fields[5]) == pytest.approx(1.0)
