"""Command-line interface: subcommands, exit codes, CSV schemas, and
byte-level determinism of the emitted data."""
import math

import pytest

from eeopt.cli import main

OPTIMIZE_HEADER = "case,c_star,ee_star,iterations,final_bracket_width"
TRADEOFF_HEADER = "case,C,total_power_w,ee_j_per_bit,gamma_w"
SWEEP_HEADER = "case,sweep_param,sweep_value,c_star,ee_star"


def run_cli(capsys, *args):
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    lines = text.strip("\n").split("\n")
    header = lines[0].split(",")
    return header, [dict(zip(header, line.split(","))) for line in lines[1:]]


def test_optimize_subcommand(capsys):
    code, out, err = run_cli(capsys, "optimize", "--cases", "static_csit")
    assert code == 0
    assert err == ""
    assert out.startswith(OPTIMIZE_HEADER + "\n")
    _, rows = parse_csv(out)
    assert len(rows) == 1
    assert rows[0]["case"] == "static_csit"
    assert float(rows[0]["c_star"]) == pytest.approx(8.854, abs=1e-3)
    assert float(rows[0]["final_bracket_width"]) <= 1e-8
    assert int(rows[0]["iterations"]) > 0


def test_optimize_runs_all_cases_by_default(capsys):
    code, out, _ = run_cli(capsys, "optimize")
    assert code == 0
    _, rows = parse_csv(out)
    assert [row["case"] for row in rows] == ["static_csit", "fading_cdit", "fading_csit"]
    ee_stars = {row["case"]: float(row["ee_star"]) for row in rows}
    assert ee_stars["static_csit"] <= ee_stars["fading_cdit"]
    assert ee_stars["fading_csit"] <= ee_stars["fading_cdit"]


def test_output_is_byte_identical_across_runs(capsys):
    args = ("optimize", "--cases", "static_csit,fading_cdit")
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    assert first == second


def test_floats_round_trip_at_full_precision(capsys):
    _, out, _ = run_cli(capsys, "optimize")
    _, rows = parse_csv(out)
    for row in rows:
        for key in ("c_star", "ee_star", "final_bracket_width"):
            cell = row[key]
            assert repr(float(cell)) == cell


def test_tradeoff_subcommand(capsys):
    code, out, _ = run_cli(
        capsys,
        "tradeoff", "--cases", "static_csit",
        "--c-min", "0", "--c-max", "2", "--points", "5",
    )
    assert code == 0
    assert out.startswith(TRADEOFF_HEADER + "\n")
    _, rows = parse_csv(out)
    assert len(rows) == 5
    assert [float(row["C"]) for row in rows] == [0.0, 0.5, 1.0, 1.5, 2.0]
    # the zero-SE sentinel is a literal inf that still parses as a float
    assert rows[0]["ee_j_per_bit"] == "inf"
    assert math.isinf(float(rows[0]["ee_j_per_bit"]))
    assert float(rows[0]["total_power_w"]) == 0.188
    assert float(rows[0]["gamma_w"]) == -0.188


def test_tradeoff_blocks_are_case_major(capsys):
    _, out, _ = run_cli(
        capsys,
        "tradeoff", "--cases", "static_csit,fading_cdit",
        "--c-min", "1", "--c-max", "2", "--points", "3",
    )
    _, rows = parse_csv(out)
    assert [row["case"] for row in rows] == ["static_csit"] * 3 + ["fading_cdit"] * 3


def test_sweep_subcommand(capsys):
    code, out, _ = run_cli(
        capsys,
        "sweep", "--cases", "static_csit", "--param", "kappa",
        "--start", "7e-8", "--stop", "1e-7", "--points", "4",
    )
    assert code == 0
    assert out.startswith(SWEEP_HEADER + "\n")
    _, rows = parse_csv(out)
    assert len(rows) == 4
    assert all(row["sweep_param"] == "kappa" for row in rows)
    values = [float(row["sweep_value"]) for row in rows]
    assert values == pytest.approx([7e-8, 8e-8, 9e-8, 1e-7], rel=1e-12)
    c_stars = [float(row["c_star"]) for row in rows]
    ee_stars = [float(row["ee_star"]) for row in rows]
    # linear circuit model: the optimum SE is kappa-invariant, the cost is not
    assert max(c_stars) - min(c_stars) <= 2e-8
    assert ee_stars == sorted(ee_stars)
    assert len(set(ee_stars)) == 4


def test_sweep_jobs_do_not_change_the_output(capsys):
    args = (
        "sweep", "--cases", "static_csit,fading_cdit", "--param", "p_static",
        "--start", "0.1", "--stop", "0.3", "--points", "3",
    )
    _, serial, _ = run_cli(capsys, *args, "--jobs", "1")
    _, threaded, _ = run_cli(capsys, *args, "--jobs", "3")
    assert serial == threaded


def test_log_sweep_spacing(capsys):
    _, out, _ = run_cli(
        capsys,
        "sweep", "--cases", "static_csit", "--param", "distance_m",
        "--start", "10", "--stop", "40", "--points", "3", "--log",
    )
    _, rows = parse_csv(out)
    values = [float(row["sweep_value"]) for row in rows]
    assert values == pytest.approx([10.0, 20.0, 40.0], rel=1e-12)


def test_config_file_plus_flag_override(tmp_path, capsys):
    path = tmp_path / "run.toml"
    path.write_text('kappa = 7e-8\n\n[channel]\ncase = "static_csit"\n')
    _, overridden, _ = run_cli(capsys, "optimize", "--config", str(path), "--kappa", "9e-8")
    _, reference, _ = run_cli(capsys, "optimize", "--cases", "static_csit")
    assert overridden == reference


def test_output_file(tmp_path, capsys):
    target = tmp_path / "results.csv"
    code, out, _ = run_cli(
        capsys, "optimize", "--cases", "static_csit", "--output", str(target)
    )
    assert code == 0
    assert f"wrote {target}" in out
    assert "c_star=" in out   # human summary goes to stdout, data to the file
    _, piped, _ = run_cli(capsys, "optimize", "--cases", "static_csit")
    assert target.read_text() == piped


def test_config_errors_exit_2(capsys, tmp_path):
    code, _, err = run_cli(capsys, "optimize", "--cases", "rayleigh")
    assert code == 2
    assert "error:" in err
    code, _, err = run_cli(capsys, "optimize", "--config", str(tmp_path / "nope.toml"))
    assert code == 2
    code, _, err = run_cli(
        capsys,
        "sweep", "--param", "kappa", "--start", "1e-7", "--stop", "7e-8", "--points", "4",
    )
    assert code == 2
    code, _, err = run_cli(
        capsys, "tradeoff", "--c-min", "2", "--c-max", "2", "--points", "5"
    )
    assert code == 2


def test_solver_errors_exit_3(capsys):
    # a static draw this large pushes the optimum beyond the doubling cap
    code, _, err = run_cli(
        capsys, "optimize", "--cases", "static_csit", "--p-static-w", "1e18"
    )
    assert code == 3
    assert "error:" in err and "static_csit" in err


def test_missing_subcommand_is_a_usage_error(capsys):
    with pytest.raises(SystemExit):
        main([])
