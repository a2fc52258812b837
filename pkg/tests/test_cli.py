import argparse
import os
from logging.handlers import RotatingFileHandler

import pytest

from CommandParser import CommandParser
from SweepConfig import SweepConfig, ConfigError, parse_dv_list
from SweepTerminal import SweepTerminal, cli_dispatch
from LOGGING import LOGGING
from Exceptions import EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_ESCAPE
from SweepSimulator import SweepSimulator, SimOutcome, ESCAPE
from UserInterface import UserInterface, _animations


def test_critical_velocity_of_one_strategy(capsys):
    assert cli_dispatch(["critical-velocity", "--strategy", "circular-pincer"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "31.4159265"


def test_critical_velocity_same_direction_prints_both_values(capsys):
    assert cli_dispatch(["critical-velocity", "--strategy", "circular-same"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "32.4159265"
    assert lines[1].startswith("arcsine exact: 32.41")


def test_critical_velocity_table_to_file(tmp_path):
    out = tmp_path / "critical.csv"
    assert cli_dispatch(["critical-velocity", "--n-max", "6", "--out", str(out)]) == EXIT_OK
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "n,V_LB,Vc_cp,Vc_sp,Vc_cs,Vc_ss"
    assert [line.split(",")[0] for line in lines[1:]] == ["2", "4", "6"]


def test_subcritical_speed_exits_infeasible(capsys):
    assert cli_dispatch(["simulate", "--dv=-3"]) == EXIT_INFEASIBLE
    assert "SubcriticalVelocity" in capsys.readouterr().err


def test_plan_prints_phase_table(capsys):
    assert cli_dispatch(["plan", "--strategy", "circular-pincer", "--vs", "40"]) == EXIT_OK
    captured = capsys.readouterr()
    out = captured.out.splitlines()
    assert out[0] == "index,kind,start,duration"
    assert out[1].startswith("0,arc,0,")
    assert all(len(line.split(",")) == 4 for line in out)
    assert "T_total=" in captured.err
    assert "T_total=" not in captured.out


def test_simulate_exits_escape_when_region_leaks(capsys, monkeypatch):
    monkeypatch.setattr(SweepSimulator, "run",
                        staticmethod(lambda plan, world, **kwargs: SimOutcome(kind=ESCAPE, time=3.5, steps=7)))
    code = cli_dispatch(["simulate", "--strategy", "circular-pincer", "--vs", "40", "--cell", "5"])
    assert code == EXIT_ESCAPE
    err = capsys.readouterr().err
    assert "escape" in err.lower()
    assert "plan=" in err


def test_compare_writes_csv(tmp_path):
    out = tmp_path / "compare.csv"
    code = cli_dispatch(["compare", "--family", "circular", "--n-max", "4", "--dv", "5,10", "--out", str(out)])
    assert code == EXIT_OK
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "n,dV,strategy_a,strategy_b,V_ca,V_cb,T_a,T_b,ratio,feasible"
    assert len(lines) == 1 + 2 * 2
    assert all(line.endswith(",true") for line in lines[1:])


def test_compare_single_strategy_writes_time_table(capsys):
    assert cli_dispatch(["compare", "--strategy", "spiral-pincer", "--n-max", "2", "--dv", "5"]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "n,dV,strategy,V_s,N,T_in,T_traverse,T_endgame,T_total,feasible"
    assert out[1].startswith("2,5,spiral-pincer,")


def test_plot_writes_svg_and_csv(tmp_path):
    out = tmp_path / "table.svg"
    assert cli_dispatch(["plot", "--n-max", "4", "--out", str(out)]) == EXIT_OK
    assert (tmp_path / "table.csv").read_text(encoding="utf-8").startswith("n,V_LB,Vc_cp")
    assert "n,V_LB,Vc_cp" in out.read_text(encoding="utf-8")


@pytest.mark.parametrize('argv', [
    ["bogus"],
    ["critical-velocity", "--strategy", "bogus"],
    ["compare", "--n", "abc"],
    [],
])
def test_usage_errors(argv):
    assert cli_dispatch(argv) == EXIT_USAGE


def test_odd_swarm_is_usage_error(capsys):
    assert cli_dispatch(["critical-velocity", "--strategy", "spiral-pincer", "--n", "3"]) == EXIT_USAGE
    assert "OddSwarm" in capsys.readouterr().err


def test_help_returns_ok(capsys):
    assert cli_dispatch(["simulate", "--help"]) == EXIT_OK
    assert "--cell" in capsys.readouterr().out


def test_interactive_string_command(capsys):
    terminal = SweepTerminal()
    assert terminal.execute_command("critical-velocity --strategy circular-pincer --n 4") == EXIT_OK
    assert capsys.readouterr().out.strip() == "15.7079633"
    assert terminal.execute_command('plan --strategy "circular-pincer') == EXIT_USAGE


def test_parse_argv_defaults_are_none():
    command, args = CommandParser.parse_argv(["plan"])
    assert command == "plan"
    assert args.n is None and args.vs is None and args.strategy is None
    assert CommandParser.parse_argv([]) == (None, None)


def test_config_precedence():
    args = argparse.Namespace(n=4, R0=None, dv=None)
    environ = {"SWEEP_N": "8", "SWEEP_R0": "250", "SWEEP_DV": "1,2"}
    config = SweepConfig.resolve(args, environ)
    assert config.n == 4
    assert config.R0 == 250.0
    assert config.dv == (1.0, 2.0)
    assert config.r == 10.0
    assert config.radius_mode == "band"
    assert config.cell_size == pytest.approx(250.0 / 200)


def test_config_from_process_environment(monkeypatch):
    monkeypatch.setenv("SWEEP_STRATEGY", "spiral-same")
    monkeypatch.setenv("SWEEP_WORKERS", "3")
    config = SweepConfig.resolve(None)
    assert config.strategy == "spiral-same"
    assert config.workers == 3


def test_config_rejects_bad_environment():
    with pytest.raises(ConfigError):
        SweepConfig.resolve(None, {"SWEEP_N": "two"})


@pytest.mark.parametrize('text, expected', [
    ("5,10,20,35", [5.0, 10.0, 20.0, 35.0]),
    ("-5, 10", [-5.0, 10.0]),
    ([1, 2], [1.0, 2.0]),
])
def test_parse_dv_list(text, expected):
    assert parse_dv_list(text) == expected


@pytest.mark.parametrize('text', ["", "5,x"])
def test_parse_dv_list_rejects(text):
    with pytest.raises(ConfigError):
        parse_dv_list(text)


def test_logging_directory_from_environment(tmp_path):
    assert LOGGING.create_log_directory() == str(tmp_path / "logs")
    assert os.path.isdir(tmp_path / "logs")


@pytest.mark.parametrize('line, text, expected', [
    ("", "", ["critical-velocity", "plan", "simulate", "compare", "plot", "exit"]),
    ("si", "si", ["simulate"]),
    ("plan --strategy spiral-", "spiral-", ["spiral-pincer", "spiral-same"]),
    ("plot --family ", "", ["circular", "spiral"]),
    ("simulate --c", "--c", ["--cell"]),
    ("compare --radius-mode b", "b", ["band"]),
])
def test_completion_candidates(line, text, expected):
    assert CommandParser.candidates(line, text) == expected


def test_logging_follows_new_directory(tmp_path, monkeypatch):
    first, _ = LOGGING.setup_logging()
    monkeypatch.setenv("SWEEP_LOGGING_PATH", str(tmp_path / "other"))
    second, errors = LOGGING.setup_logging()
    assert first is second
    files = [h.baseFilename for h in second.handlers if isinstance(h, RotatingFileHandler)]
    assert files == [str(tmp_path / "other" / "info.log")]
    assert len([h for h in errors.handlers if isinstance(h, RotatingFileHandler)]) == 1


def test_stopped_animations_are_released(capsys):
    stop = UserInterface.show_loading_message()
    update, stop_progress = UserInterface.show_progress_message()
    update(50.0)
    stop()
    stop_progress()
    assert _animations == []
