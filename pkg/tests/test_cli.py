import csv
import os

import numpy as np
import pytest

from effcap.cli import COLUMNS, main, rows_for, run
from effcap.config import parse_config
from effcap.errors import ConfigError

from conftest import EBN0_TABLE_DB


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


class TestParseConfig:
    def test_empty_requires_mode(self):
        with pytest.raises(ConfigError, match="mode is required"):
            parse_config("")

    def test_defaults(self):
        cfg = parse_config("mode = optimal-rho")
        p = cfg.params
        assert (p.gamma, p.frame_t, p.bandwidth_b, p.pbar / p.n0) == (1.0, 2e-3, 1e5, 1e4)

    def test_table_config(self):
        cfg = parse_config("mode = wideband-table\ntheta_list = [0, 0.001, 0.01, 0.1, 1]\n")
        assert cfg.theta_list == (0.0, 0.001, 0.01, 0.1, 1.0)
        assert cfg.sweep is None

    def test_bare_list_and_comments(self):
        cfg = parse_config("# table\nmode = ebn0-wideband  # wideband\ntheta_list = 0.01, 0.1\n")
        assert cfg.theta_list == (0.01, 0.1)

    def test_two_sweep_variables_named(self):
        text = "mode = ebn0-lowpower\nsweep.snr.points = 5\nsweep.bandwidth_b.points = 5\n"
        with pytest.raises(ConfigError) as exc:
            parse_config(text)
        assert "snr" in str(exc.value) and "bandwidth_b" in str(exc.value)

    @pytest.mark.parametrize("text,field", [
        ("mode = ebn0-lowpower\nfoo = 1", "'foo'"),
        ("mode = banana", "mode"),
        ("mode = optimal-rho\nsweep.snr.points = 1", "sweep.snr.points"),
        ("mode = optimal-rho\nsweep.snr.scale = cubic", "sweep.snr.scale"),
        ("mode = ebn0-wideband\nsweep.snr.points = 4", "sweep.snr"),
        ("mode = wideband-table\ntheta_list = [-1]", "theta_list"),
        ("mode = wideband-table\ngamma = -2", "gamma"),
        ("mode = wideband-table\ngamma = abc", "gamma"),
        ("mode = validate-queue\nqueue.safety = 2", "queue.safety"),
        ("mode = wideband-table\nseed = 1.5", "seed"),
        ("mode wideband-table", "line 1"),
    ])
    def test_errors_name_field(self, text, field):
        with pytest.raises(ConfigError, match=field.replace(".", r"\.")):
            parse_config(text)

    def test_overrides_win(self):
        cfg = parse_config("mode = optimal-rho\ngamma = 2", {"gamma": 3})
        assert cfg.params.gamma == 3.0


def test_wideband_table_csv(tmp_path):
    out = tmp_path / "table.csv"
    assert main(["wideband-table", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert tuple(rows[0]) == COLUMNS["wideband-table"]
    got = [float(r[3]) for r in rows[1:]]
    assert np.allclose(got, EBN0_TABLE_DB, atol=1e-3)


def test_lowpower_u_shape_and_determinism(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("theta_list = [0.01]\nsweep.snr.start = 1e-6\nsweep.snr.stop = 1\n"
                    "sweep.snr.points = 31\n")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["ebn0-lowpower", "--config", str(conf), "--out", str(a)]) == 0
    assert main(["ebn0-lowpower", "--config", str(conf), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r" not in a.read_bytes()
    rows = read_csv(a)
    assert tuple(rows[0]) == COLUMNS["ebn0-lowpower"]
    eb = np.array([float(r[5]) for r in rows[1:]])
    k = int(np.argmin(eb))
    assert 0 < k < len(eb) - 1
    assert np.all(np.diff(eb[:k + 1]) < 0) and np.all(np.diff(eb[k:]) > 0)


def test_round_trip_exact(tmp_path):
    cfg = parse_config("mode = optimal-rho\nsweep.snr.points = 7")
    out = tmp_path / "rho.csv"
    assert run(cfg, out=str(out)) == 0
    parsed = [tuple(float(v) for v in r) for r in read_csv(out)[1:]]
    assert parsed == rows_for(cfg)


def test_wideband_sweep_converges_to_table(tmp_path):
    out_sweep, out_table = tmp_path / "w.csv", tmp_path / "t.csv"
    assert main(["ebn0-wideband", "--set", "theta_list=[0.01]", "--out", str(out_sweep)]) == 0
    assert main(["wideband-table", "--set", "theta_list=[0.01]", "--out", str(out_table)]) == 0
    last = read_csv(out_sweep)[-1]
    table = read_csv(out_table)[1]
    assert abs(float(last[3]) - float(table[3])) < 0.05


def test_validate_queue_rows(tmp_path):
    out = tmp_path / "q.csv"
    status = main(["validate-queue", "--set", "queue.frames=200000", "--set", "queue.replications=2",
                   "--set", "queue.safety=0.8", "--seed", "7", "--out", str(out)])
    assert status == 0
    rows = read_csv(out)
    assert tuple(rows[0]) == COLUMNS["validate-queue"]
    assert [int(r[2]) for r in rows[1:]] == [7, 8]
    assert all(float(r[-2]) > 0.01 for r in rows[1:])


def test_exit_codes(tmp_path, capsys):
    assert main(["wideband-table", "--set", "bogus=1", "--out", str(tmp_path / "x.csv")]) == 1
    assert "bogus" in capsys.readouterr().err
    assert main(["wideband-table", "--out", str(tmp_path / "missing" / "x.csv")]) == 3
    assert main(["wideband-table", "--config", str(tmp_path / "nope.conf"),
                 "--out", str(tmp_path / "x.csv")]) == 3
    # arrival at 1e-6 of capacity leaves nothing to fit on a bits-scale threshold set
    status = main(["validate-queue", "--set", "queue.frames=20000", "--set", "queue.replications=1",
                   "--set", "queue.safety=1e-9", "--out", str(tmp_path / "q.csv")])
    assert status == 2
    assert not (tmp_path / "q.csv").exists()


def test_no_partial_file_on_error(tmp_path):
    out = tmp_path / "keep.csv"
    out.write_text("previous\n")
    status = main(["validate-queue", "--set", "queue.frames=20000", "--set", "queue.replications=1",
                   "--set", "queue.safety=1e-9", "--out", str(out)])
    assert status == 2
    assert out.read_text() == "previous\n"
    assert [p.name for p in tmp_path.iterdir()] == ["keep.csv"]
