import json

import pytest

from uniformity_lab.cli import dispatch


def run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestExitCodes:
    def test_unknown_subcommand(self, capsys):
        code, out = run(capsys, "frobnicate")
        assert code == 2
        assert json.loads(out.strip())["error"] == "usage"

    def test_missing_required_flag(self, capsys):
        code, out = run(capsys, "sieve")
        assert code == 2

    def test_precondition_error(self, capsys):
        code, out = run(capsys, "sieve", "--nmax", "1")
        assert code == 3
        assert json.loads(out.strip())["error"] == "precondition"

    def test_overflow_maps_to_precondition(self, capsys, tmp_path):
        target = tmp_path / "deep.csv"
        code, _ = run(capsys, "gt-table", "--w", "999", "--n", "31",
                      "--out", str(target))
        assert code == 3


class TestSieve:
    def test_csv_header_and_values(self, capsys):
        code, out = run(capsys, "sieve", "--nmax", "6")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,lambda,phi"
        assert lines[1] == "1,0.0,1"
        assert lines[2].startswith("2,0.6931471805599453,1")
        assert lines[6] == "6,0.0,2"

    def test_json_emit(self, capsys):
        code, out = run(capsys, "sieve", "--nmax", "4", "--emit", "json")
        assert code == 0
        rows = json.loads(out)
        assert rows[0] == {"n": 1, "lambda": 0.0, "phi": 1}
        assert rows[3]["phi"] == 2

    def test_format_follows_out_extension(self, capsys, tmp_path):
        target = tmp_path / "dump.json"
        code, _ = run(capsys, "sieve", "--nmax", "4", "--out", str(target))
        assert code == 0
        assert json.loads(target.read_text())[2]["n"] == 3


class TestGowers:
    def test_point_mass_norm(self, capsys, tmp_path):
        src = tmp_path / "delta.txt"
        src.write_text("1,0\n0,0\n0,0\n0,0\n0,0\n")
        code, out = run(capsys, "gowers", "--input", str(src), "--d", "2")
        assert code == 0
        doc = json.loads(out.strip())
        assert doc["n"] == 5
        assert doc["value"] == pytest.approx(5 ** -0.75, abs=1e-12)

    def test_strategies_selectable(self, capsys, tmp_path):
        src = tmp_path / "seq.txt"
        src.write_text("\n".join(f"{v},0" for v in (1, 2, 0, 1)))
        values = {}
        for strategy in ("recursive", "fourier", "bruteforce"):
            code, out = run(capsys, "gowers", "--input", str(src), "--d", "2",
                            "--strategy", strategy)
            assert code == 0
            values[strategy] = json.loads(out.strip())["value"]
        assert values["recursive"] == pytest.approx(values["fourier"], abs=1e-12)
        assert values["recursive"] == pytest.approx(values["bruteforce"], abs=1e-12)

    def test_malformed_line(self, capsys, tmp_path):
        src = tmp_path / "bad.txt"
        src.write_text("1,0\noops\n")
        code, out = run(capsys, "gowers", "--input", str(src), "--d", "2")
        assert code == 2


class TestGvnCheckCommand:
    def test_runs_and_reports(self, capsys):
        code, out = run(capsys, "gvn-check", "--n", "16", "--k", "2",
                        "--trials", "4")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "trial,N,k,lhs,rhs,margin,holds"
        assert len(lines) == 5
        assert all(line.endswith(",1") for line in lines[1:])


class TestRecurrence:
    @pytest.fixture
    def cyclic_system(self, tmp_path):
        path = tmp_path / "sys.json"
        path.write_text('{"kind":"cyclic","M":2}')
        return path

    @pytest.fixture
    def zero_set(self, tmp_path):
        path = tmp_path / "A.json"
        path.write_text("[0]")
        return path

    def test_csv_rows(self, capsys, cyclic_system, zero_set):
        code, out = run(capsys, "recurrence", "--system", str(cyclic_system),
                        "--set", str(zero_set), "--shift", "-1", "--n", "2000")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "N,count,avg,error"
        assert len(lines) >= 2

    def test_rotation_system_with_intervals(self, capsys, tmp_path):
        sys_path = tmp_path / "rot.json"
        sys_path.write_text('{"kind":"rotation","alpha":0.6180339887498949}')
        set_path = tmp_path / "A.json"
        set_path.write_text("[[0.0, 0.1]]")
        code, out = run(capsys, "recurrence", "--system", str(sys_path),
                        "--set", str(set_path), "--shift", "-1", "--n", "2000")
        assert code == 0

    def test_rational_alpha_object(self, capsys, tmp_path):
        sys_path = tmp_path / "rot.json"
        sys_path.write_text('{"kind":"rotation","alpha":{"p":1,"q":4}}')
        set_path = tmp_path / "A.json"
        set_path.write_text("[[0.0, 0.25]]")
        code, out = run(capsys, "recurrence", "--system", str(sys_path),
                        "--set", str(set_path), "--shift", "-1", "--n", "500")
        assert code == 0

    def test_too_small_n(self, capsys, cyclic_system, zero_set):
        code, out = run(capsys, "recurrence", "--system", str(cyclic_system),
                        "--set", str(zero_set), "--shift", "0", "--n", "2")
        assert code == 3


class TestGtTable:
    def test_error_rows_do_not_fail_run(self, capsys):
        code, out = run(capsys, "gt-table", "--w", "2", "--n", "31,32", "--d", "2")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "w,W,N,d,norm,error"
        assert "N is not prime" in lines[2]

    def test_byte_identical_reruns(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for target in (a, b):
            code, _ = run(capsys, "gt-table", "--w", "2,3", "--n", "31,61",
                          "--d", "2", "--out", str(target), "--seed", "5")
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_fig_rendered_alongside_csv(self, capsys, tmp_path):
        target = tmp_path / "table.csv"
        fig = tmp_path / "table.png"
        code, _ = run(capsys, "gt-table", "--w", "2", "--n", "31,61", "--d", "2",
                      "--out", str(target), "--fig", str(fig))
        assert code == 0
        assert target.exists()
        assert fig.stat().st_size > 0


class TestConvergeAndCompare:
    def test_cancelling_pair_zero_profile(self, capsys):
        code, out = run(capsys, "converge", "--alpha", "sqrt2-1", "--f1", "2:1",
                        "--f2=-1:1", "--ladder", "100:1000:3")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "N_lo,N_hi,dist"
        assert all(line.endswith(",0.0") for line in lines[1:])

    def test_compare_te_rejects_rational(self, capsys):
        code, out = run(capsys, "compare-te", "--alpha", "1/4", "--f1", "1:1",
                        "--f2", "1:1", "--n", "1000")
        assert code == 3

    def test_compare_te_runs(self, capsys):
        code, out = run(capsys, "compare-te", "--alpha", "golden", "--f1", "1:1",
                        "--f2", "1:1", "--n", "2000", "--ladder", "200:2000:3")
        assert code == 0
        assert out.splitlines()[0] == "N,dist"


class TestApFind:
    def test_found_json(self, capsys, tmp_path):
        src = tmp_path / "set.txt"
        src.write_text("\n".join(str(v) for v in range(0, 100, 2)))
        code, out = run(capsys, "ap-find", "--set", str(src), "--sign=-1")
        assert code == 0
        assert json.loads(out.strip()) == {"a": 0, "p": 3, "d": 2}

    def test_empty_file_exits_four(self, capsys, tmp_path):
        src = tmp_path / "empty.txt"
        src.write_text("")
        code, out = run(capsys, "ap-find", "--set", str(src))
        assert code == 4
        assert json.loads(out.strip())["error"] == "not_found"

    def test_no_progression_exits_four(self, capsys, tmp_path):
        src = tmp_path / "sparse.txt"
        src.write_text("0\n1\n5\n")
        code, out = run(capsys, "ap-find", "--set", str(src), "--universe", "8")
        assert code == 4


class TestWrecCommand:
    def test_runs_on_rotation(self, capsys, tmp_path):
        sys_path = tmp_path / "rot.json"
        sys_path.write_text('{"kind":"rotation","alpha":0.41421356237309515}')
        set_path = tmp_path / "A.json"
        set_path.write_text("[[0.0, 0.25]]")
        code, out = run(capsys, "wrec", "--system", str(sys_path),
                        "--set", str(set_path), "--w", "3", "--n", "211")
        assert code == 0
        assert out.splitlines()[0] == "N,weighted,unweighted,diff,error"


class TestWorkersEnv:
    def test_env_override_keeps_rows_identical(self, capsys, tmp_path, monkeypatch):
        serial = tmp_path / "serial.csv"
        code, _ = run(capsys, "gt-table", "--w", "2,3", "--n", "31,61", "--d", "2",
                      "--out", str(serial))
        assert code == 0
        monkeypatch.setenv("UNIFORMITY_LAB_WORKERS", "4")
        threaded = tmp_path / "threaded.csv"
        code, _ = run(capsys, "gt-table", "--w", "2,3", "--n", "31,61", "--d", "2",
                      "--out", str(threaded))
        assert code == 0
        assert serial.read_bytes() == threaded.read_bytes()
