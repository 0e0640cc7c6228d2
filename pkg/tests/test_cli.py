import xml.etree.ElementTree as ET

import pytest

from subpoisson.cli import main

SMALL_VERIFY = ["--grid", "1e-3:1e3:30:log", "--gprime-grid", "1e-3:1e3:30:log", "--t-grid", "0.01:5:30:lin",
                "--k-grid", "1:4:4:lin", "--mu-grid", "1:2:2:lin", "--mu-max", "2", "--samples", "2000"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def usage_code(*argv):
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    return exc.value.code


class TestMoment:
    def test_poisson(self, capsys):
        code, out, _ = run(capsys, "moment", "--poisson", "1", "-k", "4")
        assert code == 0
        assert out.splitlines()[0] == "15"
        assert out.splitlines()[1].startswith("15.0000000000000000000000000")

    def test_binomial_decimal_probability(self, capsys):
        code, out, _ = run(capsys, "moment", "--binomial", "2", "0.5", "-k", "2")
        assert code == 0 and out.splitlines()[0] == "3/2"

    def test_zeroth(self, capsys):
        assert run(capsys, "moment", "--poisson", "2", "-k", "0")[1].splitlines()[0] == "1"

    def test_bernoulli_sum(self, capsys):
        assert run(capsys, "moment", "--bernoulli-sum", "1/3", "2/3", "-k", "1")[1].splitlines()[0] == "1"

    def test_domain_error_exits_one(self, capsys):
        code, _, err = run(capsys, "moment", "--binomial", "3", "1.5", "-k", "2")
        assert code == 1 and "error" in err

    def test_usage_errors(self, capsys):
        assert usage_code("moment", "--poisson", "1") == 2
        assert usage_code("moment", "--poisson", "1", "-k", "2", "--bogus") == 2
        assert usage_code("moment", "--poisson", "x", "-k", "2") == 2


class TestBound:
    def test_theorem1(self, capsys):
        code, out, _ = run(capsys, "bound", "theorem1", "-k", "1", "--mu", "1")
        assert code == 0 and "value=1.44269504088896" in out

    def test_corollary(self, capsys):
        code, out, _ = run(capsys, "bound", "corollary", "-k", "2", "--mu", "8")
        lines = out.splitlines()
        assert "value=1.26562500000000" in lines[0]
        assert "value=1.28402541668774" in lines[1]

    def test_latala_needs_constants(self, capsys):
        assert usage_code("bound", "latala", "-k", "3", "--mu", "1") == 2
        code, out, _ = run(capsys, "bound", "latala", "-k", "3", "--mu", "1", "-c", "1/2", "-C", "2")
        assert code == 0 and len(out.splitlines()) == 2

    def test_binomial_lower_vacuous(self, capsys):
        code, out, _ = run(capsys, "bound", "binomial-lower", "-k", "5", "--binomial", "3", "1/10")
        assert code == 0 and "vacuous" in out

    def test_all(self, capsys):
        code, out, _ = run(capsys, "bound", "all", "-k", "4", "--mu", "2", "--raw")
        assert code == 0 and "conjecture_upper" in out and "raw_log=" in out

    def test_bits_floor(self):
        assert usage_code("--bits", "20", "bound", "theorem1", "-k", "1", "--mu", "1") == 2


class TestVerify:
    def test_writes_reports(self, capsys, tmp_path):
        out = tmp_path / "r"
        code, text, _ = run(capsys, "verify", "logs", "--out", str(out), "--grid", "1e-3:1e3:20:log")
        assert code == 0 and "[PASS] log_sandwich" in text
        assert (out / "log_sandwich.json").exists() and (out / "log_sandwich.csv").exists()
        assert (out / "summary.json").exists()

    def test_env_out_dir(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("SUBPOISSON_OUT_DIR", str(tmp_path / "env"))
        assert run(capsys, "verify", "counterexample")[0] == 0
        assert (tmp_path / "env" / "exponential_counterexample.json").exists()

    def test_conjecture_is_report_only(self, capsys, tmp_path):
        code, text, _ = run(capsys, "verify", "conjecture", "--out", str(tmp_path), *SMALL_VERIFY)
        assert code == 0 and "conjecture_sweep" in text

    def test_failing_suite_exits_one(self, capsys, tmp_path):
        code, text, err = run(capsys, "verify", "lambert", "--out", str(tmp_path), "--grid", "1e-3:1e3:20:log")
        assert code == 1 and "[FAIL] lambert_quadratic" in text and "lambert_quadratic" in err

    def test_byte_identical_reruns(self, capsys, tmp_path):
        for d in ("a", "b"):
            run(capsys, "verify", "all", "--out", str(tmp_path / d), *SMALL_VERIFY)
        names = sorted(p.name for p in (tmp_path / "a").iterdir())
        assert len(names) > 10
        for n in names:
            assert (tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes()

    def test_unknown_suite(self):
        assert usage_code("verify", "everything") == 2


class TestSweep:
    def test_bell_rows(self, capsys):
        from subpoisson.exact_moments import bell_number

        code, out, _ = run(capsys, "sweep", "--bounds", "theorem1", "--k", "1:20", "--mu", "1", "--exact", "poisson")
        assert code == 0
        lines = out.split("\r\n")
        header = lines[0].split(",")
        assert header[0] == "schema_version"
        i = header.index("log_exact")
        import mpmath

        for line in lines[1:21]:
            cells = line.split(",")
            k = int(cells[1])
            assert abs(mpmath.exp(mpmath.mpf(cells[i])) / bell_number(k) - 1) < 1e-15

    def test_empty_bounds(self):
        assert usage_code("sweep", "--bounds", "", "--k", "1:3", "--mu", "1") == 2
        assert usage_code("sweep", "--bounds", "nonsense", "--k", "1:3", "--mu", "1") == 2

    def test_svg(self, capsys, tmp_path):
        svg = tmp_path / "f.svg"
        csv = tmp_path / "f.csv"
        code, _, _ = run(capsys, "sweep", "--bounds", "theorem1,corollary_exp", "--k", "1:10", "--mu", "1,4",
                         "--exact", "poisson", "--csv", str(csv), "--svg", str(svg))
        assert code == 0
        root = ET.parse(svg).getroot()
        polylines = root.findall("{http://www.w3.org/2000/svg}polyline")
        assert len(polylines) == 6  # (exact, two bounds) x two means
        assert csv.read_bytes().count(b"\r\n") == 21
