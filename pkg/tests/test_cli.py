import json
from pathlib import Path

import pytest

from diskrig import cli


def run_text(text: str, tmp_path: Path) -> int:
    return cli.run(cli.parse_config(text), out_dir=tmp_path)


class TestConfig:
    def test_round_trip_identity(self):
        cfg = cli.parse_config(
            "command = rigidity-scan\nlam = pullback(zpow 2)\nc = 4\n"
            "expect-verdict = BOUNDED_NONZERO\n")
        assert cli.parse_config(cli.serialize_config(cfg)) == cfg

    def test_unknown_key_rejected(self):
        with pytest.raises(cli.ConfigError, match="unknown key"):
            cli.parse_config("command = golusin\nwibble = 3\n")

    def test_unknown_command_rejected(self):
        with pytest.raises(cli.ConfigError, match="unknown command"):
            cli.parse_config("command = frobnicate\n")

    def test_missing_command_rejected(self):
        with pytest.raises(cli.ConfigError, match="command"):
            cli.parse_config("lam = poincare\n")

    def test_comments_and_blanks_ignored(self):
        cfg = cli.parse_config("# header\n\ncommand = golusin\n# tail\n")
        assert cfg.command == "golusin"

    def test_metric_expressions(self):
        assert cli.parse_metric("poincare").name == "poincare"
        assert cli.parse_metric("mu_max(0.5)").zeros[0].order == 0.5
        assert cli.parse_metric("scale(0.9, poincare)").density(0j) == \
            pytest.approx(0.9)
        assert cli.parse_metric("pullback(zpow 2)").zeros[0].order == 1.0
        assert cli.parse_metric("exp_weight(example4_1(3))").name == \
            "weighted[3]"
        with pytest.raises(cli.ConfigError):
            cli.parse_metric("nonsense(3)")


class TestExitCodes:
    def test_pass_is_zero(self, tmp_path):
        code = run_text("command = golusin\nlam = pullback(zpow 2)\n",
                        tmp_path)
        assert code == 0

    def test_failed_expectation_is_one(self, tmp_path):
        code = run_text(
            "command = rigidity-scan\nlam = pullback(auto 0.3+0.1j 0.0)\n"
            "expect-verdict = BOUNDED_NONZERO\nk-max = 14\n", tmp_path)
        assert code == 1

    def test_malformed_metric_is_two(self, tmp_path):
        code = run_text("command = golusin\nlam = wibble(2)\n", tmp_path)
        assert code == 2

    def test_main_bad_config_file(self):
        assert cli.main(["/nonexistent/config.cfg"]) == 2

    def test_main_end_to_end(self, tmp_path):
        cfg = tmp_path / "scan.cfg"
        cfg.write_text("command = rigidity-scan\nlam = pullback(zpow 2)\n"
                       "expect-verdict = BOUNDED_NONZERO\n"
                       "expect-limit = -0.5\nout = scan.json\n"
                       "profile = scan.dat\n")
        assert cli.main([str(cfg), "--out-dir", str(tmp_path)]) == 0
        assert (tmp_path / "scan.json").exists()


class TestReports:
    def test_report_written_even_on_failure(self, tmp_path):
        code = run_text(
            "command = rigidity-scan\nlam = pullback(auto 0.2 0.0)\n"
            "expect-verdict = BOUNDED_NONZERO\nk-max = 14\nout = rep.json\n",
            tmp_path)
        assert code == 1
        report = json.loads((tmp_path / "rep.json").read_text())
        assert report["passed"] is False

    def test_determinism_byte_identical(self, tmp_path):
        text = ("command = rigidity-scan\nlam = pullback(feps 0.05)\n"
                "out = det.json\nseed = 3\n")
        run_text(text, tmp_path)
        first = (tmp_path / "det.json").read_bytes()
        run_text(text, tmp_path)
        assert (tmp_path / "det.json").read_bytes() == first

    def test_profile_rows_decreasing_and_sidecar_parses(self, tmp_path):
        run_text("command = rigidity-scan\nlam = pullback(zpow 2)\n"
                 "out = p.json\nprofile = p.dat\n", tmp_path)
        rows = [line.split() for line in
                (tmp_path / "p.dat").read_text().splitlines()]
        firsts = [float(a) for a, _ in rows]
        assert all(b < a for a, b in zip(firsts, firsts[1:]))
        sidecar = json.loads((tmp_path / "p.dat.meta.json").read_text())
        assert sidecar["command"] == "rigidity-scan"
        assert sidecar["tool_version"]

    def test_sidecar_round_trips_through_parser(self, tmp_path):
        text = ("command = rigidity-scan\nlam = pullback(zpow 2)\n"
                "out = s.json\nprofile = s.dat\n")
        run_text(text, tmp_path)
        sidecar = json.loads((tmp_path / "s.dat.meta.json").read_text())
        rebuilt = "\n".join([f"command = {sidecar['command']}"]
                            + [f"{k} = {v}"
                               for k, v in sidecar["parameters"].items()])
        assert cli.parse_config(rebuilt) == cli.parse_config(text)

    def test_cubic_family_profile_asymptote(self, tmp_path):
        # the scaled profile values approach the verified constant -2 eps
        eps = 1.0 / 12.0
        run_text(f"command = rigidity-scan\nlam = pullback(feps {eps!r})\n"
                 "profile = f.dat\nout = f.json\n", tmp_path)
        rows = [tuple(map(float, line.split()))
                for line in (tmp_path / "f.dat").read_text().splitlines()]
        mid = [v for e, v in rows if 1e-4 < e < 1e-2]
        assert mid
        assert abs(mid[-1] + 2.0 * eps) <= 0.01 * 2.0 * eps


class TestCoverage:
    def test_every_checker_reachable_from_exactly_one_subcommand(self):
        seen = {}
        for name, spec in cli.COMMANDS.items():
            for checker in spec.covers:
                assert checker not in seen, \
                    f"{checker} reachable from {seen[checker]} and {name}"
                seen[checker] = name
        assert set(seen) == set(cli.AUDITED_CHECKERS)

    def test_subcommand_names(self):
        assert set(cli.COMMANDS) == {
            "verify-harnack", "golusin", "rigidity-scan", "pj-decompose",
            "sequence-scan", "zero-track", "liouville-solve", "ball-check",
            "burns-krantz"}


class TestSubcommands:
    @pytest.mark.parametrize("text", [
        "command = burns-krantz\nmap = id\n",
        "command = sequence-scan\nfamily = moving-zero\n"
        "expect-verdict = FADING_ZEROS\n",
        "command = sequence-scan\nfamily = rotations\n"
        "expect-verdict = automorphism-like\n",
        "command = sequence-scan\nfamily = extremal-witness\nz = 0.5\n",
        "command = zero-track\nfamily = extremal-orders\n",
        "command = zero-track\nfamily = moving-zero\n",
        "command = ball-check\nwhat = slices\nN = 3\n",
        "command = ball-check\nwhat = band\n",
        "command = ball-check\nwhat = power\n",
        "command = ball-check\nwhat = geodesic-rate\n",
        "command = ball-check\nwhat = comparison\n",
        "command = ball-check\nwhat = custom\nmap = 2,0:1 |\n"
        "expect-verdict = BOUNDED_NONZERO\n",
        "command = rigidity-scan\nlam = pullback(auto 0.3+0.1j 0.7)\n"
        "expect-verdict = VANISHES\n",
        "command = liouville-solve\nkappa = const-4\nn = 65\n",
    ])
    def test_pass_paths(self, text, tmp_path):
        assert run_text(text, tmp_path) == 0

    def test_liouville_csv_export(self, tmp_path):
        code = run_text("command = liouville-solve\nkappa = const-4\nn = 65\n"
                        f"out-csv = {tmp_path}/sol.csv\n", tmp_path)
        assert code == 0
        lines = (tmp_path / "sol.csv").read_text().splitlines()
        assert lines[0] == "x,y,log_density"
        assert len(lines) > 2000

    def test_pj_decompose_with_bound(self, tmp_path):
        code = run_text("command = pj-decompose\nlam = pullback(zpow 2)\n"
                        "mu = poincare\nR = 0.9\nz = 0.4\nn-r = 80\n"
                        "n-t = 160\nout = pj.json\n", tmp_path)
        assert code == 0
        rep = json.loads((tmp_path / "pj.json").read_text())
        assert rep["residual"] <= 1e-3
        assert rep["quotient_bound"]["passed"]
