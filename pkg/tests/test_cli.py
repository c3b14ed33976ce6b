"""Command-line behavior: outputs, exit codes, determinism, and stream
separation (results on stdout, diagnostics on stderr)."""

import io
import json
import subprocess
import sys
from contextlib import redirect_stderr, redirect_stdout

import pytest

from smc.cli import main
from smc.csp import evaluate, parse_csp
from smc.domset import LabeledGraph, parse_labeled_graph
from smc.graph import Graph, format_graph, parse_graph
from smc.oracles import brute_domset, brute_max2csp
from smc.separator import Separation, verify_separation

K4 = "graph 4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"
SC_SAMPLE = "setcover 3 2\nset 0 0 1\nset 1 2\n"


def run(argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    old_stdin = sys.stdin
    sys.stdin = io.StringIO(stdin)
    try:
        with redirect_stdout(out), redirect_stderr(err):
            code = main(argv)
    finally:
        sys.stdin = old_stdin
    return code, out.getvalue(), err.getvalue()


class TestSolve:
    def test_maxcut_k4(self):
        code, out, err = run(["maxcut"], K4)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "score 4"
        colors = list(map(int, lines[1].split()[1:]))
        g = parse_graph(K4)
        cut = sum(1 for u, v in g.edges() if colors[u] != colors[v])
        assert cut == 4

    def test_solve_csp_matches_oracle(self):
        code, gen_out, _ = run(["gen", "csp", "--n", "6", "--m", "9", "--r", "3",
                                "--seed", "5"])
        assert code == 0
        inst = parse_csp(gen_out)
        code, out, _ = run(["solve-csp"], gen_out)
        assert code == 0
        score = int(out.splitlines()[0].split()[1])
        assert score == brute_max2csp(inst).score
        phi = dict(enumerate(map(int, out.splitlines()[1].split()[1:])))
        assert evaluate(inst, phi) == score

    def test_local_policy_same_score(self):
        _, gen_out, _ = run(["gen", "csp", "--n", "7", "--m", "10", "--seed", "2"])
        _, sep_out, _ = run(["solve-csp"], gen_out)
        _, loc_out, _ = run(["solve-csp", "--policy", "local"], gen_out)
        assert sep_out.splitlines()[0] == loc_out.splitlines()[0]

    def test_max2sat(self):
        cnf = "p cnf 3 4\n1 2 0\n-1 3 0\n-2 -3 0\n1 0\n"
        code, out, _ = run(["max2sat"], cnf)
        assert code == 0
        assert out.splitlines()[0] == "score 4"

    def test_json_payload(self):
        code, out, _ = run(["maxcut", "--json"], K4)
        assert code == 0
        payload = json.loads(out)
        assert payload["score"] == 4
        assert len(payload["assignment"]) == 4
        assert payload["stats"]["leaves"] >= 1


class TestCounting:
    def test_count_ds_both_engines_match_oracle(self):
        _, text, _ = run(["gen", "g3", "--n", "8"])
        expected = brute_domset(LabeledGraph.all_u(parse_graph(text))).to_list(8)
        for extra in ([], ["--subcubic"], ["--subcubic", "--policy", "local"]):
            code, out, _ = run(["count-ds", *extra], text)
            assert code == 0
            assert list(map(int, out.split()[1:])) == expected

    def test_count_ds_labels_need_subcubic(self):
        text = "graph 3 2\n0 1\n1 2\nlabel 0 N\n"
        code, _, err = run(["count-ds"], text)
        assert code == 2 and "subcubic" in err
        code, out, _ = run(["count-ds", "--subcubic"], text)
        assert code == 0
        expected = brute_domset(parse_labeled_graph(text)).to_list(3)
        assert list(map(int, out.split()[1:])) == expected

    def test_count_ds_general_degree(self):
        g = Graph.complete(5)
        code, out, _ = run(["count-ds"], format_graph(g))
        assert code == 0
        expected = brute_domset(LabeledGraph.all_u(g)).to_list(5)
        assert list(map(int, out.split()[1:])) == expected

    def test_count_sc(self):
        code, out, _ = run(["count-sc"], SC_SAMPLE)
        assert code == 0
        assert out == "counts 0 0 1\n"

    def test_count_sc_audit_clean(self):
        _, text, _ = run(["gen", "g3", "--n", "12"])
        code, out, err = run(["count-ds", "--audit-measure", "--stats"], text)
        assert code == 0
        assert "stat,audit_violations,0" in err

    def test_oracle_subcommands_agree(self):
        _, text, _ = run(["gen", "g3", "--n", "8"])
        _, fast, _ = run(["count-ds"], text)
        _, ref, _ = run(["oracle", "ds"], text)
        assert fast == ref
        _, fast, _ = run(["count-sc"], SC_SAMPLE)
        _, ref, _ = run(["oracle", "sc"], SC_SAMPLE)
        assert fast == ref


class TestSeparate:
    @pytest.mark.parametrize("gen_args", [["g3", "--n", "16"], ["cubic", "--n", "14"]])
    def test_output_is_valid_separation(self, gen_args):
        _, text, _ = run(["gen", *gen_args, "--seed", "3"])
        code, out, _ = run(["separate", "--seed", "3"], text)
        assert code == 0
        sides = {}
        for line in out.splitlines():
            name, *ids = line.split()
            sides[name] = set(map(int, ids))
        sep = Separation(sides["left"], sides["sep"], sides["right"])
        assert verify_separation(parse_graph(text), sep)

    def test_degree_four_uses_bag_sweep(self):
        _, text, _ = run(["gen", "g4", "--n3", "8", "--n4", "4"])
        code, out, _ = run(["separate"], text)
        assert code == 0
        sides = {ln.split()[0]: set(map(int, ln.split()[1:])) for ln in out.splitlines()}
        sep = Separation(sides["left"], sides["sep"], sides["right"])
        assert verify_separation(parse_graph(text), sep)
        assert abs(len(sides["left"]) - len(sides["right"])) <= 1


class TestGen:
    def test_families_roundtrip(self):
        for args, n in ((["g3", "--n", "12"], 12), (["g4", "--n", "16"], 15),
                        (["g5", "--n", "40"], 39), (["cubic", "--n", "10"], 10)):
            code, out, _ = run(["gen", *args])
            assert code == 0
            assert parse_graph(out).n == n

    def test_csp_roundtrip(self):
        code, out, _ = run(["gen", "csp", "--n", "5", "--m", "6", "--r", "2",
                            "--seed", "1"])
        assert code == 0
        inst = parse_csp(out)
        inst.check()
        assert inst.n == 5 and inst.graph.m == 6

    def test_missing_parameter(self):
        code, _, err = run(["gen", "g3"])
        assert code == 2 and "--n" in err

    def test_bad_family_parameter(self):
        code, _, err = run(["gen", "g3", "--n", "10"])
        assert code == 2


class TestTraceLb:
    def test_g3_example_line(self):
        code, out, _ = run(["trace-lb", "--family", "g3", "--n", "40"])
        assert code == 0
        assert out == "branchings=10 expected=10 match=true\n"

    def test_g4_split_and_explicit(self):
        _, by_n, _ = run(["trace-lb", "--family", "g4", "--n", "16"])
        _, by_pair, _ = run(["trace-lb", "--family", "g4", "--n3", "8", "--n4", "8"])
        assert by_n == by_pair == "branchings=4 expected=4 match=true\n"

    def test_g5_json(self):
        code, out, _ = run(["trace-lb", "--family", "g5", "--n", "40", "--json"])
        assert code == 0
        payload = json.loads(out)
        assert payload == {"branchings": 17, "expected": 17, "match": True,
                           "guard_failures": []}

    def test_step_log_on_stderr(self):
        _, _, err = run(["trace-lb", "--family", "g3", "--n", "8", "--stats"])
        assert "stat,step0," in err and "stat,step1," in err


class TestAuditMeasure:
    def test_sc_line(self):
        code, out, err = run(["audit-measure", "--system", "sc"])
        assert code == 0
        assert out == "feasible=true exponent=0.60243 base=1.5183\n"
        assert "feasible=true" in err  # full report is diagnostics

    def test_csp_line(self):
        code, out, _ = run(["audit-measure", "--system", "csp"])
        assert code == 0
        fields = dict(kv.split("=") for kv in out.split())
        assert fields["feasible"] == "true"
        assert abs(float(fields["exponent"]) - 0.2) < 1e-9
        assert abs(float(fields["base"]) - 1.2458) <= 1e-4

    def test_weights_override_can_break_feasibility(self, tmp_path):
        wfile = tmp_path / "w.txt"
        wfile.write_text("w_sep 3 0.30\n")  # separator cheaper than its payoff
        code, out, _ = run(["audit-measure", "--system", "sc",
                            "--weights", str(wfile)])
        assert code == 0
        assert out == "feasible=false\n"

    def test_json(self):
        code, out, _ = run(["audit-measure", "--system", "sc", "--json"])
        payload = json.loads(out)
        assert payload["feasible"] is True
        assert abs(payload["base"] - 1.5183) <= 1e-4


class TestExitCodes:
    def test_parse_error_is_2(self):
        code, _, err = run(["maxcut"], "graph 2 5\n0 1\n")
        assert code == 2 and "error:" in err

    def test_guard_error_is_1(self):
        big = "max2csp 2 30 0\nnil 0\n" + "".join(f"v {i} 0 0\n" for i in range(30))
        code, _, err = run(["oracle", "csp"], big)
        assert code == 1 and "guard" in err

    def test_unknown_subcommand_is_2(self):
        assert run(["frobnicate"])[0] == 2

    def test_missing_input_file_is_2(self):
        code, _, _ = run(["maxcut", "--input", "/nonexistent/path.graph"])
        assert code == 2


class TestDeterminism:
    def test_byte_identical_stdout(self):
        for argv, stdin in (
            (["maxcut", "--json"], K4),
            (["gen", "cubic", "--n", "20", "--seed", "9"], ""),
            (["count-sc"], SC_SAMPLE),
            (["separate", "--seed", "4"], K4.replace("graph 4 6", "graph 4 6")),
        ):
            a = run(argv, stdin)
            b = run(argv, stdin)
            assert a == b

    def test_threads_env_is_tolerated(self, monkeypatch):
        monkeypatch.setenv("SMC_THREADS", "4")
        assert run(["count-sc"], SC_SAMPLE)[0] == 0
        monkeypatch.setenv("SMC_THREADS", "bogus")
        code, out, err = run(["count-sc"], SC_SAMPLE)
        assert code == 0 and "SMC_THREADS" in err


def test_module_entry_point(tmp_path):
    path = tmp_path / "k4.graph"
    path.write_text(K4)
    proc = subprocess.run(
        [sys.executable, "-m", "smc.cli", "maxcut", "--input", str(path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "score 4"
