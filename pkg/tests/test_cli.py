import dataclasses
import json
import subprocess
import sys


from helpers import SAMPLE_LOBSTER, lobster, path, spider
from lobster_broadcast import cli
from lobster_broadcast.beta_star import beta_star
from lobster_broadcast.cli import check_instance, main, run_conformance
from lobster_broadcast.constructor import step1
from lobster_broadcast.genlab import GenParams, enumerate_small, random_instances
from lobster_broadcast.lobster_model import LobsterSpec


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def dot_labels(text):
    labels = {}
    for line in text.splitlines():
        line = line.strip()
        if "[label=" in line:
            v, rest = line.split(" ", 1)
            labels[int(v)] = rest.split('"')[1]
    return labels


class TestCommands:
    def test_compute(self, capsys):
        code, out = run_json(capsys, "compute", "S2:[3,3] S1:2 S2:[3,3]")
        assert code == 0
        assert out["beta_star"] == 16 and out["types"] == ["Fa", "Xc", "Fa"]

    def test_outputs_are_byte_stable(self, capsys):
        first = run(capsys, "construct", SAMPLE_LOBSTER)
        second = run(capsys, "construct", SAMPLE_LOBSTER)
        assert first == second

    def test_json_and_edge_list_inputs_agree(self, capsys, tmp_path):
        spec = LobsterSpec.from_short("S2:[1,2] S1:2 S2:[3,1]")
        tree, _ = lobster(spec.short())
        edge_file = tmp_path / "t.txt"
        edge_file.write_text(tree.to_edge_list())
        _, a = run_json(capsys, "compute", spec.dumps())
        _, b = run_json(capsys, "compute", str(edge_file))
        assert a["beta_star"] == b["beta_star"]

    def test_validate_rejects(self, capsys):
        code, out = run_json(capsys, "validate", '{"subtrees":[{"type":"S1","leaves":2}]}')
        assert code == 2 and out["valid"] is False

    def test_validate_accepts(self, capsys):
        code, out = run_json(capsys, "validate", SAMPLE_LOBSTER)
        assert code == 0 and out["valid"] and out["k"] == 5

    def test_non_lobster_goes_to_oracle(self, capsys, tmp_path):
        f = tmp_path / "spider.txt"
        f.write_text(spider(3, 3).to_edge_list())
        code, out = run_json(capsys, "compute", str(f))
        assert code == 0 and out["source"] == "oracle"
        assert out["beta_b"] >= 2 * (6 - 1)

    def test_large_non_lobster_refused(self, capsys, tmp_path):
        f = tmp_path / "spider.txt"
        f.write_text(spider(3, 9).to_edge_list())
        code, _ = run(capsys, "compute", str(f))
        assert code == 2

    def test_oracle_cap(self, capsys):
        code, _ = run(capsys, "oracle", "S2:[3,3] S2:[3,3] S2:[3,3]")
        assert code == 4

    def test_oracle_milp(self, capsys):
        code, out = run_json(capsys, "oracle", "S2:[3,3] S2:[3,3] S2:[3,3]", "--method", "milp")
        assert code == 0 and out["beta_b"] == sum(out["witness"])

    def test_construct_stage(self, capsys):
        code, out = run_json(capsys, "construct", "S2:[1,1] S1:2 S2:[1,1]", "--stage", "1")
        assert code == 0 and out["stage"] == 1
        assert sum(out["assignment"].values()) == out["costs"][0] == 10

    def test_construct_bad_stage(self, capsys):
        code, _ = run(capsys, "construct", "S2:[1,1]", "--stage", "3")
        assert code == 2

    def test_verify(self, capsys, tmp_path):
        f = tmp_path / "p5.txt"
        f.write_text(path(5).to_edge_list())
        code, out = run_json(capsys, "verify", str(f), "[3,0,0,0,3]")
        assert code == 0 and out["optimal"] and out["dominating"]
        code, out = run_json(capsys, "verify", str(f), '{"0": 3, "4": 4}')
        assert code == 2 and not out["independent"]
        code, _ = run(capsys, "verify", str(f), "[1,1]")
        assert code == 2
        code, _ = run(capsys, "verify", str(f), "[3,0,0,0,3]", "--expect-cost", "7")
        assert code == 2

    def test_verify_accepts_construct_output(self, capsys, tmp_path):
        _, out = run(capsys, "construct", SAMPLE_LOBSTER)
        cert = tmp_path / "cert.json"
        cert.write_text(out)
        code, res = run_json(capsys, "verify", SAMPLE_LOBSTER, str(cert))
        assert code == 0 and res["optimal"]

    def test_gen_and_enumerate(self, capsys):
        code, out = run(capsys, "gen", "--seed", "3", "--count", "5")
        lines = out.splitlines()
        assert code == 0 and len(lines) == 5
        assert [LobsterSpec.parse(x) for x in lines] == list(random_instances(GenParams(seed=3), 5))
        code, out = run(capsys, "enumerate", "--max-vertices", "12")
        assert [LobsterSpec.parse(x) for x in out.splitlines()] == list(enumerate_small(12, 4))

    def test_bench(self, capsys):
        code, out = run_json(capsys, "bench", "--sizes", "200", "2000", "--repeats", "1")
        assert code == 0 and len(out["rows"]) == 2 and len(out["ratios"]) == 1

    def test_conformance(self, capsys):
        code, out = run_json(capsys, "conformance", "--source", "fuzz", "--count", "30", "--no-timing")
        assert code == 0 and out == {"instances_run": 30, "mismatches": []}

    def test_conformance_cap(self, capsys):
        code, _ = run(capsys, "conformance", "--max-vertices", "40")
        assert code == 4

    def test_conformance_reports_mutation(self, capsys, monkeypatch):
        real = cli.beta_star
        monkeypatch.setattr(cli, "beta_star", lambda s: dataclasses.replace(real(s), beta_star=real(s).beta_star + 1))
        code, out = run_json(capsys, "conformance", "--source", "fuzz", "--count", "5", "--no-timing")
        assert code == 3 and len(out["mismatches"]) == 5


class TestDot:
    def test_path_with_assignment(self, capsys, tmp_path):
        f = tmp_path / "p5.txt"
        f.write_text(path(5).to_edge_list())
        code, out = run(capsys, "export-dot", str(f), "--assignment", "[3,0,0,0,3]")
        assert code == 0
        labels = dot_labels(out)
        assert [labels[v] for v in range(5)] == ["3", "0", "0", "0", "3"]
        assert out.count(" -- ") == 4

    def test_no_assignment(self, capsys):
        _, out = run(capsys, "export-dot", "S2:[1,1]")
        assert set(dot_labels(out).values()) == {""}

    def test_sample_first_stage(self, capsys):
        _, struct = lobster(SAMPLE_LOBSTER)
        _, out = run(capsys, "export-dot", SAMPLE_LOBSTER, "--stage", "1")
        labels = dot_labels(out)
        assert [int(labels[v]) for v in range(struct.tree.n)] == list(step1(struct))
        assert "rank=same; 0 1 2 3 4 5;" in out


class TestLibrary:
    def test_mutated_formula_is_caught(self):
        specs = list(enumerate_small(12, 2))
        rep = run_conformance(specs, beta_fn=lambda s: beta_star(s).beta_star - 1)
        assert rep.instances_run == len(specs)
        assert len(rep.mismatches) == len(specs)

    def test_parallel_matches_serial(self):
        specs = list(random_instances(GenParams(seed=9, max_vertices=16), 12))
        serial = run_conformance(specs)
        parallel = run_conformance(specs, jobs=2)
        assert serial.to_json(False) == parallel.to_json(False)

    def test_check_instance_fields(self):
        chk = check_instance(LobsterSpec.from_short("S2:[3,3] S1:2 S2:[3,3]"))
        assert chk.ok and chk.nus == (14, 0, 1, 1) and chk.stage_costs == (14, 14, 15, 16)


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "lobster_broadcast", "compute", "S2:[1,1]"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(res.stdout)["beta_star"] == 6
