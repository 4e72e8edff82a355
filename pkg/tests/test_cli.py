import json

import pytest

from alpha_cut import parse_instance
from alpha_cut.cli import main
from alpha_cut.generate import generate_instance
from alpha_cut.oracle import check_weak_general_position, check_well_separation
from alpha_cut.render import UnsupportedDimension, render_svg

from helpers import DEGEN, INST4, NOSEP


def run(argv, tmp_path):
    out = tmp_path / "out.txt"
    code = main(argv + ["--output", str(out)])
    return code, out.read_text() if out.exists() else ""


def test_solve_exit_codes(tmp_path, tmp_instance):
    code, text = run(["solve", "--input", tmp_instance(INST4.with_alpha((2, 2)))], tmp_path)
    doc = json.loads(text)
    assert code == 0 and doc["kind"] == "G1" and doc["points"] == [[1, 0], [2, 0]]
    code, text = run(["solve", "--input", tmp_instance(DEGEN)], tmp_path)
    assert code == 2 and json.loads(text)["kind"] == "GV1"
    code, text = run(["solve", "--input", tmp_instance(NOSEP)], tmp_path)
    assert code == 3 and json.loads(text)["kind"] == "GV2"


def test_solve_trace(tmp_path, tmp_instance):
    code, text = run(["solve", "--input", tmp_instance(INST4), "--trace"], tmp_path)
    trace = json.loads(text)["trace"]
    assert code == 0 and trace
    assert set(trace[0]) == {"step", "vertex_bits", "alpha", "dist_sq", "potential", "phase", "class", "wedge"}


def test_walk_lines(tmp_path, tmp_instance):
    code, text = run(["walk", "--input", tmp_instance(INST4)], tmp_path)
    lines = [json.loads(line) for line in text.splitlines()]
    assert code == 0 and "result" in lines[-1]
    forward = [r["potential"] for r in lines[:-1] if r["phase"] == "forward"]
    assert forward == sorted(set(forward))


def test_verify_reports(tmp_path, tmp_instance):
    code, text = run(["verify", "--input", tmp_instance(INST4)], tmp_path)
    report = json.loads(text)
    assert code == 0 and report["bijection"] and report["cuts"] == 4
    code, text = run(["verify", "--input", tmp_instance(NOSEP)], tmp_path)
    assert code == 3 and json.loads(text)["well_separation"]["witness"]["I"] == [1]
    code, _ = run(["verify", "--input", tmp_instance(DEGEN)], tmp_path)
    assert code == 2


def test_usage_errors(tmp_path, tmp_instance, capsys):
    assert main(["solve", "--input", str(tmp_path / "missing.json")]) == 1
    assert main(["frobnicate"]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"dimension": 2, "colors": [[[0, 0]], [[1, 1]]], "alpha": [2, 1]}')
    assert main(["solve", "--input", str(bad)]) == 1
    assert "alpha out of range" in capsys.readouterr().err
    assert main(["solve", "--input", tmp_instance(INST4), "--seed", "-1"]) == 1
    assert main(["verify", "--input", tmp_instance(NOSEP), "--budget", "2"]) == 1
    assert main(["solve", "--input", tmp_instance(INST4), "--budget", "0"]) == 1


def test_gen_is_deterministic(tmp_path, monkeypatch):
    argv = ["gen", "--dimension", "2", "--sizes", "3,3", "--margin", "1"]
    code, first = run(argv + ["--seed", "9"], tmp_path)
    _, second = run(argv + ["--seed", "9"], tmp_path)
    assert code == 0 and first == second
    monkeypatch.setenv("ALPHA_CUT_SEED", "9")
    _, third = run(argv, tmp_path)
    assert third == first
    inst = parse_instance(first)
    assert check_weak_general_position(inst) is None and check_well_separation(inst) is None


def test_gen_rejects_zero_margin(tmp_path):
    code, _ = run(["gen", "--dimension", "2", "--sizes", "3,3", "--margin", "0"], tmp_path)
    assert code == 1
    with pytest.raises(ValueError):
        generate_instance(2, (3, 3), margin=0)


def test_generator_fixes_alpha_when_asked():
    inst = generate_instance(3, (2, 3, 4), seed=4, alpha=(1, 3, 2))
    assert inst.alpha == (1, 3, 2) and inst.sizes == (2, 3, 4)


def test_render_svg(tmp_path, tmp_instance):
    code, svg = run(["render", "--input", tmp_instance(INST4.with_alpha((2, 2)))], tmp_path)
    assert code == 0
    assert svg.count('class="point"') == 4 and svg.count('class="g1"') == 1
    code, svg = run(["render", "--input", tmp_instance(INST4.with_alpha((2, 2))), "--trace"], tmp_path)
    # two triangles per traced wedge
    walk = [json.loads(line) for line in run(["walk", "--input", tmp_instance(INST4.with_alpha((2, 2)))], tmp_path)[1].splitlines()]
    wedges = sum(1 for r in walk[:-1] if r["wedge"])
    assert svg.count('class="wedge"') == 2 * wedges
    code, _ = run(["render", "--input", tmp_instance(generate_instance(3, (2, 2, 2)))], tmp_path)
    assert code == 1
    with pytest.raises(UnsupportedDimension):
        render_svg(generate_instance(3, (2, 2, 2)))
