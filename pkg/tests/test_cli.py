import json
import subprocess
import sys

import pytest

from ambient_cycles.cli import main


def run_cli(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_dist_torus(capsys):
    code, out, _ = run_cli(capsys, "dist", "--surface", "torus", "0.1", "0.1", "0.9", "0.1")
    assert code == 0
    payload = json.loads(out)
    assert abs(payload["distance"] - 0.2) < 1e-12
    assert payload["minimizers"] == [[-1, 0]]
    assert payload["tied"] is False


def test_dist_rp2_antipodal(capsys):
    code, out, _ = run_cli(
        capsys, "dist", "--surface", "rp2", "0", "0", "1", "0", "0", "-1"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["distance"] == 0.0
    assert payload["minimizers"] == [1]


def test_dist_genus2(capsys):
    code, out, _ = run_cli(capsys, "dist", "--surface", "genus2", "0", "0", "0.5", "0")
    assert code == 0
    payload = json.loads(out)
    assert abs(payload["distance"] - 1.0986122886681098) < 1e-12
    assert payload["minimizers"] == ["e"]


def test_dist_malformed_coords(capsys):
    code, _, err = run_cli(capsys, "dist", "--surface", "torus", "0.1", "0.1", "0.9")
    assert code == 2
    assert "coordinates" in err


def test_dist_bad_surface(capsys):
    code, _, err = run_cli(capsys, "dist", "--surface", "sphere", "0", "0", "1", "1")
    assert code == 2


def meridian_csv(tmp_path, n=8):
    path = tmp_path / "meridian.csv"
    lines = ["x,y"] + [f"{k / n},0.5" for k in range(n)]
    path.write_text("\n".join(lines) + "\n")
    return path


def test_classify_meridian(tmp_path, capsys):
    path = meridian_csv(tmp_path)
    out_path = tmp_path / "report.json"
    code, _, _ = run_cli(
        capsys,
        "classify", "--surface", "torus", "--epsilon", "0.15",
        str(path), "-o", str(out_path),
    )
    assert code == 0
    report = json.loads(out_path.read_text())
    assert len(report["cycles"]) == 1
    free = report["cycles"][0]["class_free"]
    assert free in ([1, 0], [-1, 0])
    assert report["cocycle"]["violations"] == []


def test_classify_round_trip(tmp_path, capsys):
    path = meridian_csv(tmp_path)
    code, out, _ = run_cli(
        capsys, "classify", "--surface", "torus", "--epsilon", "0.15", str(path)
    )
    assert code == 0
    report = json.loads(out)
    from ambient_cycles import AbelianClass, EpsilonGraph, SurfaceKind, TransitionMap
    from ambient_cycles.transition import homology_class

    graph = EpsilonGraph.from_json(report["graph"])
    tmap = TransitionMap.from_json(graph, report["transition"])
    for cyc in report["cycles"]:
        walk = cyc["walk"]
        chain = [(1, (walk[s], walk[s + 1])) for s in range(len(walk) - 1)]
        cls = homology_class(tmap, chain)
        assert list(cls.free) == cyc["class_free"]
        assert list(cls.torsion) == cyc["class_torsion"]


def test_classify_empty_csv(tmp_path, capsys):
    path = tmp_path / "empty.csv"
    path.write_text("")
    code, _, err = run_cli(
        capsys, "classify", "--surface", "torus", "--epsilon", "0.2", str(path)
    )
    assert code == 2
    assert "empty" in err


def test_classify_duplicate_point(tmp_path, capsys):
    path = tmp_path / "dup.csv"
    path.write_text("x,y\n0.1,0.1\n1.1,0.1\n")
    code, _, err = run_cli(
        capsys, "classify", "--surface", "torus", "--epsilon", "0.2", str(path)
    )
    assert code == 2
    assert "duplicate" in err


def test_classify_bad_header(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n0.1,0.1\n")
    code, _, err = run_cli(
        capsys, "classify", "--surface", "torus", "--epsilon", "0.2", str(path)
    )
    assert code == 2
    assert "header" in err


def test_ppm_writes_and_is_deterministic(tmp_path, capsys):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        code, _, err = run_cli(
            capsys,
            "ppm", "--surface", "torus", "-n", "2000", "--seed", "7", "-o", str(out),
        )
        assert code == 0
        assert "quadruples" in err
    jsonl1 = (out1 / "ppm.jsonl").read_bytes()
    jsonl2 = (out2 / "ppm.jsonl").read_bytes()
    assert jsonl1 == jsonl2
    summary = json.loads((out1 / "summary.json").read_text())
    lines = [json.loads(l) for l in jsonl1.decode().splitlines()]
    assert summary["persistent"] == len(lines)
    assert summary["total"] == 2000
    assert 0 < summary["phi_bar"] < 1
    n_degen = sum(1 for l in lines if l["degenerate"])
    assert summary["degenerate"] == n_degen
    assert sum(summary["class_counts"].values()) == len(lines) - n_degen
    for l in lines[:10]:
        assert set(l) == {
            "surface", "index", "birth", "death", "class_free", "class_torsion", "degenerate",
        }
        assert l["death"] > l["birth"] > 0


def test_ppm_thread_count_does_not_change_output(tmp_path, capsys, monkeypatch):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    run_cli(capsys, "ppm", "--surface", "klein", "-n", "1000", "--seed", "3",
            "-o", str(out1), "--threads", "1")
    monkeypatch.setenv("AMBIENT_CYCLES_THREADS", "3")
    run_cli(capsys, "ppm", "--surface", "klein", "-n", "1000", "--seed", "3", "-o", str(out2))
    assert (out1 / "ppm.jsonl").read_bytes() == (out2 / "ppm.jsonl").read_bytes()


def test_ppm_rejects_bad_n(capsys, tmp_path):
    code, _, _ = run_cli(
        capsys, "ppm", "--surface", "torus", "-n", "0", "--seed", "1", "-o", str(tmp_path)
    )
    assert code == 2


def test_ppm_io_failure_exits_4(capsys, tmp_path):
    blocker = tmp_path / "not_a_dir"
    blocker.write_text("occupied")
    code, _, err = run_cli(
        capsys, "ppm", "--surface", "torus", "-n", "10", "--seed", "1", "-o", str(blocker)
    )
    assert code == 4
    assert "I/O" in err


def test_resource_cap_exits_3(capsys):
    # points near opposite octagon vertices need a deeper word ball than a
    # zero cap allows; the same query succeeds with the default cap and
    # finds the length-4 vertex word
    import math

    z = (0.838 * math.cos(math.pi / 8), 0.838 * math.sin(math.pi / 8))
    w = (-z[0], -z[1])
    args = ["dist", "--surface", "genus2", str(z[0]), str(z[1]), str(w[0]), str(w[1])]
    code, _, err = run_cli(capsys, *args, "--max-word-length", "0")
    assert code == 3
    assert "word length" in err
    code, out, _ = run_cli(capsys, *args)
    assert code == 0
    assert json.loads(out)["distance"] < 0.1


def test_surfaces_listing(capsys):
    code, out, _ = run_cli(capsys, "surfaces")
    assert code == 0
    info = json.loads(out)
    assert [e["surface"] for e in info] == ["torus", "klein", "rp2", "genus2"]
    shapes = {(e["class_free_rank"], e["class_torsion_bits"]) for e in info}
    assert shapes == {(2, 0), (1, 1), (0, 1), (4, 0)}


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "ambient_cycles.cli", "dist", "--surface", "torus",
         "0", "0", "0.25", "0"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert abs(json.loads(proc.stdout)["distance"] - 0.25) < 1e-12
