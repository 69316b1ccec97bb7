import json
import subprocess
import sys
from fractions import Fraction

import pytest

from curvelab.arith import Dyadic
from curvelab.cli import main, read_points


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def dy(obj) -> Fraction:
    return Dyadic.from_json(obj).to_fraction()


def test_solve(capsys):
    code, doc = run(capsys, "solve", "-f", "x^2 + y^2 - 1", "-g", "x - y")
    assert code == 0
    assert len(doc["solutions"]) == 2 and all(s["real"] for s in doc["solutions"])
    assert doc["resultant_x"] in ("2*x^2 - 1", "-2*x^2 + 1")
    assert "y" in doc["resultant_y"]


def test_solve_refine(capsys):
    code, doc = run(capsys, "solve", "-f", "x^2 + y^2 - 1", "-g", "x - y", "--refine", "60")
    assert code == 0
    for s in doc["solutions"]:
        assert dy(s["x"]["radius"]) < Fraction(1, 1 << 60)


def test_sepform_and_signat(capsys):
    assert run(capsys, "sepform", "-f", "x", "-g", "y^2 - y") == (0, {"s": 1})
    code, doc = run(capsys, "signat", "-f", "x^2 + y^2 - 1", "-g", "x - y", "-h", "x + y")
    assert code == 0
    assert sorted(e["sign"] for e in doc["signs"]) == [-1, 1]


def test_topology_outputs(capsys, tmp_path):
    svg, dot = tmp_path / "c.svg", tmp_path / "c.dot"
    code, doc = run(capsys, "topology", "-f", "y^2 - x^2*(x + 1)", "--svg", str(svg), "--dot", str(dot))
    assert code == 0
    assert len(doc["singular"]) == 1 and doc["shear_s"] == 0
    assert svg.read_text().lstrip().startswith("<?xml") and "<svg" in svg.read_text()
    assert "graph" in dot.read_text()


def test_topology_refine_and_shear(capsys):
    code, doc = run(capsys, "topology", "-f", "x*y - 1", "--shear", "1", "--refine", "20")
    assert code == 0 and doc["shear_s"] == 1
    code, doc = run(capsys, "topology", "-f", "x*y - 1", "--shear", "0")
    assert code == 3 and doc["error"] == "invalid_input"


def test_resultant(capsys):
    code, doc = run(capsys, "resultant", "-f", "x^2 + y^2 - 1", "-g", "2*y", "--axis", "y")
    assert code == 0
    assert doc["resultant"] == "4*x^2 - 4" and doc["coeffs"] == ["-4", "0", "4"]
    code, doc = run(capsys, "resultant", "-f", "x - y", "-g", "x + y", "--axis", "x")
    assert doc["variable"] == "y" and doc["eliminated"] == "x"


def test_mpeval(capsys, tmp_path):
    pts = tmp_path / "pts.txt"
    pts.write_text("# points\n0\n1\n3*2^-1\n1 1\n")
    code, doc = run(capsys, "mpeval", "-F", "x^2 + 1", "--points", str(pts), "-L", "30")
    assert code == 0 and doc["L"] == 30
    got = [(dy(v["re"]), dy(v["im"])) for v in doc["values"]]
    want = [(1, 0), (2, 0), (Fraction(13, 4), 0), (1, 2)]
    for (a, b), (c, d) in zip(got, want):
        assert abs(a - c) + abs(b - d) <= Fraction(2, 1 << 30)
    code, doc = run(capsys, "mpeval", "-F", "x*y", "--points", str(pts), "-L", "3")
    assert code == 3


def test_read_points_json(tmp_path):
    p = tmp_path / "pts.json"
    p.write_text(json.dumps([{"re": {"m": "3", "e": -1}, "im": {"m": "0", "e": 0}}]))
    (z,) = read_points(str(p))
    assert z.re == Dyadic(3, -1)


def test_error_codes(capsys):
    code, doc = run(capsys, "solve", "-f", "x^", "-g", "y")
    assert code == 2 and doc["error"] == "syntax" and doc["offset"] == 2
    code, doc = run(capsys, "solve", "-f", "x - y", "-g", "2*x - 2*y")
    assert code == 3 and doc["error"] == "common_factor"
    code, doc = run(capsys, "topology", "-f", "5")
    assert code == 3


def test_json_polynomial_input(capsys):
    code, doc = run(capsys, "sepform", "-f", '[[1, 0, "1"], [0, 1, "-1"]]', "-g", "x^2 - x")
    assert code == 0 and doc == {"s": 0}


def test_deterministic_output(capsys):
    outs = []
    for _ in range(2):
        main(["topology", "-f", "(x^2 + y^2 - 1)*(x^2 + y^2 - 4)"])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "curvelab.cli", "sepform", "-f", "x", "-g", "y^2 - y"],
                       capture_output=True, text=True, check=True)
    assert json.loads(r.stdout) == {"s": 1}
    r = subprocess.run([sys.executable, "-m", "curvelab.cli", "signat", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "-h" in r.stdout
