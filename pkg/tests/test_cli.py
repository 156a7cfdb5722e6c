import json
from fractions import Fraction

from treebmo import jsonio
from treebmo.cli import main
from treebmo.funcs import FinFunc
from treebmo.tree import Tree, Vertex

T2 = Tree(2)
U = Vertex(0, (1,))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def write_func(tmp_path, name, f):
    path = tmp_path / name
    path.write_text(json.dumps(jsonio.finfunc_json(f)))
    return str(path)


def test_measure_vertex(capsys):
    code, data = run(capsys, "measure", "--vertex", "0:1")
    assert code == 0 and data["measure"] == "1/2"


def test_measure_ball(capsys):
    code, data = run(capsys, "--m", "3", "measure", "--ball", "0:", "2")
    assert code == 0 and data["measure"] == "17"


def test_measure_cz(capsys):
    code, data = run(capsys, "measure", "--cz", "cz root=0: h=2")
    assert code == 0 and data["measure"] == "7"


def test_ball_agreement(capsys):
    code, data = run(capsys, "ball", "--center", "0:", "--radius", "3", "--members")
    assert code == 0 and data["agree"] and len(data["members"]) > 4


def test_cz_report(capsys):
    code, data = run(capsys, "cz", "--trapezoid", "trapezoid root=0: h=2")
    assert code == 0
    assert data["envelope"]["measure"] == "7"
    assert data["envelope_ratio"] == "7/2"


def test_cover(capsys):
    code, data = run(capsys, "cover", "--n", "1")
    assert code == 0 and data["set"]["root"] == "1:" and data["set"]["h"] == 2
    code, data = run(capsys, "cover", "--vertex", "7:")
    assert code == 0 and data["index"] == 15


def test_bmo_norm(tmp_path, capsys):
    path = write_func(tmp_path, "f.json", FinFunc.indicator(U))
    code, data = run(capsys, "bmo-norm", "--q", "1", "--in", path)
    assert code == 0
    assert data["value"] == {"mode": "exact", "value": "5/18"}
    assert data["witness"]["root"] == "0:" and data["witness"]["h"] == 1


def test_sharp_at(tmp_path, capsys):
    path = write_func(tmp_path, "f.json", FinFunc.indicator(U))
    code, data = run(capsys, "sharp", "--q", "1", "--at", "0:1", "--in", path)
    assert code == 0
    assert data["0:1"]["value"] == {"mode": "exact", "value": "5/18"}
    assert data["0:1"]["certificate"]["measure_bound"] is not None


def test_maximal_at(tmp_path, capsys):
    path = write_func(tmp_path, "f.json", FinFunc.indicator(U))
    code, data = run(capsys, "maximal", "--at", "0:", "--in", path)
    assert code == 0
    assert data["0:"]["value"] == {"mode": "exact", "value": "1/16"}


def test_decompose_single_level(tmp_path, capsys):
    path = write_func(tmp_path, "g.json", FinFunc.indicator(U))
    code, data = run(capsys, "decompose", "--q", "2", "--j", "-1", "--in", path)
    assert code == 0
    assert data["omega"] == ["-1:", "0:1"]
    assert data["c_good"] == "1"


def test_decompose_all(tmp_path, capsys):
    atom = FinFunc({U: Fraction(1, 3), Vertex(-1, ()): Fraction(-1, 3)})
    path = write_func(tmp_path, "g.json", atom)
    code, data = run(capsys, "decompose", "--q", "2", "--all", "--in", path)
    assert code == 0 and data["upper"] == "1"


def test_h1(tmp_path, capsys):
    atom = FinFunc({U: Fraction(1, 3), Vertex(-1, ()): Fraction(-1, 3)})
    path = write_func(tmp_path, "g.json", atom)
    code, data = run(
        capsys,
        "h1",
        "--in",
        path,
        "--family",
        "auto:root=1:,depth=4",
        "--candidates",
        "random:3:4",
    )
    assert code == 0
    assert Fraction(data["upper"]["value"]) <= 1
    assert Fraction(data["lower"]["value"]) <= Fraction(data["upper"]["value"])


def test_hormander(tmp_path, capsys):
    kernel = {
        "window": "root=4:,depth=8",
        "entries": [
            {"y": "0:1", "x": "0:1", "val": "1"},
            {"y": "-1:", "x": "-1:", "val": "1"},
        ],
    }
    path = tmp_path / "k.json"
    path.write_text(json.dumps(kernel))
    code, data = run(capsys, "hormander", "--kernel", str(path), "--h-max", "1",
                     "--family", "auto:root=4:,depth=8")
    assert code == 0
    assert Fraction(data["value"]) >= 0


def test_check_geometry_exit_zero(capsys):
    code, data = run(capsys, "check", "geometry", "--size", "4")
    assert code == 0 and data["ok"]


def test_constants_deterministic(tmp_path, capsys):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    assert main(["--seed", "5", "--out", str(out1), "check", "bmo", "--size", "4"]) == 0
    capsys.readouterr()
    assert main(["--seed", "5", "--out", str(out2), "check", "bmo", "--size", "4"]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()


def test_usage_error_exit_two(capsys):
    code = main(["measure", "--vertex", "0:9"])
    capsys.readouterr()
    assert code == 2


def test_missing_file_exit_two(capsys):
    code = main(["bmo-norm", "--q", "1", "--in", "/nonexistent/f.json"])
    capsys.readouterr()
    assert code == 2
