import json
import subprocess
import sys


from polyflag.cli import main
from polyflag.coxeter import validate
from polyflag.homology import homology
from polyflag.polyhedral import chamber, real_toric
from polyflag.presentations import abelian_invariants, racg
from polyflag.simplicial import SimplicialComplex, boundary_of_simplex, cycle_graph, discrete, join


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def octahedron():
    return join(join(discrete([0, 1]), discrete([2, 3])), discrete([4, 5]))


def test_flag_check_exit_codes(tmp_path, capsys):
    code, out = run(capsys, "flag-check", write(tmp_path, "t.json", boundary_of_simplex([1, 2, 3]).to_json()))
    assert code == 1
    assert json.loads(out)["witness"] == [1, 2, 3]
    code, out = run(capsys, "flag-check", write(tmp_path, "c.json", cycle_graph(4).to_json()))
    assert code == 0


def test_homology_octahedron(tmp_path, capsys):
    code, out = run(capsys, "homology", write(tmp_path, "o.json", octahedron().to_json()))
    assert code == 0
    assert json.loads(out)["betti"] == [1, 0, 1]


def test_malformed_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"vertices": [1, 2,\n  "facets": }')
    code = main(["flag-check", str(p)])
    err = capsys.readouterr().err
    assert code == 2 and "line 2" in err


def test_input_error_exit_two(tmp_path, capsys):
    code = main(["flag-check", write(tmp_path, "b.json", {"vertices": [1], "facets": [[2]]})])
    capsys.readouterr()
    assert code == 2


def test_cap_exceeded(tmp_path, capsys):
    L = write(tmp_path, "l.json", boundary_of_simplex(range(5)).to_json())
    code = main(["real-toric", L, "--max-cells", "10"])
    capsys.readouterr()
    assert code == 2


def test_pullback_identity_on_cube_gives_chamber(tmp_path, capsys):
    L = cycle_graph(4, start=0)
    code, out = run(capsys, "pullback", "--complex", write(tmp_path, "l.json", L.to_json()),
                    "--coloring", "id", "--corner", "cube")
    assert code == 0
    data = json.loads(out)
    counts = data["counts"] if "counts" in data else [len(x) for x in data["cells"]]
    assert counts == chamber(L).counts()


def test_real_toric_matches_library(tmp_path, capsys):
    L = cycle_graph(4)
    code, out = run(capsys, "real-toric", write(tmp_path, "l.json", L.to_json()))
    assert code == 0
    assert json.loads(out) == json.loads(json.dumps(real_toric(L).to_json()))


def test_racg_and_abelianization(tmp_path, capsys):
    G = cycle_graph(5)
    code, out = run(capsys, "racg", write(tmp_path, "g.json", G.to_json()))
    assert code == 0
    assert json.loads(out) == racg(G).to_json()
    code, out = run(capsys, "abelianization", write(tmp_path, "p.json", json.loads(out)))
    assert json.loads(out) == abelian_invariants(racg(G)).to_json()


def test_nerve_of_coxeter(tmp_path, capsys):
    M = validate([[1, 3, 3], [3, 1, 3], [3, 3, 1]])
    code, out = run(capsys, "nerve", "--coxeter", write(tmp_path, "m.json", M.to_json()))
    assert code == 0
    assert SimplicialComplex.from_json(json.loads(out)).f_vector() == [3, 3]


def test_gromov_and_manifold(tmp_path, capsys):
    Z = write(tmp_path, "z.json", real_toric(boundary_of_simplex([1, 2, 3])).to_json())
    code, out = run(capsys, "gromov-check", Z)
    assert code == 1
    code, out = run(capsys, "manifold-certificate", Z, "--dim", "2")
    assert code == 0 and json.loads(out)["verdict"] == "PASS"
    C = write(tmp_path, "k.json", chamber(cycle_graph(4)).to_json())
    code, out = run(capsys, "manifold-certificate", C, "--dim", "2")
    assert code == 1


def test_homology_of_cell_complex_json(tmp_path, capsys):
    Z = real_toric(cycle_graph(4))
    code, out = run(capsys, "homology", write(tmp_path, "z.json", Z.to_json()))
    assert json.loads(out) == homology(Z).to_json()


def test_text_format(tmp_path, capsys):
    code, out = run(capsys, "homology", write(tmp_path, "o.json", octahedron().to_json()), "--format", "text")
    assert code == 0 and out.strip()


def test_output_file(tmp_path, capsys):
    dest = tmp_path / "out.json"
    code = main(["homology", write(tmp_path, "o.json", octahedron().to_json()), "-o", str(dest)])
    capsys.readouterr()
    assert code == 0 and json.loads(dest.read_text())["betti"] == [1, 0, 1]


def test_selftest(capsys):
    code, out = run(capsys, "selftest", "--seed", "3", "--trials", "3")
    assert code == 0 and json.loads(out)["verdict"] == "PASS"


def test_byte_stable_subprocess(tmp_path):
    L = write(tmp_path, "l.json", cycle_graph(5).to_json())
    cmd = [sys.executable, "-m", "polyflag", "moment-angle", L]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
