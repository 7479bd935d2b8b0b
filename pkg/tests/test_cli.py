import io
import json

import pytest

from twistdyn.cli import main

QUADRATIC = 'map { num="z^2 + t^-1" }\noptions { depth="3" }\n'
SQUARE = 'tau { lambda="3/4" } map { num="z^2" }\n'


def run(argv, spec_text=None):
    out = io.StringIO()
    stdin = io.StringIO(spec_text) if spec_text is not None else None
    code = main(argv, stdout=out, stdin=stdin)
    return code, json.loads(out.getvalue())


@pytest.fixture
def spec_file(tmp_path):
    def write(text, name="map.spec"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def test_image(spec_file):
    code, data = run(["image", spec_file(QUADRATIC), "--point", "[0;0]"])
    assert code == 0
    assert data["schema"] == 1 and data["command"] == "image"
    assert data["result"]["image"] == "[t^-1; 0]"
    assert data["map"]["num"] == "z^2 + t^-1"


def test_orbit_from_stdin():
    code, data = run(["orbit", "-", "--point", "[0;-1/2]", "--n", "3"], QUADRATIC)
    assert code == 0
    assert data["result"]["orbit"] == ["[0; -1/2]", "[0; -1]", "[0; -2]", "[0; -4]"]


def test_classify_fixed_saddle():
    code, data = run(["classify-fixed", "-", "--point", "[0;0]"], SQUARE)
    assert code == 0 and data["result"]["class"] == "Saddle"


def test_classify_moving_point_fails():
    code, data = run(["classify-fixed", "-", "--point", "[0;1]"], SQUARE)
    assert code == 2 and data["error"] == "NotFixed"


def test_segment_fixed():
    code, data = run(["segment-fixed", "-"], SQUARE)
    assert code == 0
    assert [row["class"] for row in data["result"]["fixed_points"]] == ["Attracting", "Saddle", "Attracting"]


def test_exceptional_verdicts():
    code, data = run(["exceptional", "-", "--point", "[0]"], 'map { num="z^2" }')
    assert code == 0 and data["result"]["verdict"] == "exceptional"
    code, data = run(["exceptional", "-", "--point", "[1]", "--bound", "1"], 'map { num="z^2" }')
    assert data["result"]["verdict"] == "inconclusive"


def test_trucco_uses_spec_depth(spec_file, tmp_path):
    dot = tmp_path / "tree.dot"
    code, data = run(["trucco", spec_file(QUADRATIC), "--dot", str(dot)])
    assert code == 0
    assert data["result"]["leaves"] == 8 and data["result"]["full_shift"] is True
    assert dot.read_text().startswith("graph trucco {")


def test_trucco_simple_map_exit_code():
    code, data = run(["trucco", "-", "--depth", "2"], 'map { num="z^2" }')
    assert code == 2 and data["error"] == "SimpleMap"


def test_equidistribute():
    code, data = run(["equidistribute", "-", "--start", "[0;-1/2]", "--n", "2"], QUADRATIC)
    assert code == 0
    assert [lv["total_mass"] for lv in data["result"]["levels"]] == ["1", "1", "1"]


def test_equidistribute_exceptional_start():
    code, data = run(["equidistribute", "-", "--start", "[0]"], 'map { num="z^2" }')
    assert code == 2 and data["error"] == "ExceptionalStart"


def test_laplacian_check_given_vertices():
    argv = ["laplacian-check", "-", "--vertex", "[0;0]=0", "--vertex", "[0;2]=2"]
    code, data = run(argv, 'map { num="z^2" }')
    assert code == 0 and data["result"]["holds"] is True


def test_laplacian_check_seeded():
    code, data = run(["laplacian-check", "-", "--seed", "4"], 'map { num="z^2 + t^-1" }')
    assert code == 0 and data["result"]["holds"] is True and data["result"]["seed"] == 4


def test_output_is_deterministic(spec_file):
    path = spec_file(QUADRATIC)
    outputs = set()
    for _ in range(2):
        buf = io.StringIO()
        main(["trucco", path, "--depth", "2"], stdout=buf)
        outputs.add(buf.getvalue())
    assert len(outputs) == 1


def test_jobs_do_not_change_results(spec_file):
    path = spec_file(QUADRATIC)
    _, serial = run(["trucco", path, "--depth", "3"])
    _, parallel = run(["trucco", path, "--depth", "3", "--jobs", "2"])
    assert serial == parallel


@pytest.mark.parametrize(
    "spec_text, error, code",
    [
        ('map { num="z^2" ', "SpecSyntaxError", 1),
        ('tau { lambda="-1" } map { num="z^2" }', "SpecSemanticError", 1),
        ('map { num="z^2" den="z" }', "SpecSemanticError", 1),
    ],
)
def test_spec_errors(spec_text, error, code):
    got, data = run(["image", "-", "--point", "[0]"], spec_text)
    assert got == code and data["error"] == error


def test_syntax_error_position():
    _, data = run(["image", "-", "--point", "[0]"], 'map {\n  num = }')
    assert (data["line"], data["column"]) == (2, 9)


def test_usage_errors():
    code, data = run(["no-such-command", "-"])
    assert code == 1 and data["error"] == "UsageError"
    code, data = run(["laplacian-check", "-", "--vertex", "oops"], 'map { num="z^2" }')
    assert code == 1


def test_missing_file():
    code, data = run(["image", "/nonexistent/map.spec", "--point", "[0]"])
    assert code == 1 and data["error"] == "FileNotFoundError"
