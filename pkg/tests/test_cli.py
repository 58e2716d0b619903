import json
import random
import re
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from shrink_mwisr import cli
from shrink_mwisr.errors import InputError
from shrink_mwisr.geom import Rect
from shrink_mwisr.instances import (Instance, geometric_squares, parse, parse_solution,
                                    random_instance, render, render_solution)

THREE = """\
# three overlapping rectangles
shrink-mwisr-instance 1 rectangles
a 0 0 4 4 1
b 2 2 6 6 2
c 1 1 5 5 3
"""


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run(*argv):
    return cli.main([str(a) for a in argv])


class TestFormat:
    def test_parse(self):
        inst = parse(THREE)
        assert inst.kind == "rectangles" and [r.id for r in inst.rects] == ["a", "b", "c"]

    def test_numeric_ids_and_fraction_weights(self):
        inst = parse("shrink-mwisr-instance 1 squares\n7 0 0 2 2 5/3\n8 3 3 4 4 0.5\n")
        assert [r.id for r in inst.rects] == [7, 8]
        assert [r.weight for r in inst.rects] == [F(5, 3), F(1, 2)]

    @pytest.mark.parametrize("text", [
        "",
        "shrink-mwisr-instance 2 rectangles\n",
        "shrink-mwisr-instance 1 circles\n",
        "shrink-mwisr-instance 1 rectangles\na 0 0 1\n",
        "shrink-mwisr-instance 1 rectangles\na 0 0 1.5 1 1\n",
        "shrink-mwisr-instance 1 rectangles\na 0 0 1 1 1\na 2 2 3 3 1\n",
        "shrink-mwisr-instance 1 rectangles\na 1 0 1 1 1\n",
        "shrink-mwisr-instance 1 squares\na 0 0 2 1 1\n",
        "shrink-mwisr-instance 1 unit-squares\na 0 0 2 2 1\nb 0 0 3 3 1\n",
    ])
    def test_rejects(self, text):
        with pytest.raises(InputError):
            parse(text)

    @given(st.integers(0, 10**6), st.sampled_from(["rectangles", "squares", "unit-squares"]),
           st.integers(0, 15))
    def test_round_trip(self, seed, kind, n):
        inst = random_instance(random.Random(seed), n, kind)
        assert parse(render(inst)) == inst
        assert render(parse(render(inst))) == render(inst)

    @given(st.lists(st.tuples(st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 9),
                              st.integers(1, 9), st.fractions(0, 20)), max_size=8))
    def test_round_trip_fractions(self, rows):
        inst = Instance("rectangles", [Rect(f"r{i}", x, y, x + w, y + h, wt)
                                       for i, (x, y, w, h, wt) in enumerate(rows)])
        assert parse(render(inst)) == inst

    def test_whitespace_normalised(self):
        messy = "  shrink-mwisr-instance   1 rectangles  \n\n a  0 0\t4 4   1 # note\n"
        assert render(parse(messy)) == "shrink-mwisr-instance 1 rectangles\na 0 0 4 4 1\n"

    def test_solution_round_trip(self):
        assert parse_solution(render_solution([3, 1])) == [3, 1]
        assert parse_solution(render_solution(["x"])) == ["x"]
        assert parse_solution(render_solution([])) == []
        with pytest.raises(InputError):
            parse_solution("1\n2\n")

    def test_geometric_levels_distinct(self):
        from shrink_mwisr.squareskernel import level_of
        inst = geometric_squares(12, F(1, 8))
        levels = [level_of(r.width, F(1, 8)) for r in inst.rects]
        assert len(set(levels)) == 12 and levels == sorted(levels)


class TestGenerate:
    def test_empty(self, tmp_path, capsys):
        assert run("generate", "--n", 0) == 0
        assert capsys.readouterr().out == "shrink-mwisr-instance 1 rectangles\n"

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        run("generate", "--n", 30, "--seed", 9, "-o", a)
        run("generate", "--n", 30, "--seed", 9, "-o", b)
        assert a.read_bytes() == b.read_bytes()

    def test_seed_from_environment(self, tmp_path, monkeypatch):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        monkeypatch.setenv(cli.SEED_ENV, "9")
        run("generate", "--n", 30, "-o", a)
        monkeypatch.delenv(cli.SEED_ENV)
        run("generate", "--n", 30, "--seed", 9, "-o", b)
        assert a.read_bytes() == b.read_bytes()

    def test_unit_squares(self, tmp_path):
        out = tmp_path / "u.txt"
        run("generate", "--n", 20, "--kind", "unit-squares", "-o", out)
        inst = parse(out.read_text())
        assert len({(r.width, r.height) for r in inst.rects}) == 1

    def test_clusters_and_geometric(self, tmp_path):
        c, g = tmp_path / "c.txt", tmp_path / "g.txt"
        assert run("generate", "--n", 30, "--grid-clusters", 3, "-o", c) == 0
        assert parse(c.read_text()).kind == "unit-squares"
        assert run("generate", "--geometric-sizes", 2, "--delta", "1/2", "-o", g) == 0
        assert len(parse(g.read_text()).rects) == 10

    @pytest.mark.parametrize("argv", [["--n", "-1"], ["--weight-range", "5:1"],
                                      ["--kind", "circles"], ["--size-range", "0:3"]])
    def test_bad_flags(self, argv):
        try:
            code = run("generate", *argv)
        except SystemExit as exc:
            code = exc.code
        assert code == 2


class TestSolve:
    def test_exact_three(self, tmp_path, capsys):
        path = write(tmp_path, "three.txt", THREE)
        assert run("solve", path, "--mode", "exact", "--delta", "1/2") == 0
        out = capsys.readouterr().out
        assert "best_value: 3\n" in out and 'solution: ["c"]' in out

    def test_fpt_one_takes_heaviest(self, tmp_path, capsys):
        inst = random_instance(random.Random(4), 12)
        path = write(tmp_path, "i.txt", render(inst))
        rep = tmp_path / "r.json"
        assert run("solve", path, "--mode", "fpt", "--k", 1, "--delta", "1/2",
                   "--json", rep) == 0
        report = json.loads(rep.read_text())
        top = max(r.weight for r in inst.rects)
        assert [inst.by_id()[i].weight for i in report["solution"]] == [top]

    def test_eptas_report(self, tmp_path, capsys):
        path = write(tmp_path, "i.txt", render(random_instance(random.Random(5), 12)))
        sol = tmp_path / "s.txt"
        assert run("solve", path, "--delta", "1/2", "--epsilon", "1/2", "--trials", 7,
                   "--oracle", "--json", "-", "--solution-out", sol) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["schema"] == cli.REPORT_SCHEMA and report["version"] == 1
        assert len(report["trial_values"]) == 7
        assert F(report["best_value"]) == max(F(v) for v in report["trial_values"])
        assert F(report["best_value"]) <= F(report["oracle_value"])
        assert report["grid_dim_overridden"] is False
        assert set(report) >= {"command", "seed", "delta", "epsilon", "grid_dim", "counters",
                               "wall_time_s", "solution"}
        assert run("verify", path, sol, "--delta", report["delta"]) == 0

    def test_override_warns_and_reports_needed_cap(self, tmp_path, capsys):
        path = write(tmp_path, "i.txt", render(random_instance(random.Random(6), 5)))
        code = run("solve", path, "--delta", "1/2", "--epsilon", "1/2", "--grid-cap-override", 5)
        err = capsys.readouterr().err
        assert code == 4
        assert "warning: grid dimension overridden" in err and "need at least" in err

    def test_missing_mode_arguments(self, tmp_path):
        path = write(tmp_path, "three.txt", THREE)
        assert run("solve", path, "--delta", "1/2") == 2
        assert run("solve", path, "--mode", "fpt", "--delta", "1/2") == 2

    def test_missing_file(self, tmp_path):
        assert run("solve", tmp_path / "nope.txt", "--mode", "exact", "--delta", "1/2") == 2

    def test_oracle_cap(self, tmp_path):
        path = write(tmp_path, "big.txt", render(random_instance(random.Random(7), 30)))
        assert run("solve", path, "--mode", "exact", "--delta", "1/2") == 4


class TestKernelize:
    def test_unit_uniform_kernel_file(self, tmp_path, capsys):
        src = tmp_path / "c.txt"
        run("generate", "--n", 60, "--grid-clusters", 3, "--seed", 1, "-o", src)
        out = tmp_path / "k.txt"
        assert run("kernelize", src, "--variant", "unit-uniform", "--k", 20, "--delta", "1/2",
                   "-o", out, "--json", "-") == 0
        report = json.loads(capsys.readouterr().out)
        kernel = parse(out.read_text())
        assert report["result"] == "kernel" and report["within_bound"] is True
        assert len(kernel.rects) == report["size"] <= 16 * 20 * 4

    def test_arb_uniform_solution_file(self, tmp_path, capsys):
        src = tmp_path / "g.txt"
        run("generate", "--geometric-sizes", 2, "--delta", "1/2", "-o", src)
        out = tmp_path / "s.txt"
        assert run("kernelize", src, "--variant", "arb-uniform", "--k", 2, "--delta", "1/2",
                   "-o", out) == 0
        ids = parse_solution(out.read_text())
        assert len(ids) == 2
        assert run("verify", src, out, "--delta", "1/2") == 0

    def test_zero_budget(self, tmp_path, capsys):
        src = write(tmp_path, "u.txt", "shrink-mwisr-instance 1 unit-squares\n1 0 0 2 2 1\n")
        out = tmp_path / "k.txt"
        assert run("kernelize", src, "--variant", "unit-weighted", "--k", 0, "--delta", "1/2",
                   "-o", out) == 0
        assert out.read_text() == "shrink-mwisr-instance 1 unit-squares\n"

    def test_bounded_needs_limits(self, tmp_path):
        src = write(tmp_path, "u.txt", "shrink-mwisr-instance 1 squares\n1 0 0 2 2 1\n")
        assert run("kernelize", src, "--variant", "bounded", "--k", 1, "--delta", "1/2") == 2
        assert run("kernelize", src, "--variant", "bounded", "--k", 1, "--delta", "1/2",
                   "--m1", 1, "--m2", 2) == 0

    def test_kind_mismatch(self, tmp_path):
        src = write(tmp_path, "three.txt", THREE)
        assert run("kernelize", src, "--variant", "unit-uniform", "--k", 1, "--delta", "1/2") == 2
        assert run("kernelize", src, "--variant", "arb-uniform", "--k", 1, "--delta", "1/2") == 2


class TestVerify:
    def setup_files(self, tmp_path, ids):
        return write(tmp_path, "i.txt", THREE), write(tmp_path, "s.txt", render_solution(ids))

    def test_valid(self, tmp_path, capsys):
        inst, sol = self.setup_files(tmp_path, ["a"])
        assert run("verify", inst, sol, "--delta", "1/2") == 0
        assert "weight 1" in capsys.readouterr().out

    def test_empty(self, tmp_path, capsys):
        inst, sol = self.setup_files(tmp_path, [])
        assert run("verify", inst, sol, "--delta", "1/2") == 0
        assert "weight 0" in capsys.readouterr().out

    def test_overlap(self, tmp_path, capsys):
        inst, sol = self.setup_files(tmp_path, ["a", "c"])
        assert run("verify", inst, sol, "--delta", "1/10") == 5
        assert "a and c" in capsys.readouterr().err

    def test_shrinking_separates(self, tmp_path):
        # (0,4)^2 and (2,6)^2 stop overlapping once both lose half their side
        inst, sol = self.setup_files(tmp_path, ["a", "b"])
        assert run("verify", inst, sol, "--delta", "1/2") == 0

    def test_unknown_id(self, tmp_path):
        inst, sol = self.setup_files(tmp_path, ["zz"])
        assert run("verify", inst, sol, "--delta", "1/2") == 2

    def test_repeated_id(self, tmp_path):
        inst, sol = self.setup_files(tmp_path, ["a", "a"])
        assert run("verify", inst, sol, "--delta", "1/2") == 2


class TestPlot:
    def shapes(self, svg):
        return re.findall(r'<rect class="(\w+)"', svg)

    def test_empty(self, tmp_path):
        src = write(tmp_path, "e.txt", "shrink-mwisr-instance 1 rectangles\n")
        out = tmp_path / "e.svg"
        assert run("plot", src, "--delta", "1/2", "--out", out) == 0
        svg = out.read_text()
        assert 'version="1.1"' in svg and 'viewBox="0 0 1000 1000"' in svg
        assert self.shapes(svg) == []

    def test_one_rect(self, tmp_path):
        src = write(tmp_path, "o.txt", "shrink-mwisr-instance 1 rectangles\nx 0 0 4 2 1\n")
        out = tmp_path / "o.svg"
        run("plot", src, "--delta", "1/2", "--out", out)
        assert self.shapes(out.read_text()) == ["outline", "shrunk"]

    def test_highlight_count(self, tmp_path):
        src = write(tmp_path, "i.txt", THREE)
        sol = write(tmp_path, "s.txt", render_solution(["a", "b"]))
        out = tmp_path / "p.svg"
        assert run("plot", src, "--solution", sol, "--delta", "1/2", "--out", out) == 0
        assert self.shapes(out.read_text()).count("solution") == 2

    def test_well_formed(self, tmp_path):
        import xml.etree.ElementTree as ET
        src = write(tmp_path, "i.txt", render(random_instance(random.Random(1), 20)))
        out = tmp_path / "p.svg"
        run("plot", src, "--delta", "1/4", "--out", out)
        root = ET.fromstring(out.read_text())
        assert root.tag.endswith("svg") and len(root.findall("{*}rect")) == 40
        for el in root.findall("{*}rect"):
            x, y = float(el.get("x")), float(el.get("y"))
            w, h = float(el.get("width")), float(el.get("height"))
            assert 0 <= x and x + w <= 1000 and 0 <= y and y + h <= 1000

    def test_unwritable(self, tmp_path):
        src = write(tmp_path, "i.txt", THREE)
        assert run("plot", src, "--delta", "1/2", "--out", tmp_path / "no" / "p.svg") == 2
