import os

import pytest

from handlebody_curves.cli import run

SAMPLES = os.path.join(os.path.dirname(__file__), "..", "samples")


def S(name):
    return os.path.join(SAMPLES, name)


def verdict(capsys, argv, rc=0):
    assert run(argv) == rc
    lines = capsys.readouterr().out.strip().splitlines()
    return lines[-1]


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["curve", "intersect", "--curve", S("a1.curve"), "--other", S("b1.curve")], "VERDICT 1"),
        (["curve", "separating", "--curve", S("sep.curve")], "VERDICT separating"),
        (["meridian", "test", "--curve", S("bandsum.curve")], "VERDICT meridian"),
        (["meridian", "test", "--curve", S("b1.curve")], "VERDICT not_meridian"),
        (["graph", "distance", "--curve", "a1", "--other", "b1"], "VERDICT 2"),
        (["criteria", "model", "--gY", "1", "--b", "1"], "VERDICT 2"),
        (["criteria", "mc", "--gY", "1", "--b", "1", "--c", "a1"], "VERDICT meridian"),
        (["criteria", "hlimits", "--fixture", "star"], "VERDICT exceptional_star"),
        (["criteria", "extension", "--fixture", "twist"], "VERDICT extends_case2(1)"),
        (["criteria", "extension", "--spec", S("twist.pure")], "VERDICT extends_case2(1)"),
        (["surgery", "classify"], "VERDICT large"),
    ],
)
def test_verdicts(capsys, argv, expected):
    assert verdict(capsys, argv) == expected


def test_error_exit_codes(capsys):
    assert verdict(capsys, ["curve", "intersect", "--curve", "a1 a1", "--other", "a1"], 1).startswith("ERR curve")
    assert verdict(capsys, ["curve", "intersect", "--curve", "q7", "--other", "a1"], 1).startswith("ERR word")
    assert run(["bogus"]) == 2
    assert run(["curve", "intersect", "--curve", "a1"]) == 2
    capsys.readouterr()


def test_surgery_writes_csv(capsys, tmp_path):
    argv = ["surgery", "tight", "--lam", "a1 b1 a2", "--m", S("bandsum.curve"), "--out", str(tmp_path)]
    assert verdict(capsys, argv) == "VERDICT tight_system_disjoint"
    assert (tmp_path / "surgery.csv").exists()


def test_iterate_csv_is_deterministic(capsys, tmp_path):
    outs = []
    for k in range(2):
        d = tmp_path / str(k)
        d.mkdir()
        argv = ["dynamics", "iterate", "--spec", S("twist_b1.map"), "--curve", "a1", "--out", str(d)]
        assert verdict(capsys, argv) == "VERDICT converged"
        outs.append((d / "iterate.csv").read_text())
        assert (d / "iterate.svg").exists()
    assert outs[0] == outs[1]
    assert outs[0].splitlines()[0] == "iter,projective_distance"


def test_limitset_seeded(capsys, tmp_path):
    texts = []
    for k in range(2):
        d = tmp_path / str(k)
        d.mkdir()
        assert run(["dynamics", "limitset", "--samples", "4", "--seed", "3", "--out", str(d)]) == 0
        texts.append((d / "limitset.csv").read_text())
    capsys.readouterr()
    assert texts[0] == texts[1]
