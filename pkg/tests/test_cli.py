"""Command-line front end: verbs, exit codes, stable bytes, round-trips."""

import json
import random
from fractions import Fraction

import pytest

from supertrop.cli import main
from supertrop.congr import (
    bundled_suite,
    builtin_semiring,
    enumerate_congruences,
    superboolean,
    to_json,
)
from supertrop.poly import (
    canonicalize,
    format_poly,
    make_poly,
    parse_poly,
)
from supertrop.core import rat_g, rat_t


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def rand_poly_text(rng: random.Random, nvars: int) -> str:
    coeffs = {}
    for _ in range(rng.randint(1, 6)):
        while True:
            exp = tuple(rng.randint(0, 6) for _ in range(nvars))
            if sum(exp) <= 6:
                break
        v = Fraction(rng.randint(-12, 12), rng.choice([1, 1, 2, 3]))
        coeffs[exp] = rat_g(v) if rng.random() < 0.3 else rat_t(v)
    f = canonicalize(make_poly(nvars, coeffs)).poly
    return format_poly(f)


# -- golden commands ---------------------------------------------------


def test_canon_golden(capsys):
    code, out, err = run(capsys, "canon", "x^2 + 0*x + 1")
    assert (code, out, err) == (0, "x^2 + 1\n", "")


def test_equal_golden(capsys):
    code, out, _ = run(
        capsys, "equal", "(x+y+0)*(x+y+x*y)", "(x+0)*(y+0)*(x+y)"
    )
    assert (code, out) == (0, "true\n")
    code, out, _ = run(capsys, "equal", "x + 0", "x + 1")
    assert (code, out) == (0, "false\n")


def test_equal_pads_variable_counts(capsys):
    code, out, _ = run(capsys, "equal", "x + y", "y + x")
    assert (code, out) == (0, "true\n")
    code, out, _ = run(capsys, "equal", "x", "x + y")
    assert (code, out) == (0, "false\n")


def test_spec_superboolean_has_one_point(capsys):
    code, out, _ = run(capsys, "spec", "--semiring", "superboolean")
    assert code == 0
    assert json.loads(out) == {
        "hasse": [],
        "points": [
            {
                "classes": [["b0"], ["b1"], ["b1v"]],
                "flags": [
                    "Determined",
                    "LCong",
                    "MaximalL",
                    "NuPrime",
                    "QCong",
                    "Radical",
                    "TanglyMinimal",
                ],
                "iG": ["b0", "b1v"],
                "iT": ["b1"],
            }
        ],
    }


# -- polynomial verbs --------------------------------------------------


def test_eval(capsys):
    assert run(capsys, "eval", "x^2 + 0*x + 1", "3")[:2] == (0, "6\n")
    assert run(capsys, "eval", "x^2 + 0*x + 1", "1/2")[:2] == (0, "1v\n")
    assert run(capsys, "eval", "x*y + 0", "2,-2")[:2] == (0, "0v\n")
    assert run(capsys, "eval", "--", "x + 0", "-inf")[:2] == (0, "0\n")
    assert run(capsys, "eval", "--", "-inf", "5")[:2] == (0, "-inf\n")


def test_factor_text_and_json(capsys):
    code, out, _ = run(capsys, "factor", "x^2 + 0*x + 1")
    assert (code, out) == (0, "0 * (x + 1/2)^2\n")
    code, out, _ = run(capsys, "factor", "x^2 + 0*x + 1", "--format", "json")
    assert code == 0
    assert json.loads(out) == {
        "unit": "0",
        "factors": [{"base": "x + 1/2", "mult": 2}],
    }


def test_root(capsys):
    assert run(capsys, "root", "x^2 + 1v*x + 3")[:2] == (0, "3/2\n")
    assert run(capsys, "root", "0")[:2] == (0, "none\n")


def test_zlocus_text_summary(capsys):
    code, out, _ = run(
        capsys, "zlocus", "x + y + 0", "--box=-3,3,-3,3", "--format", "text"
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "polynomials: 1"
    assert lines[1] == "box: x in [-3, 3], y in [-3, 3]"


def test_zlocus_json_lists_cells(capsys):
    code, out, _ = run(capsys, "zlocus", "x + y + 0")
    assert code == 0
    obj = json.loads(out)
    assert set(obj) >= {"box", "cells"}
    assert obj["cells"]


def test_zlocus_svg_to_file(capsys, tmp_path):
    target = tmp_path / "locus.svg"
    code, out, _ = run(
        capsys, "zlocus", "x + y + 0", "--format", "svg", "--out", str(target)
    )
    assert (code, out) == (0, "")
    data = target.read_bytes()
    assert data.startswith(b"<svg")
    assert data.rstrip().endswith(b"</svg>")


def test_zlocus_svg_stdout_is_binary(capsysbinary):
    code = main(["zlocus", "x + y + 0", "--format", "svg"])
    assert code == 0
    assert capsysbinary.readouterr().out.startswith(b"<svg")


# -- carrier verbs -----------------------------------------------------


def test_validate_passes_builtin(capsys):
    code, out, _ = run(capsys, "validate", "--semiring", "superboolean")
    assert code == 0
    obj = json.loads(out)
    assert obj["passed"] is True
    assert obj["failures"] == []
    assert "add-commutative" in obj["checked"]


def test_validate_reports_broken_table(capsys):
    obj = json.loads(to_json(superboolean()))
    obj["add"][1][2] = "b0"
    code, out, _ = run(capsys, "validate", "--semiring", json.dumps(obj))
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is False
    assert any(f["check"] == "add-commutative" for f in report["failures"])


def test_congs_counts_and_kind_filter(capsys):
    R = superboolean()
    code, out, _ = run(capsys, "congs", "--semiring", "superboolean")
    assert code == 0
    obj = json.loads(out)
    assert obj["count"] == len(enumerate_congruences(R, 7))
    assert obj["count"] == len(obj["congruences"])
    code, out, _ = run(
        capsys, "congs", "--semiring", "superboolean", "--kind", "NuPrime"
    )
    obj = json.loads(out)
    assert obj["count"] == 1
    assert all("NuPrime" in c["flags"] for c in obj["congruences"])


def test_radical_of_elements(capsys):
    code, out, _ = run(
        capsys, "radical", "--semiring", "str-chain:2", "--elements", "a"
    )
    assert code == 0
    assert json.loads(out) == {
        "classes": [["0"], ["1"], ["1v"], ["a", "av"]]
    }


def test_radical_of_unit_is_empty(capsys):
    code, out, _ = run(
        capsys, "radical", "--semiring", "superboolean", "--elements", "b1"
    )
    assert code == 0
    assert json.loads(out) == {"classes": None}


def test_radical_of_congruence(capsys):
    theta = json.dumps(
        {"classes": [["0"], ["1"], ["1v"], ["a", "av"]]}
    )
    code, out, _ = run(
        capsys, "radical", "--semiring", "str-chain:2", "--congruence", theta
    )
    assert code == 0
    assert json.loads(out)["classes"] == [["0"], ["1"], ["1v"], ["a", "av"]]


def test_quotient_carrier_and_map(capsys):
    theta = json.dumps({"classes": [["0"], ["1"], ["1v"], ["a", "av"]]})
    code, out, _ = run(
        capsys, "quotient", "--semiring", "str-chain:2", "--congruence", theta
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["carrier"]["elements"] == ["0", "1", "1v", "a|av"]
    assert obj["map"] == {
        "0": "0", "1": "1", "1v": "1v", "a": "a|av", "av": "a|av"
    }


def test_localize_collapses_non_units(capsys):
    code, out, _ = run(
        capsys, "localize", "--semiring", "mixed-units", "--monoid", "1,t"
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["carrier"]["elements"] == ["0", "1", "1v"]
    assert obj["map"]["t"] == "1"
    assert obj["map"]["u"] == "1"


def test_sections_over_unit_open_is_whole_carrier(capsys):
    code, out, _ = run(
        capsys, "sections", "--semiring", "superboolean", "--element", "b1"
    )
    assert code == 0
    assert json.loads(out)["elements"] == ["b0", "b1", "b1v"]


def test_stalk(capsys):
    code, out, _ = run(
        capsys, "stalk", "--semiring", "flat-idempotent", "--point", "1"
    )
    assert code == 0
    assert set(json.loads(out)["elements"]) == {"0", "1", "t", "1v"}


def test_nullcheck_aggregates_all_q_congruences(capsys):
    code, out, _ = run(capsys, "nullcheck", "--semiring", "str-trunc:3")
    assert code == 0
    obj = json.loads(out)
    assert obj["passed"] is True
    assert obj["failures"] == []
    assert obj["congruences"] > 0
    assert obj["checked"] > 0


def test_nullcheck_single_congruence(capsys):
    theta = json.dumps(
        {"classes": [["b0"], ["b1"], ["b1v"]]}
    )
    code, out, _ = run(
        capsys, "nullcheck", "--semiring", "superboolean",
        "--congruence", theta,
    )
    assert code == 0
    obj = json.loads(out)
    assert obj["passed"] is True
    assert obj["checked"] == 3


def test_krullcheck(capsys):
    code, out, _ = run(capsys, "krullcheck", "--semiring", "superboolean")
    assert code == 0
    obj = json.loads(out)
    assert obj["passed"] is True
    assert obj["name"] == "krull"


def test_seed_matches_random_spec(capsys):
    code, by_seed, _ = run(capsys, "spec", "--seed", "3")
    assert code == 0
    code, by_name, _ = run(capsys, "spec", "--semiring", "random:3")
    assert code == 0
    assert by_seed == by_name


# -- inputs from files -------------------------------------------------


def test_semiring_from_file(capsys, tmp_path):
    path = tmp_path / "carrier.json"
    path.write_text(to_json(superboolean()), encoding="utf-8")
    code, from_file, _ = run(capsys, "spec", "--semiring", str(path))
    assert code == 0
    code, from_name, _ = run(capsys, "spec", "--semiring", "superboolean")
    assert from_file == from_name


def test_congruence_from_file(capsys, tmp_path):
    path = tmp_path / "theta.json"
    path.write_text(
        json.dumps({"classes": [["0"], ["1"], ["1v"], ["a", "av"]]}),
        encoding="utf-8",
    )
    code, out, _ = run(
        capsys, "quotient", "--semiring", "str-chain:2",
        "--congruence", str(path),
    )
    assert code == 0
    assert json.loads(out)["carrier"]["elements"] == ["0", "1", "1v", "a|av"]


def test_out_redirects_stdout(capsys, tmp_path):
    target = tmp_path / "canon.txt"
    code, out, _ = run(
        capsys, "canon", "x^2 + 0*x + 1", "--out", str(target)
    )
    assert (code, out) == (0, "")
    assert target.read_text(encoding="utf-8") == "x^2 + 1\n"


# -- exit codes --------------------------------------------------------


def test_parse_errors_exit_2(capsys):
    assert run(capsys, "canon", "x^^2")[0] == 2
    assert run(capsys, "spec", "--semiring", "nosuch")[0] == 2
    assert run(capsys, "eval", "x + 0", "zz")[0] == 2
    assert run(capsys, "radical", "--semiring", "superboolean",
               "--elements", "zz")[0] == 2
    assert run(capsys, "zlocus", "x + y", "--box", "1,2,3")[0] == 2
    code, _, err = run(capsys, "spec", "--semiring", "{not json")
    assert code == 2
    assert "parse error" in err


def test_precondition_errors_exit_3(capsys):
    assert run(capsys, "eval", "x + y", "3")[0] == 3
    code, _, err = run(
        capsys, "stalk", "--semiring", "superboolean", "--point", "99"
    )
    assert code == 3
    assert "precondition" in err
    assert run(capsys, "localize", "--semiring", "superboolean",
               "--monoid", "b1v")[0] == 3
    assert run(capsys, "zlocus", "x + y", "--box", "2,1,0,1")[0] == 3


def test_bound_errors_exit_4(capsys):
    code, _, err = run(capsys, "spec", "--semiring", "str-chain:4")
    assert code == 4
    assert "bound" in err
    big = builtin_semiring("str-chain:4").size
    code, out, _ = run(
        capsys, "spec", "--semiring", "str-chain:4", "--bound", str(big)
    )
    assert code == 0
    assert json.loads(out)["points"]


def test_usage_errors_exit_2(capsys):
    assert main([]) == 2
    assert main(["spec"]) == 2
    assert main(["spec", "--semiring", "superboolean", "--seed", "1"]) == 2
    assert main(["canon", "x", "--nonsense"]) == 2
    capsys.readouterr()


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    out = capsys.readouterr().out
    for verb in ("eval", "canon", "equal", "factor", "root", "zlocus",
                 "validate", "congs", "spec", "radical", "quotient",
                 "localize", "sections", "stalk", "nullcheck", "krullcheck"):
        assert verb in out


# -- determinism and round-trips ---------------------------------------


def test_outputs_are_byte_stable(capsys):
    pairs = [
        ("canon", "x^2 + 0*x + 1"),
        ("spec", "--semiring", "flat-idempotent"),
        ("zlocus", "x + y + 0", "--format", "json"),
        ("congs", "--semiring", "str-chain:2"),
    ]
    for argv in pairs:
        first = run(capsys, *argv)
        second = run(capsys, *argv)
        assert first == second
        assert first[0] == 0


def test_svg_bytes_are_stable(capsys, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    for target in (a, b):
        code, _, _ = run(
            capsys, "zlocus", "x^2 + y + 0", "x + y",
            "--format", "svg", "--out", str(target),
        )
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_poly_round_trip_200(capsys):
    rng = random.Random(97)
    for i in range(200):
        nvars = 1 + i % 3
        text = rand_poly_text(rng, nvars)
        assert format_poly(parse_poly(text, nvars=nvars)) == text
        code, out, _ = run(capsys, "canon", "--", text)
        assert code == 0
        assert out == text + "\n"


def test_bundled_semirings_round_trip(capsys):
    for name, R in bundled_suite():
        recovered = json.loads(to_json(R))
        assert tuple(recovered["elements"]) == R.names
        code, from_json, _ = run(
            capsys, "validate", "--semiring", to_json(R)
        )
        assert code == 0
        assert json.loads(from_json)["passed"] is True


def test_element_error_lists_carrier_names(capsys):
    code, _, err = run(
        capsys, "sections", "--semiring", "superboolean", "--element", "x"
    )
    assert code == 2
    assert "b0, b1, b1v" in err
