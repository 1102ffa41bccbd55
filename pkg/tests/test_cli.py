from __future__ import annotations

import json
import subprocess
import sys

import pytest

from filicenter import charp, hilbert, invariants, sl2, transvect
from filicenter.cli import DISPATCH, SCHEMA, build_parser, main
from filicenter.hilbert import hilbert_rational
from filicenter.polycore import RationalFunction, parse_poly, tpoly


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err


def test_delta(capsys):
    assert run(capsys, "delta", "--n", "3", "--d", "4")[:2] == (0, "5")
    assert run(capsys, "delta", "--n", "3", "--d", "4", "--method", "weight")[:2] == (0, "5")


def test_delta_table_json(capsys):
    code, out, _ = run(capsys, "delta-table", "--n", "2", "--dmax", "5", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == SCHEMA and data["delta"] == [1, 1, 2, 2, 3, 3]


def test_hilbert_rational_equivalent_to_printed(capsys):
    code, out, _ = run(capsys, "hilbert", "--n", "4", "--rational", "--format", "json")
    data = json.loads(out)
    got = RationalFunction.from_coeffs([int(c) for c in data["numerator"]], [int(c) for c in data["denominator"]])
    printed = RationalFunction(tpoly([1, 0, 0, 1]), tpoly([1, -1]) * tpoly([1, 0, -1]) ** 2 * tpoly([1, 0, 0, -1]))
    assert code == 0 and got == printed
    assert run(capsys, "hilbert", "--n", "4", "--rational")[1] == hilbert_rational(4).pretty()


def test_hilbert_terms_recurrence_integral(capsys):
    assert run(capsys, "hilbert", "--n", "3", "--terms", "6")[1] == "1, 1, 2, 3, 5, 6"
    assert run(capsys, "hilbert", "--n", "2", "--recurrence", "1,1,-1")[:2] == (0, "holds")
    code, out, _ = run(capsys, "hilbert", "--n", "2", "--recurrence", "1", "--dmax", "5")
    assert code == 1 and "d=2" in out
    assert run(capsys, "hilbert", "--n", "2", "--check-integral", "1/10")[0] == 0


def test_zgen_wgen(capsys):
    assert run(capsys, "zgen", "--i", "4", "--n", "6")[1] == "2*y0*y4 - 2*y1*y3 + y2^2"
    assert run(capsys, "wgen", "--i", "2")[1] == "y0*y2 - 1/2*y1^2"
    assert run(capsys, "zgen", "--i", "2", "--n", "3", "--format", "latex")[1] == "2 y_{0} y_{2} - y_{1}^{2}"


def test_circ(capsys):
    code, out, _ = run(capsys, "circ", "--n", "3", "--left", "2*y0*y2 - y1^2", "--right", "y0", "--d", "1")
    assert code == 0 and parse_poly(out) == -parse_poly("3*y0^2*y3 - 3*y0*y1*y2 + y1^3")
    assert run(capsys, "circ", "--n", "4", "--left", "y0", "--lower", "2")[1] == "y2"
    code, out, _ = run(capsys, "circ", "--n", "4", "--recipe", "-2 y0 o_2 y0 o_4 y0")
    assert parse_poly(out) == parse_poly("2*y2^3 - 6*y1*y2*y3 + 9*y0*y3^2 + 6*y1^2*y4 - 12*y0*y2*y4")


def test_basis(capsys):
    code, out, _ = run(capsys, "basis", "--n", "3", "--k", "4", "--format", "json")
    assert json.loads(out)["dimension"] == 5
    code, out, _ = run(capsys, "basis", "--n", "3", "--k", "4", "--method", "span")
    assert out.splitlines()[0] == "dim Z_{3,4} = 5"


def test_mingens_json(capsys):
    code, out, err = run(capsys, "mingens", "--n", "4", "--maxdeg", "6", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["count"] == 5 and data["profile"] == {"1": 1, "2": 2, "3": 2}
    assert "not searched" in err


@pytest.mark.slow
def test_mingens_z5(capsys):
    code, out, _ = run(capsys, "mingens", "--n", "5", "--maxdeg", "18", "--format", "json")
    data = json.loads(out)
    assert data["count"] == 23
    assert data["profile"] == {"1": 1, "2": 2, "3": 3, "4": 3, "5": 3, "6": 2, "7": 2, "8": 2, "9": 1,
                               "11": 1, "12": 1, "13": 1, "18": 1}


def test_rewrite(capsys):
    zeta4 = "-3*y1^2*y2^2 + 8*y0*y2^3 + 6*y1^3*y3 - 18*y0*y1*y2*y3 + 9*y0^2*y3^2"
    assert run(capsys, "rewrite", "--n", "3", "--poly", zeta4)[1] == "(z3^2 + z2^3)*z1^-2"
    assert run(capsys, "rewrite", "--n", "3", "--poly", "y1")[0] == 2


def test_indep(capsys):
    code, out, _ = run(capsys, "indep", "--poly", "y0", "--poly", "y0^2")
    assert code == 0 and out.startswith("dependent")
    code, out, _ = run(capsys, "indep", "--n", "2", "--poly", "y0", "--poly", "2*y0*y2 - y1^2")
    assert out.startswith("independent")


def test_verify(capsys):
    assert run(capsys, "verify", "--n", "3", "--poly", "y1")[0] == 1
    assert run(capsys, "verify", "--n", "3", "--poly", "2*y0*y2 - y1^2")[:2] == (0, "invariant")


def test_charp(capsys):
    code, out, _ = run(capsys, "charp", "--n", "3", "--p", "5", "--jacobian", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["jacobian_triangular"] and data["det"] == "1*u2^15"
    assert run(capsys, "charp", "--n", "4", "--p", "3", "--jacobian")[0] == 2
    code, out, _ = run(capsys, "charp", "--n", "4", "--p", "3", "--format", "json")
    assert json.loads(out)["leading_ok"] == [True, True, False, True]
    assert run(capsys, "charp", "--grid", "--max-n", "4", "--max-p", "11")[0] == 0
    code, out, _ = run(capsys, "charp", "--n", "3", "--p", "5", "--reduce", "y1^5")
    assert "u3" in out


def test_extras(capsys):
    assert run(capsys, "poly", "--poly", "y1^2*y2", "--op", "down")[1] == "2*y0*y1*y2 + y1^3"
    assert run(capsys, "poly", "--poly", "y0*y1", "--op", "weight", "--n", "3")[1] == "4"
    assert run(capsys, "cg", "--m", "3", "--n", "2")[1] == "U_5 + U_3 + U_1"


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["delta", "--n", "3"],
        ["verify", "--n", "3", "--poly", "y1^"],
        ["hilbert", "--n", "40", "--rational"],
        ["basis", "--n", "12", "--k", "12", "--max-monomials", "10"],
        ["hilbert", "--n", "2", "--check-integral", "abc"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    assert main(argv) == 2


def test_deterministic_output():
    cmd = [sys.executable, "-m", "filicenter.cli", "indep", "--n", "3", "--format", "json",
           "--poly", "y0", "--poly", "2*y0*y2 - y1^2", "--poly", "3*y0^2*y3 - 3*y0*y1*y2 + y1^3"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a


def test_dispatch_covers_each_operation_once():
    ops = [op for _, names in DISPATCH.values() for op in names]
    assert len(ops) == len(set(ops))
    library = {
        hilbert: ["delta_partition", "delta_weight", "hilbert_series_terms", "hilbert_rational", "integral_check",
                  "recurrence_verify", "sym_power_components"],
        transvect: ["z_gen", "w_gen", "circ", "lower", "eval_recipe", "clebsch_gordan"],
        invariants: ["basis_kernel", "basis_span", "minimal_generators", "rewrite_in_z", "independence_check"],
        sl2: ["down", "raise_", "weight", "is_invariant"],
        charp: ["reduce_mod_p", "central_check_modp", "p_power_in_pcenter", "to_u_variables", "jacobian_modp",
                "verify_grid"],
    }
    for module, names in library.items():
        for name in names:
            assert hasattr(module, name)
            assert name in ops, name
    sub = build_parser()._subparsers._group_actions[0].choices
    assert set(sub) == set(DISPATCH)
