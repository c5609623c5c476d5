"""End-to-end tests of the command-line interface and suite runner."""

import io
import json

import pytest

from merofock.cli import (
    EXIT_CONFIG, EXIT_DOMAIN, EXIT_PASS, EXIT_SYNTAX, cli_dispatch, run_suite,
)
from merofock.errors import BadConfig, UnknownSuite
from merofock.mm_field import parse_mm


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli_dispatch(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def test_apply_multiplier():
    code, out, _ = run(["apply", "--op", "M[(z-2)/(z-3)]", "--to", "E[1;0]"])
    assert code == EXIT_PASS
    assert out.strip() == "1/2*E[1;0]"


def test_apply_output_reparses():
    for op, to in [("M[(z-2)/(z-3)]", "E[1;0]"),
                   ("M[z-3]", "E[1;1]"),
                   ("E[w]", "E[a;0]*E[b;1]"),
                   ("M[1/(z-s)]", "E[t;1]")]:
        code, out, _ = run(["apply", "--op", op, "--to", to])
        assert code == EXIT_PASS
        assert parse_mm(str(parse_mm(out.strip()))) == parse_mm(out.strip())


def test_identity_fusion_via_ope():
    code, out, _ = run(["ope", "--left", "psi[r]", "--right", "psi+[s]",
                        "--at", "s-r", "--order", "1", "--apply", "E[a;0]"])
    assert code == EXIT_PASS
    assert out.strip() == "E[a;0]"


def test_domain_violation_exit_code():
    code, _, err = run(["apply", "--op", "M[(z-1)]", "--to", "E[1;0]"])
    assert code == EXIT_DOMAIN
    assert "1" in err


def test_syntax_error_exit_code():
    code, _, err = run(["apply", "--op", "M[(z-2]", "--to", "E[1;0]"])
    assert code == EXIT_SYNTAX
    assert "syntax" in err.lower()


def test_unknown_suite_exit_code():
    code, _, err = run(["verify", "--suite", "no-such-suite"])
    assert code == EXIT_CONFIG
    assert "no-such-suite" in err


def test_compose_reports_singular_locus():
    code, out, _ = run(["compose", "--left", "psi[r]", "--right", "psi+[s]"])
    assert code == EXIT_PASS
    assert "singular locus:" in out
    assert "none" not in out.splitlines()[-1]


def test_laurent_coefficients():
    # note the = form: a leading '-' in a separate token reads as a flag
    code, out, _ = run(["laurent", "--field", "psi", "--coeffs=-1..1",
                        "--vector", "1"])
    assert code == EXIT_PASS
    lines = dict(line.split(" ", 1) for line in out.strip().splitlines())
    assert lines["[-1]"] == "0"
    assert lines["[0]"] == "T"


def test_verify_json_records_and_determinism():
    def once():
        out = io.StringIO()
        code = cli_dispatch(["verify", "--suite", "mxi-ez", "--seed", "5",
                             "--format", "json"], out, io.StringIO())
        return code, out.getvalue()

    code1, text1 = once()
    code2, text2 = once()
    assert code1 == code2 == EXIT_PASS
    assert text1 == text2
    records = [json.loads(line) for line in text1.strip().splitlines()]
    assert records[-1]["fail"] == 0
    ids = [r["id"] for r in records[:-1]]
    assert ids == sorted(ids)


def test_run_suite_config_validation():
    with pytest.raises(UnknownSuite):
        run_suite("nope")
    with pytest.raises(BadConfig):
        run_suite("leibniz", {"bogus": 1})
    # globally-accepted keys are ignored where unused
    assert run_suite("leibniz", {"seed": 3}).passed


def test_bf_subcommand():
    code, out, _ = run(["bf", "create", "--z0", "2", "--size", "2",
                        "--kind", "boson", "--poly", "sigma1"])
    assert code == EXIT_PASS
    code, out, _ = run(["bf", "oracle", "--z0", "2", "--size", "2",
                        "--poly", "sigma2", "--samples", "5", "--seed", "0"])
    assert code == EXIT_PASS
    assert json.loads(out)["ok"]


def test_no_command_shows_help():
    code, _, err = run([])
    assert code == EXIT_CONFIG
    assert "usage" in err.lower()
