import io
import json

import pytest

from dyckmoments.cli import EXIT_CAP, EXIT_OK, EXIT_USAGE, build_parser, resolve, run


def call(argv, environ=None):
    out = io.StringIO()
    code = run(argv, out=out, environ=environ or {})
    return code, out.getvalue()


def test_paths_count():
    assert call(["paths", "--kind", "dyck", "-n", "3", "--count"]) == (0, "5\n")


def test_paths_weights_json():
    code, text = call(["paths", "--kind", "dyck", "-n", "2", "--weights", "--format", "json"])
    assert code == 0
    assert json.loads(text) == [{"path": "UUDD", "weight": "1*a0*a1"}, {"path": "UDUD", "weight": "1*a0^2"}]


def test_moments_table():
    code, text = call(["moments", "--sequence", "omega", "--max", "5", "--format", "csv"])
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "sequence,n,poly" and len(lines) == 7
    assert lines[2] == "omega_1,1,2*m1"


def test_weights_cross_check():
    code, text = call(["weights", "--kind", "W", "-n", "4", "--cross-check"])
    assert code == 0 and text.endswith("PASS\n")


def test_series_and_trees():
    assert call(["series", "--relation", "harmonic", "--max-order", "9"])[0] == EXIT_OK
    code, text = call(["trees", "invert", "--target", "alpha_from_omega", "-n", "2"])
    assert text == "-1/4*omega1^2 + 1/2*omega2\n"
    code, text = call(["trees", "phi", "--class", "3", "-n", "3", "--format", "csv"])
    assert text.splitlines()[1:] == ["3,1/2", "\"2,1\",-7/8", "\"1,2\",-5/8", "\"1,1,1\",9/8"]


def test_spectra_exact():
    code, text = call(["spectra", "exact", "--kind", "entry11", "-n", "4", "-k", "4", "--format", "json"])
    assert json.loads(text)[0]["exact"] == "7/12"


def test_usage_and_cap_codes():
    assert call(["paths"])[0] == EXIT_USAGE
    assert call(["nonsense"])[0] == EXIT_USAGE
    assert call(["paths", "-n", "15", "--count"])[0] == EXIT_CAP
    assert call(["paths", "-n", "15", "--count", "--cap", "15"])[0] == EXIT_OK
    assert call(["spectra", "exact", "-n", "3", "-k", "2", "--dist", "bogus:1"])[0] == EXIT_USAGE


def test_env_precedence():
    ns = build_parser().parse_args(["spectra", "mc", "-n", "3", "-k", "2", "--seed", "5"])
    resolve(ns, {"DYCKMOMENTS_SEED": "9", "DYCKMOMENTS_SAMPLES": "77"})
    assert ns.seed == 5 and ns.samples == 77 and ns.workers == 1
    assert call(["paths", "-n", "2", "--count"], {"DYCKMOMENTS_CAP": "1"})[0] == EXIT_CAP
    assert call(["paths", "-n", "2", "--count"], {"DYCKMOMENTS_CAP": "x"})[0] == EXIT_USAGE


def test_verify_all_small():
    code, text = call(["verify-all", "2", "--samples", "2000", "--format", "json"])
    doc = json.loads(text)
    assert code == 0 and doc["status"] == "PASS"
    assert doc["config"] == {"N": 2, "samples": 2000, "seed": 0}
