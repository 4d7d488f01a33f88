#!/usr/bin/env python3
"""Build-and-import smoke test for the pyrcd extension module.

Builds the cdylib with cargo, loads it as a Python module, and exercises the
main types and operations end to end. Run from anywhere:

    python3 python/smoke_test.py [--profile release|debug]
"""

import argparse
import importlib.util
import pathlib
import shutil
import subprocess
import sys
import tempfile

REPO_ROOT = pathlib.Path(__file__).resolve().parent.parent


def build_and_load(profile: str):
    cargo_args = ["cargo", "build", "-p", "rcd-python"]
    if profile == "release":
        cargo_args.append("--release")
    subprocess.run(cargo_args, cwd=REPO_ROOT, check=True)

    built = REPO_ROOT / "target" / profile / "libpyrcd.so"
    if not built.exists():
        sys.exit(f"missing build artifact: {built}")

    staging = pathlib.Path(tempfile.mkdtemp(prefix="pyrcd-"))
    module_path = staging / "pyrcd.so"
    shutil.copy2(built, module_path)

    spec = importlib.util.spec_from_file_location("pyrcd", module_path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--profile", choices=["release", "debug"], default="release")
    args = parser.parse_args()

    rcd = build_and_load(args.profile)
    checks = 0

    def ok(label: str) -> None:
        nonlocal checks
        checks += 1
        print(f"ok {checks} - {label}")

    # Generator expansions.
    e4 = rcd.Form.eisenstein(4, 30)
    e6 = rcd.Form.eisenstein(6, 30)
    delta = rcd.Form.delta(30)
    assert e4.series().coefficients(0)[:4] == ["1", "240", "2160", "6720"]
    assert delta.series().coefficients(0)[:4] == ["0", "1", "-24", "252"]
    ok("generator q-expansions")

    # Exact series arithmetic and differentiation.
    d1 = e4.series().derivative()
    assert d1.grade() == 1
    assert d1.coefficients(1)[:3] == ["0", "240", "4320"]
    square = e4.series().mul(e4.series())
    assert square.coefficients(0)[:3] == ["1", "480", "61920"]
    ok("series arithmetic and derivatives")

    # Numeric evaluation: E4(-1/z) z^-4 == E4(z) at z = 2i.
    z = 2j
    lhs = e4.series().eval(-1 / z, 31) * z**-4
    rhs = e4.series().eval(z, 31)
    assert abs(lhs - rhs) < 1e-8
    ok("numeric modularity of E4 under inversion")

    # Bracket: [E4, E6]_1 = -3456 Delta.
    bracket = rcd.rankin_cohen(e4, e6, 1)
    assert bracket.grade() == 1
    assert bracket.coefficients(1)[:3] == ["0", "-3456", "82944"]
    assert rcd.bracket_symmetry_residual(e4, e6, 3).is_zero()
    ok("Rankin-Cohen bracket and symmetry")

    # Weight maps: embed -> lambda -> xi round trip.
    poly = rcd.ModularPolynomial.embed(e4, 2)
    quasi = poly.lambda_map(8)
    assert quasi.xi_map() == poly
    assert quasi.project(0).grade() == 2
    ok("weight maps invert")

    # Decomposition coefficients.
    assert rcd.a_coefficient(1, 1, 4, 6, 0) == "-1/66"
    assert rcd.a_coefficient(1, 1, 4, 6, 1) == "-1/60"
    assert rcd.a_coefficient(1, 1, 4, 6, 2) == "12/55"
    assert rcd.b_constant(1, 1, 4, 6, 0) == "1008"
    table = rcd.coefficient_table(1, 1, 4, 6)
    assert len(table) == 3 and all(len(row) == 4 for row in table)
    ok("coefficient table")

    # Verification harnesses.
    report = rcd.verify_theorem(e4, e6, 1, 1, 30)
    assert report.passed() and len(report.rows()) == 30
    assert [row[0] for row in report.coefficient_rows()] == [0, 1, 2]
    ok("theorem decomposition verifies")

    product = rcd.ModularPolynomial.embed(e4, 1).lambda_map(6).mul(
        rcd.ModularPolynomial.embed(e6, 1).lambda_map(8)
    )
    assert rcd.verify_prop31(product, 30).passed()
    ok("projection reconstruction verifies")

    assert rcd.verify_section5(6, 6).passed()
    assert rcd.verify_section6(3, 6, 6).passed()
    assert rcd.verify_roundtrip(25, 7).passed()
    assert rcd.verify_equivariance(40, 1e-8).passed()
    ok("verification suites pass")

    # Round trip through a form file.
    with tempfile.TemporaryDirectory(prefix="pyrcd-form-") as tmp:
        path = str(pathlib.Path(tmp) / "e6.json")
        e6.save(path)
        loaded = rcd.Form.load(path)
        assert loaded == e6
    ok("form file round trip")

    # JSON report is parseable and schema-shaped.
    import json

    blob = json.loads(rcd.verify_section6(2, 3, 3).to_json())
    assert blob["check"] == "section6" and blob["pass"] is True
    assert {"n", "lhs", "rhs", "pass"} <= set(blob["per_index"][0])
    ok("report JSON schema")

    print(f"smoke test passed ({checks} checks)")


if __name__ == "__main__":
    main()
