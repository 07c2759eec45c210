"""Command-line front end with machine-readable JSON reports.

Exit codes: 0 when every requested check passes, 1 on a check failure,
2 on invalid parameters.
"""

from __future__ import annotations

import json
import sys
from fractions import Fraction

import click

from . import __version__, bo, complexes, floer, quantum, semitoric
from .floer import HamiltonianParams, ParameterError

SCHEMA_VERSION = 1


def _fraction(value: str | None) -> Fraction | None:
    if value is None:
        return None
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.UsageError(f"not a rational number: {value!r} ({exc})")


def _params(r: str, eps: str, e: str) -> HamiltonianParams:
    try:
        return HamiltonianParams(_fraction(r), _fraction(eps), _fraction(e))
    except ParameterError as exc:
        raise click.UsageError(f"invalid parameters: {exc}")


def _report(command: str, body: dict, passed: bool) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "quadfloer",
        "version": __version__,
        "command": command,
        "passed": passed,
        **body,
    }


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    click.echo(text)
    sys.exit(0 if report["passed"] else 1)


rational_opt = click.option
param_opts = [
    click.option("--r", "r", default="2/5", show_default=True, help="slope r as p/q"),
    click.option("--eps", "eps", default="1/100", show_default=True, help="eps as p/q"),
    click.option("--E", "-E", "e", default="100", show_default=True, help="E as p/q"),
]


def with_params(f):
    for opt in reversed(param_opts):
        f = opt(f)
    return f


@click.group()
@click.version_option(__version__)
def main():
    """Exact-arithmetic verification toolkit: filtered Floer-type complexes,
    spectral sequences, quantum idempotents and semitoric displaceability."""


@main.command()
@with_params
@click.option("--out", type=click.Path(), default=None)
def generators(r, eps, e, out):
    """Enumerate CZ 1..3 generators and verify the action/index bounds."""
    p = _params(r, eps, e)
    rep = floer.verify_generator_bounds(p)
    _emit(_report("generators", rep.to_json_dict(), rep.passed), out)


@main.command(name="homology-b")
@click.option("--j-max", default=20, show_default=True)
@click.option("--k-max", default=None, type=int)
@click.option("--out", type=click.Path(), default=None)
def homology_b(j_max, k_max, out):
    """Homology table of the undeformed complex (B, d0)."""
    rows = bo.homology_of_B(j_max, k_max)
    passed = all(r.dimension == 1 and r.matches for r in rows)
    body = {"rows": [r.to_json_dict() for r in rows]}
    _emit(_report("homology-b", body, passed), out)


@main.command(name="main-lemma")
@with_params
@click.option("--mu", required=True, type=int, help="filtration truncation depth (>= 1)")
@click.option("--k-max", default=None, type=int)
@click.option("--squeeze/--no-squeeze", default=True, show_default=True,
              help="also run the action-window quotient check")
@click.option("--out", type=click.Path(), default=None)
def main_lemma(r, eps, e, mu, k_max, squeeze, out):
    """Full degree-2 verification pipeline on the truncated complex."""
    p = _params(r, eps, e)
    if mu < 1:
        raise click.UsageError("--mu must be >= 1")
    rep = bo.verify_main_lemma(mu, p, k_max=k_max, run_squeeze=squeeze)
    _emit(_report("main-lemma", rep.to_json_dict(), rep.passed), out)


@main.command()
@with_params
@click.option("--mu", required=True, type=int)
@click.option("--k-max", default=None, type=int)
@click.option("--max-page", default=3, show_default=True, type=int)
@click.option("--out", type=click.Path(), default=None)
def spectral(r, eps, e, mu, k_max, max_page, out):
    """Dump spectral-sequence pages of the truncated complex."""
    p = _params(r, eps, e)
    km = k_max if k_max is not None else bo.required_k_max(bo.DEGREE_WINDOW[1], mu)
    asm = bo.assemble_qb(km, mu, p, degree_window=bo.DEGREE_WINDOW)
    ss = complexes.spectral_sequence(asm.complex, max_page)
    pages = []
    for page in ss.pages:
        if page.r > max_page:
            continue
        pages.append(
            {
                "r": page.r,
                "cells": {
                    f"s={s},j={j}": cell.dimension for (s, j), cell in sorted(page.cells.items())
                },
                "nonzero_differentials": [
                    f"s={s},j={j}" for (s, j) in sorted(page.differentials)
                ],
            }
        )
    body = {
        "assembly": asm.to_json_dict(),
        "degeneration_page": ss.degeneration_page,
        "pages": pages,
    }
    _emit(_report("spectral", body, True), out)


@main.command(name="index-cases")
@click.option("--l-plus", "l_plus", type=click.Choice(list(floer.CONSTRAINTS)), required=True)
@click.option("--out", type=click.Path(), default=None)
def index_cases(l_plus, out):
    """Solve the index/Chern system for differential terms."""
    sols = floer.index_case_analysis(l_plus)
    body = {
        "constraint": l_plus,
        "solutions": [s.to_json_dict() for s in sols],
        "surviving": [s.to_json_dict() for s in sols if not s.excluded],
    }
    _emit(_report("index-cases", body, True), out)


@main.command(name="quantum")
@click.option("--out", type=click.Path(), default=None)
def quantum_cmd(out):
    """Idempotent splitting checks of the degree-4 quantum algebra."""
    e_plus, e_minus = quantum.idempotents()
    pt_sq = quantum.derive_pt_square()
    body = {
        "e_plus": [str(e_plus.unit), str(e_plus.point_t)],
        "e_minus": [str(e_minus.unit), str(e_minus.point_t)],
        "pt_squared": [str(pt_sq.unit), str(pt_sq.point_t)],
        "degree_of_Pt": quantum.grading_check(0, 1),
        "degree_of_unit": quantum.grading_check(4, 0),
    }
    passed = pt_sq == quantum.ONE and body["degree_of_Pt"] == 4 == body["degree_of_unit"]
    _emit(_report("quantum", body, passed), out)


@main.command()
@click.option("--a", "a", required=True, help="first coordinate, rational or decimal")
@click.option("--b", "b", required=True, help="second coordinate, rational or decimal")
@click.option("--out", type=click.Path(), default=None)
def fiber(a, b, out):
    """Classify the fibre over (a, b) with a displaceability certificate."""
    fa, fb = float(_fraction(a)), float(_fraction(b))
    if abs(fb) > 1.0 + 1e-12 or abs(fa) > 2.0 + 1e-12:
        raise click.UsageError("need |a| <= 2 and |b| <= 1")
    mf = semitoric.classify_fiber(fa, fb)
    _emit(_report("fiber", mf.to_json_dict(), True), out)


@main.command(name="alpha-area")
@click.option("--b", "b", required=True, help="curve parameter in (-1, 1)")
@click.option("--csv", "csv_path", type=click.Path(), default=None,
              help="also write a (b, area) table to this path")
@click.option("--b-min", default="-9/10", show_default=True)
@click.option("--b-max", default="9/10", show_default=True)
@click.option("--count", default=50, show_default=True, type=int)
@click.option("--out", type=click.Path(), default=None)
def alpha_area_cmd(b, csv_path, b_min, b_max, count, out):
    """Enclosed area of the curve alpha_b in the reduced cylinder."""
    fb = float(_fraction(b))
    if not -1.0 < fb < 1.0:
        raise click.UsageError("--b must lie strictly inside (-1, 1)")
    area = semitoric.alpha_area(fb)
    click.echo(f"{area:.10f}")
    body = {"b": fb, "area": area}
    if csv_path:
        lo, hi = float(_fraction(b_min)), float(_fraction(b_max))
        if not (-1.0 < lo <= hi < 1.0 and count >= 1):
            raise click.UsageError("need -1 < b-min <= b-max < 1 and count >= 1")
        bs = [lo + (hi - lo) * i / max(count - 1, 1) for i in range(count)]
        with open(csv_path, "w", encoding="utf-8") as fh:
            fh.write(semitoric.area_table_csv(bs))
        body["csv"] = csv_path
    _emit(_report("alpha-area", body, True), out)


@main.command(name="moment-svg")
@click.option("--n", default=2000, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", type=click.Path(), required=True)
def moment_svg(n, seed, out):
    """Sample the moment-map image and write an SVG sketch."""
    if n < 1:
        raise click.UsageError("--n must be >= 1")
    pts = semitoric.moment_image_sample(n, seed)
    semitoric.moment_image_svg(pts, out)
    _emit(_report("moment-svg", {"n": n, "seed": seed, "svg": out}, True), None)


if __name__ == "__main__":
    main()
