#!/usr/bin/env python3
"""Window-bias demonstration on the bundled synthetic journals.

Expands the two bundled fixtures, prints their indicator table side by
side, and writes the standardized accrual charts.  The point of the
exercise: two journals with very different accrual speeds end up with
impact factors that sample incomparable shares of their lifetime
citations, and the coverage-scaled adjustment puts them back on one scale.

Usage:
    python scripts/fixture_report.py [--outdir OUT] [--strip-self]
"""
from __future__ import annotations

import argparse
from pathlib import Path

from citemetrics import curves, ledger, metrics, synth
from citemetrics.svg import emit_svg_chart

EVAL_YEAR = 2004


def analyze(name, strip_self):
    spec = synth.fixture_spec(name)
    profile, pubs = synth.generate_profile(spec)
    if strip_self:
        profile = ledger.strip_self_references(profile)
    report = metrics.build_indicator_report(profile, pubs, EVAL_YEAR)
    classification = (
        "" if report.coverage is None else curves.classify_journal(report.coverage)
    )
    std, skipped = curves.standardized_volume_curves(curves.volume_curves(profile))
    findings = []
    if len(std) >= 3:
        findings = curves.detect_anomalous_volumes(
            std, ledger.volume_self_rates(profile)
        )
    return report, classification, std, skipped, findings


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="fixture_out", help="chart directory")
    parser.add_argument("--strip-self", action="store_true",
                        help="remove self-references first")
    args = parser.parse_args()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    columns = ("jif", "immediacy", "half_life_jcr", "coverage",
               "scaling_factor", "adjusted_jif")
    print(f"{'indicator':>16}", end="")
    results = {}
    for name in synth.FIXTURE_NAMES:
        results[name] = analyze(name, args.strip_self)
        print(f"{name:>14}", end="")
    print()
    for column in columns:
        print(f"{column:>16}", end="")
        for name in synth.FIXTURE_NAMES:
            report = results[name][0]
            value = getattr(report, column)
            if value is None:
                text = "-"
            elif isinstance(value, str):
                text = value
            else:
                text = f"{float(value):.3f}"
            print(f"{text:>14}", end="")
        print()
    print(f"{'class':>16}", end="")
    for name in synth.FIXTURE_NAMES:
        print(f"{results[name][1]:>14}", end="")
    print()

    for name in synth.FIXTURE_NAMES:
        report, _, std, skipped, findings = results[name]
        if skipped:
            print(f"\n{name}: volumes too young to standardize: {skipped}")
        if findings:
            print(f"{name}: anomalies:")
            for f in findings:
                print(f"  {f.reason:>18} volume {f.pub_year} age {f.age} "
                      f"({float(f.deviation):+.1f} points)")
        series = [
            (str(year), [(a, float(v)) for a, v in enumerate(std[year].values)])
            for year in sorted(std)
        ]
        chart = emit_svg_chart(
            series,
            x_label="age (years since publication)",
            y_label="cumulative citations (% of age-2 count)",
            title=f"{report.journal}: standardized citation accrual",
        )
        path = outdir / f"{name}_standardized.svg"
        path.write_text(chart, encoding="utf-8")
        print(f"{name}: wrote {path}")

    hare_report = results["hare"][0]
    tortoise_report = results["tortoise"][0]
    if hare_report.adjusted_jif and tortoise_report.adjusted_jif:
        raw_ratio = tortoise_report.jif / hare_report.jif
        adj_ratio = tortoise_report.adjusted_jif / hare_report.adjusted_jif
        print(f"\ntortoise/hare impact ratio: raw {float(raw_ratio):.2f}, "
              f"adjusted {float(adj_ratio):.2f}")


if __name__ == "__main__":
    main()
