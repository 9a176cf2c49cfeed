#!/usr/bin/env python3
"""Ledger ingestion throughput check.

Generates a synthetic ledger of --rows random citation rows (default one
million), then times the ingest + full-report path the CLI uses.

Usage:
    python scripts/ingest_benchmark.py [--rows N] [--journals J] [--seed S]
"""
from __future__ import annotations

import argparse
import io
import random
import time

from citemetrics import ledger, metrics


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=1_000_000)
    parser.add_argument("--journals", type=int, default=20)
    parser.add_argument("--seed", type=int, default=8)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    journals = [f"Journal {i:02d}" for i in range(args.journals)]
    print(f"generating {args.rows:,} rows ...")
    rows = [ledger.CITATIONS_HEADER]
    for _ in range(args.rows):
        cited = rng.randint(1984, 2004)
        rows.append(
            f"{rng.choice(journals)},{cited + rng.randint(0, 2004 - cited)},"
            f"{rng.choice(journals)},{cited},{rng.randint(1, 9)}"
        )
    text = "\n".join(rows)
    pubs = ledger.parse_publication_csv(
        ["journal,year,citeable_items"]
        + [f"{j},{y},50" for j in journals for y in range(1984, 2005)]
    )

    start = time.perf_counter()
    profiles = ledger.build_profiles(ledger.iter_citation_records(io.StringIO(text)))
    ingested = time.perf_counter()
    reports = [
        metrics.build_indicator_report(profiles[j], pubs, 2004)
        for j in sorted(profiles)
    ]
    done = time.perf_counter()

    print(f"ingest: {ingested - start:.2f}s "
          f"({args.rows / (ingested - start):,.0f} rows/s)")
    print(f"report: {done - ingested:.2f}s for {len(reports)} journals")
    print(f"total:  {done - start:.2f}s")


if __name__ == "__main__":
    main()
