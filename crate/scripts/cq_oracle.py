#!/usr/bin/env python3
"""Expected results for the shipped competency-question cases.

Reads the bundle CSVs directly (no graph, no query engine) and writes
cq1.csv / cq1_public.csv / cq2.csv into the cases directory.

usage: cq_oracle.py CASES_DIR BUNDLE_DIR...
"""
import csv
import sys
from fractions import Fraction
from pathlib import Path

MORE = "https://w3id.org/more#"


def rows(path):
    with open(path, newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def camel(key):
    return "".join(p[:1].upper() + p[1:] for p in key.replace("-", "_").split("_") if p)


def fixed6(q):
    """Six decimal places, rounding half away from zero."""
    scaled = abs(q) * 10**6
    n = int(scaled)
    if scaled - n >= Fraction(1, 2):
        n += 1
    sign = "-" if q < 0 and n else ""
    return f"{sign}{n // 10**6}.{n % 10**6:06d}"


def write(path, header, body):
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(body)


def main():
    cases, bundles = Path(sys.argv[1]), [Path(p) for p in sys.argv[2:]]
    groups = {}
    items = set()
    for b in bundles:
        ages = {r["participant_id"]: int(r["age"]) for r in rows(b / "participants.csv")}
        for r in rows(b / "results.csv"):
            if r["test_item"] == "handgrip":
                groups.setdefault(ages[r["participant_id"]], []).append(Fraction(r["value"]))
        study = rows(b / "study.csv")[0]
        if int(study["year_start"]) <= 2020 and int(study["year_end"]) >= 2015:
            items.update(MORE + camel(r["key"]) for r in rows(b / "test_items.csv"))
    cq1 = [[age, fixed6(sum(v) / len(v))] for age, v in sorted(groups.items())]
    write(cases / "cq1.csv", ["age", "avgStrength"], cq1)
    write(cases / "cq1_public.csv", ["age", "avgStrength"], [])
    write(cases / "cq2.csv", ["item"], [[i] for i in sorted(items)])


if __name__ == "__main__":
    main()
