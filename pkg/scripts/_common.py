"""Shared output helpers for the experiment scripts."""
import csv
import json
from pathlib import Path

from smallperiod.families import fifth, kawahara, kdv, seventh

FAMILIES = {"fifth": fifth(), "kawahara": kawahara(0.5), "seventh": seventh(), "kdv": kdv()}


def out_dir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


def write_csv(path, rows):
    if not rows:
        Path(path).write_text("")
        return
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def write_json(path, payload):
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
