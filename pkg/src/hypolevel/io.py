"""Serialization: region JSON, contour CSV, atomic file writes."""

from __future__ import annotations

import base64
import json
import os
import tempfile

import numpy as np

from hypolevel.level_set import RegionSample, spec_from_dict

REGION_SCHEMA = "hypolevel-region/1"
REPORT_SCHEMA = "hypolevel-report/1"


def atomic_write_text(path: str, text: str) -> None:
    """Write via a temp file in the target directory, then rename."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def region_to_dict(region: RegionSample) -> dict:
    bits = np.packbits(region.bitmap.astype(np.uint8), axis=None)
    return {
        "schema": REGION_SCHEMA,
        "spec": region.spec.to_dict(),
        "map": region.map_text,
        "resolution": region.resolution,
        "tol_contour": region.tol_contour,
        "contains_origin": bool(region.contains_origin),
        "in_cells": region.in_count(),
        "contours": [[[float(z.real), float(z.imag)] for z in c] for c in region.contours],
        "bitmap": base64.b64encode(bits.tobytes()).decode("ascii"),
    }


def region_from_dict(d: dict) -> RegionSample:
    if d.get("schema") != REGION_SCHEMA:
        raise ValueError(f"unsupported region schema {d.get('schema')!r}")
    n = int(d["resolution"])
    bits = np.frombuffer(base64.b64decode(d["bitmap"]), dtype=np.uint8)
    bitmap = np.unpackbits(bits)[: n * n].reshape(n, n).astype(bool)
    contours = [np.array([complex(x, y) for x, y in c]) for c in d["contours"]]
    return RegionSample(spec_from_dict(d["spec"]), d["map"], n, bitmap, contours,
                        bool(d["contains_origin"]), float(d.get("tol_contour", 1e-9)))


def contours_to_csv(region: RegionSample) -> str:
    blocks = ["\n".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in c) for c in region.contours]
    return "x,y\n" + "\n\n".join(blocks) + ("\n" if blocks else "")
