#!/usr/bin/env python3
"""Render how Omega_lambda of one map grows as lambda increases.

Each frame is a region JSON plus an SVG.  A convexity report is written next
to each frame, so frames below lambda = 1 show a witness geodesic when one exists.

    python3 scripts/lambda_frames.py --map "aut(-0.5,0)" --range 0.6:2:8 --out-dir runs/frames
"""

import argparse
import os

import numpy as np

from hypolevel import io
from hypolevel.convexity import EmptyRegion, check_h_convex
from hypolevel.dsl import load_map, unparse
from hypolevel.level_set import OmegaLambda, extract_region
from hypolevel.render import render_svg


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--map", default="aut(-0.5,0)")
    ap.add_argument("--range", default="0.6:2:8", help="start:stop:count")
    ap.add_argument("--resolution", type=int, default=256)
    ap.add_argument("--out-dir", default="frames")
    args = ap.parse_args()

    f = load_map(args.map)
    lo, hi, n = args.range.split(":")
    os.makedirs(args.out_dir, exist_ok=True)
    for k, lam in enumerate(np.linspace(float(lo), float(hi), int(n))):
        spec = OmegaLambda(float(lam))
        data = io.region_to_dict(extract_region(spec, f, args.resolution, map_text=unparse(f)))
        try:
            rep = check_h_convex(spec, f, seed=k).to_dict()
        except EmptyRegion:
            rep = {"verdict": "empty", "witness": None}
        stem = os.path.join(args.out_dir, f"frame_{k:04d}")
        io.atomic_write_text(stem + ".json", io.dumps(data))
        io.atomic_write_text(stem + ".report.json", io.dumps(rep))
        io.atomic_write_text(stem + ".svg", render_svg(data, witness=rep["witness"]))
        print(f"lambda={lam:.4f} cells={data['in_cells']} verdict={rep['verdict']}")


if __name__ == "__main__":
    main()
