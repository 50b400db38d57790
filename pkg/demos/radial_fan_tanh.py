#!/usr/bin/env python3
"""
Radial limits at the corner: constant fan vs genuine fan.

Two minimal-surface runs on the half-disk wedge (alpha = pi/2):

  1. the spherical cap (smooth data, capillary pi/2 walls): the radial
     limit Rf(theta) is the same constant on every ray, and matches the
     side limit on the minus wall;
  2. steep tanh data on the plus wall, jumping from -1 to +1 over a
     width-eps band near the corner: the radial limits form a fan,
     constant near each wall with a monotone transition between, the
     discrete footprint of the jump frozen by the graded mesh.

Both profiles are written as SVG plots next to this script.
"""

import os

import numpy as np

import wedgecap as wc
from wedgecap.runner import run_solve
from wedgecap.svg import line_plot

OUT = os.path.join(os.path.dirname(os.path.abspath(__file__)), "out")
os.makedirs(OUT, exist_ok=True)

runs = []
for preset in (wc.cap_preset(alpha=np.pi / 2, h_max=0.02),
               wc.tanh_jump_preset()):
    manifest = run_solve(preset, os.path.join(OUT, "runs"))
    s = manifest.summary
    profile = manifest.result["profile"]
    runs.append((preset["name"], profile))
    print(f"{preset['name']}: {s['kind']}", end="")
    if s["kind"] == "Fan":
        print(f"  alpha1={s['alpha1']:+.4f}  alpha2={s['alpha2']:+.4f}", end="")
    else:
        print(f"  value={s['value']:.6f}", end="")
    print(f"  z2={s['z2']:.6f}")
    print(f"  artifacts in {manifest.out_dir}")

line_plot(os.path.join(OUT, "radial_profiles.svg"),
          [(name, prof.theta_grid, prof.limits) for name, prof in runs],
          title="Rf(theta): cap vs tanh jump",
          xlabel="theta", ylabel="Rf")
print(f"\noverlay written to {os.path.join(OUT, 'radial_profiles.svg')}")
