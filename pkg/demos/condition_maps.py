#!/usr/bin/env python3
"""
Admissibility landscape of the wedge contact-angle conditions.

Three views:

  1. a character map of the one-sided condition over the (alpha, gamma2)
     rectangle, showing the admissible window pi - 2 alpha < gamma2 < 2 alpha
     opening up once alpha exceeds pi/4;
  2. a slice of the two-sided condition at fixed plus-wall bounds
     (lambda1, lambda2) = (0, pi/2), whose gamma2 window shifts with alpha;
  3. the Concus-Finn inequality |pi - gamma1 - gamma2| <= 2 alpha for a
     few wedges, including the equality case (slack exactly 0).

The script ends with the comparison angles the midpoint strategy selects
for an admissible pair, and a mesh-refinement probe on a Concus-Finn
violating configuration whose near-corner sup grows without bound.
"""

import numpy as np

import wedgecap as wc

GLYPH = {True: "#", False: ".", None: "?"}

print("one-sided condition over (alpha, gamma2)  [# holds, . fails, ? borderline]")
alphas = np.linspace(0.15, np.pi / 2, 28)
gammas = np.linspace(0.05, np.pi - 0.05, 61)
print("  gamma2: 0.05 .. pi-0.05 ->")
for a in alphas[::-1]:
    row = "".join(GLYPH[wc.check_theorem1(a, g).holds] for g in gammas)
    print(f"  alpha={a:5.3f}  {row}")

lam1, lam2 = 0.0, np.pi / 2
print(f"\ntwo-sided condition, lambda1={lam1}, lambda2={lam2:.4f}")
for a in (np.pi / 6, np.pi / 4, np.pi / 3, np.pi / 2):
    row = "".join(GLYPH[wc.check_theorem2(a, g, lam1, lam2).holds] for g in gammas)
    print(f"  alpha={a:5.3f}  {row}")

print("\nConcus-Finn |pi - gamma1 - gamma2| <= 2 alpha:")
cases = [
    (np.pi / 3, np.pi / 2, np.pi / 2),            # interior of the region
    (np.pi / 6, np.pi / 2, np.pi / 2 - np.pi / 3),  # equality, slack 0
    (np.pi / 6, np.pi / 6, np.pi / 6),            # violated: sharp wedge, wetting walls
]
for a, g1, g2 in cases:
    cf = wc.concus_finn_admissible(a, g1, g2)
    print(f"  alpha={a:.4f} gamma1={g1:.4f} gamma2={g2:.4f}: "
          f"admissible={cf['admissible']}  slack={cf['slack']:+.3e}")

a, g2 = np.pi / 3, np.pi / 2
tau1, tau2, beta1, beta2 = wc.choose_comparison_angles(a, g2)
print(f"\nmidpoint comparison angles for alpha={a:.4f}, gamma2={g2:.4f}:")
print(f"  tau1={tau1:.6f}  tau2={tau2:.6f}  beta1={beta1:.6f}  beta2={beta2:.6f}")

print("\nrefinement probe on a Concus-Finn violating wedge "
      "(alpha=pi/6, gamma=pi/6 on both walls, H=0):")
domain = wc.build_wedge(np.pi / 6, 1.0)
bspec = wc.BoundarySpec(
    side_plus=wc.Capillary(np.pi / 6),
    side_minus=wc.Capillary(np.pi / 6),
    outer_arc=wc.Dirichlet(0.0),
)
probe = wc.unbounded_corner_probe(domain, wc.constant_H(0.0), bspec,
                                  h_values=(0.08, 0.04, 0.02))
for h, s in zip(probe["h_values"], probe["near_corner_sup"]):
    print(f"  h={h:<6} sup near corner = {s:.3e}")
print("unbounded corner suspected:", probe["UnboundedCornerSuspected"])
