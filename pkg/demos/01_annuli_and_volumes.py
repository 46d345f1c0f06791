"""Annuli between spheres and balls.

An annulus of outer radius r and thickness e holds the points at distance
r - e .. r from its center. Thin annuli look like spheres, full ones (e = r)
are balls. This script tabulates volumes, checks them against Monte Carlo
membership counts, and shows how thickness functions assign e to each r.
"""

import numpy as np

from annuli import AnnulusSpec, annulus_volume, contains, parse_thickness, thickness

# volumes in both norms
for d in (1, 2, 3):
    print(f"d={d}: ball {annulus_volume(d, 1.0, 1.0):.6f}, "
          f"shell e=0.1 {annulus_volume(d, 1.0, 0.1):.6f}, "
          f"cube shell e=0.1 {annulus_volume(d, 1.0, 0.1, 'max'):.6f}")

# the factored volume formula survives very thin shells
for e in (1e-4, 1e-10, 1e-16):
    print(f"d=3, r=1, e={e:g}: volume / (4 pi e) = {annulus_volume(3, 1.0, e) / (4 * np.pi * e):.15f}")

# membership fraction in a box vs exact volume ratio
rng = np.random.default_rng(0)
pts = rng.uniform(-2, 2, (10**6, 2))
for norm in ("euclidean", "max"):
    spec = AnnulusSpec((0.0, 0.0), 2.0, 1.0, norm)
    print(f"{norm:9s}: MC fraction {contains(spec, pts).mean():.4f}, exact {spec.volume / 16:.4f}")

# thickness functions; clamping to e <= r is reported
for text in ("ball", "prop:0.5", "const:3", "pow:1,0.5"):
    fn = parse_thickness(text)
    vals = [thickness(fn, r) for r in (1.0, 4.0, 100.0)]
    print(f"{text:10s}", "  ".join(f"e({r:g})={v.e:g}{'*' if v.clamped else ''}" for r, v in zip((1, 4, 100), vals)))
print("(* = clamped to the radius)")
