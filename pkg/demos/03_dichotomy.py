"""Thin versus proportional thickness: the weak-type ratio.

For constant thickness delta the ratio lam^p |{M f >= lam}| / int f^p at
lam ~ ln|ln delta| keeps growing as delta -> 0. With thickness 0.5 r the
best constant over all thresholds stays put, like the ball maximal function.
"""

from annuli import control_report, dichotomy_report

deltas = (1e-2, 1e-4, 1e-8, 1e-16)
thin = dichotomy_report(2, 2.0, deltas)
print("const:delta (d=2, probe annulus 1 < |x| <= 2)")
print("  delta     lambda   measure   ratio    lower bound")
for row in thin.rows:
    print(f"  {row.delta:7.0e}  {row.lam:.4f}   {row.measure:.4f}   {row.ratio:.4f}   {row.paper_bound:.4f}")

ctrl = control_report(2, 2.0, deltas, gamma=0.5)
row = ctrl.rows[0]
print(f"\nprop:0.5: sup over lambda at lambda={row.lam:.3f}, measure {row.measure:.4f}, ratio {row.ratio:.4f}")
print(f"thin ratio grew x{thin.ratios()[-1] / thin.ratios()[0]:.2f}; proportional stays at {ctrl.ratios().max():.4f}")
