"""Noether quantities of the fourth-order flow for the four types of
conformal Killing fields, evaluated two independent ways on each
closed-form solution family.
"""

import numpy as np

from confcurves import (
    Dilatation,
    LogSpiral,
    Rotation,
    SpecialConformal,
    TransformedSpiral,
    Translation,
    Circle,
    f_closed,
    f_generic,
)

rng = np.random.default_rng(11)
rot = np.zeros((3, 3))
rot[0, 1], rot[1, 0] = 1.0, -1.0
fields = {
    "translation": Translation(rng.uniform(-1, 1, 3)),
    "rotation": Rotation(rot),
    "dilatation": Dilatation(0.9),
    "special conformal": SpecialConformal(rng.uniform(-1, 1, 3)),
}

spiral = LogSpiral(1.5, np.array([1.0, 0, 0]), np.array([0, 1.0, 0]), np.array([0.2, 0.1, -0.3]))
circle = Circle(np.array([0.1, 0.2, -0.1]), np.array([0, 1.0, 0]), np.array([0.4, 0, 0.3]))
tspiral = TransformedSpiral(spiral, np.array([0.1, -0.1, 0.15]))

for name, family in (("spiral", spiral), ("circle", circle), ("transformed spiral", tspiral)):
    print(f"{name}:")
    for label, field in fields.items():
        vals_closed = [f_closed(field, family.jet(float(t))) for t in np.linspace(-1, 1, 9)]
        vals_generic = [f_generic(field, family.jet(float(t))) for t in np.linspace(-1, 1, 9)]
        gap = max(abs(a - b) for a, b in zip(vals_closed, vals_generic))
        spread = max(vals_closed) - min(vals_closed)
        print(
            f"  {label:18s} value {vals_closed[0]:+.8f}   spread {spread:.2e}   "
            f"closed-vs-generic {gap:.2e}"
        )
    print()

print("two-dimensional loxodromes: the rotation quantity equals the pitch")
for c in (0.5, 1.0, 2.5):
    lox = LogSpiral(c, np.array([1.0, 0.0]), np.array([0.0, 1.0]), np.zeros(2))
    r2 = Rotation(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    print(f"  c = {c}: F_R = {f_closed(r2, lox.jet(0.3)):.12f}")

print()
print("transformed spiral against its closed-form report:")
rep = tspiral.conserved_report()
print(f"  constant flow vector: {np.round(rep.C, 8)}")
print(f"  dilatation rate {rep.dilatation_rate:+.8f} vs evaluated "
      f"{f_closed(Dilatation(1.0), tspiral.jet(0.4)):+.8f}")
