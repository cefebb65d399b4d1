#!/usr/bin/env python3
"""Build a sample wave packet, write its JSON config, and walk it in time.

Demonstrates the expectation-value pipeline: the momentum expectations stay
put while the position expectation drifts.
"""

import json
import sys
from fractions import Fraction

from qeuclid.lattice import QLattice
from qeuclid.schrodinger import gaussian_packet

CONFIG = {
    "lattice": {"q0": 1.1, "j_min": -12, "j_max": 12},
    "mass": "2",
    "phase_order": 20,
    "packet": {"center_j": 0.3, "width_j": 0.9, "odd_fraction": 0.35},
}


def main() -> int:
    out = sys.argv[1] if len(sys.argv) > 1 else "packet.json"
    with open(out, "w") as fh:
        json.dump(CONFIG, fh, indent=2, sort_keys=True)
    print(f"wrote {out}")

    lat = QLattice(1.1, -12, 12)
    wp = gaussian_packet(
        lat,
        Fraction(2),
        center_j=0.3,
        width_j=0.9,
        odd_fraction=0.35,
        phase_order=20,
    )
    print(f"boundary mass: {wp.boundary_mass():.2e}")
    for t in (0.0, 0.1, 0.2):
        p3 = wp.expectation_momentum("3", t)
        x3 = wp.expectation_position("3", t)
        print(
            f"t={t:4.2f}  norm err {wp.norm_check(t):.2e}  "
            f"<P^3> = {p3.real:+.6f}  <X^3> = {x3.real:+.6f}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
