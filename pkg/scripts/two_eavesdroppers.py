"""Boundary omega_1 of the (omega_1, omega_2) phase diagram for every M, d=3.

Writes one CSV per M into the output directory (default: results/).
"""

import sys
from pathlib import Path

from qutrit_qkd.cli import dump_csv
from qutrit_qkd.information import ProtocolParams
from qutrit_qkd.scan import phase_diagram_two

if __name__ == "__main__":
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "results")
    out.mkdir(parents=True, exist_ok=True)
    for M in (2, 3, 4):
        diagram = phase_diagram_two(ProtocolParams(3, M), 201)
        path = out / f"boundary_two_M{M}.csv"
        path.write_text(dump_csv(["row_value", "boundary_value"], diagram.boundary))
        rows = dict(diagram.boundary)
        print(f"M={M}: omega1_tr(0.25)={rows[0.25]:.4f} omega1_tr(0.75)={rows[0.75]:.4f} -> {path}")
