"""Boundary omega versus N for collaborating eavesdroppers, all (d, M)."""

from qutrit_qkd.information import ProtocolParams
from qutrit_qkd.scan import TABLE1_CASES, grid, phase_diagram_collab

if __name__ == "__main__":
    checkpoints = (1, 2, 5, 10, 50, 100)
    print("d M " + " ".join(f"N={n:<4d}" for n in checkpoints))
    for d, M in TABLE1_CASES:
        diagram = phase_diagram_collab(ProtocolParams(d, M), grid(0, 1, 201), range(1, 101))
        bounds = dict(diagram.boundary)
        print(f"{d} {M} " + " ".join(f"{bounds[float(n)]:.4f}" for n in checkpoints))
