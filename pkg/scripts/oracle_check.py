"""Monte Carlo against the closed forms for a few attack vectors, both backends."""

import argparse

from qutrit_qkd.chain import SimConfig, compare_with_analytic, simulate
from qutrit_qkd.information import AttackVector, ProtocolParams

CONFIGS = [
    ((3, 2), (1.0,)),
    ((3, 2), (0.5, 0.5)),
    ((3, 2), (0.3,) * 5),
    ((3, 4), (0.7, 0.2, 0.9)),
    ((2, 3), (0.4, 0.8)),
]

if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--sifted", type=int, default=500_000)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()
    for (d, M), omegas in CONFIGS:
        for backend in ("symbolic", "quantum"):
            config = SimConfig(ProtocolParams(d, M), AttackVector(omegas), args.sifted * M, args.seed + (backend == "quantum"), backend)
            stats = simulate(config)
            zs = ", ".join(f"{c.name}={c.empirical:.4f} (z={c.z:+.1f})" for c in compare_with_analytic(stats))
            print(f"d={d} M={M} omegas={omegas} {backend:8s} {zs}")
