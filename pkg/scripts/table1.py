"""Quantum error for one eavesdropper, next to the published table."""

from qutrit_qkd.scan import table1

PUBLISHED = {(3, 2): 0.167, (3, 3): 0.222, (3, 4): 0.250, (2, 2): 0.25, (2, 3): 0.335}

if __name__ == "__main__":
    print(f"{'d':>2} {'M':>2} {'Q_err':>10} {'published':>10}")
    for (d, M), q in table1().items():
        print(f"{d:>2} {M:>2} {q:>10.6f} {PUBLISHED[(d, M)]:>10.3f}")
