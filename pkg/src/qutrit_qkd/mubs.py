"""Phase states and mutually unbiased bases for qubits and biphoton qutrits.

Qutrit vectors are written in the Fock ordering (|0,2>, |1,1>, |2,0>), i.e.
index ``n`` is the number of horizontally polarized photons.  Qubit vectors
use the computational ordering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

TOL = 1e-12

# primitive cube root of unity
Q = np.exp(2j * np.pi / 3)

FOCK_LABELS = ("|0,2>", "|1,1>", "|2,0>")


def _as_state(amplitudes, d=None) -> np.ndarray:
    psi = np.asarray(amplitudes, dtype=complex)
    if psi.ndim != 1:
        raise ValueError(f"state must be a 1-d amplitude vector, got shape {psi.shape}")
    if d is not None and psi.shape[0] != d:
        raise ValueError(f"expected {d} amplitudes, got {psi.shape[0]}")
    return psi


def phase_operator() -> np.ndarray:
    """The cyclic phase operator E on the biphoton Fock sector.

    E maps |0,2> -> |2,0>, |2,0> -> |1,1> and |1,1> -> |0,2>.
    """
    E = np.zeros((3, 3), dtype=complex)
    E[2, 0] = 1  # |2,0><0,2|
    E[1, 2] = 1  # |1,1><2,0|
    E[0, 1] = 1  # |0,2><1,1|
    return E


def phase_states() -> list[np.ndarray]:
    """Return the three normalized eigenstates |m> of the phase operator."""
    return [np.array([1, Q**m, Q ** (2 * m)]) / np.sqrt(3) for m in range(3)]


def evolution_phases(p: int) -> np.ndarray:
    """Diagonal of U(t_p), t_p = p*pi/3, in Fock ordering.

    The exponent of each Fock state is n_h * (n_v + 1) * t_p, which gives
    (1, q^p, q^p).
    """
    if p not in (0, 1, 2):
        raise ValueError(f"p must be 0, 1 or 2, got {p!r}")
    t = p * np.pi / 3
    n_h = np.arange(3)
    n_v = 2 - n_h
    return np.exp(1j * n_h * (n_v + 1) * t)


def evolution_operator(p: int) -> np.ndarray:
    return np.diag(evolution_phases(p))


@dataclass(frozen=True)
class MubTable:
    """A complete set of mutually unbiased bases.

    ``bases[b]`` is a (d, d) array whose row ``k`` is the k-th basis vector.
    """

    dimension: int
    labels: tuple[str, ...]
    bases: tuple[np.ndarray, ...]

    def __post_init__(self):
        for B in self.bases:
            B.setflags(write=False)

    def __len__(self):
        return len(self.bases)

    def basis(self, label_or_index) -> np.ndarray:
        if isinstance(label_or_index, str):
            return self.bases[self.labels.index(label_or_index)]
        return self.bases[label_or_index]

    def as_array(self) -> np.ndarray:
        """Stack as (n_bases, d, d)."""
        return np.stack(self.bases)

    def to_json_obj(self) -> list:
        """Nested lists: bases -> vectors -> [re, im] pairs."""
        return [
            [[[float(z.real), float(z.imag)] for z in vec] for vec in B]
            for B in self.bases
        ]

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_obj(), **kwargs)


def mub_table(d: int) -> MubTable:
    """Build the full MUB set for ``d`` in {2, 3}.

    For d=3 the bases are, in order, the computational basis B3 followed by
    B0, B1, B2 with |p,m> = U(t_p)|m>; B0 coincides with the phase states.
    For d=2 they are the eigenbases of Z, X and Y.
    """
    if d == 3:
        computational = np.eye(3, dtype=complex)
        phase = np.stack(phase_states())
        bases = [computational]
        for p in range(3):
            bases.append(phase * evolution_phases(p)[None, :])
        return MubTable(3, ("B3", "B0", "B1", "B2"), tuple(bases))
    if d == 2:
        s = 1 / np.sqrt(2)
        z = np.eye(2, dtype=complex)
        x = np.array([[s, s], [s, -s]], dtype=complex)
        y = np.array([[s, 1j * s], [s, -1j * s]], dtype=complex)
        return MubTable(2, ("Z", "X", "Y"), (z, x, y))
    raise ValueError(f"unsupported dimension d={d!r}; only 2 and 3 are built")


def overlap_deviations(table: MubTable) -> tuple[float, float]:
    """Return (max orthonormality error, max deviation of |<u|v>|^2 from 1/d).

    The first number covers every basis, the second every cross-basis pair.
    """
    d = table.dimension
    ortho = 0.0
    unbiased = 0.0
    bases = table.bases
    for i, B in enumerate(bases):
        gram = B.conj() @ B.T
        ortho = max(ortho, float(np.max(np.abs(gram - np.eye(d)))))
        for C in bases[i + 1 :]:
            cross = np.abs(B.conj() @ C.T) ** 2
            unbiased = max(unbiased, float(np.max(np.abs(cross - 1 / d))))
    return ortho, unbiased


def is_unitary(U, tol=TOL) -> bool:
    U = np.asarray(U)
    return bool(np.max(np.abs(U @ U.conj().T - np.eye(U.shape[0]))) < tol)


def born_probabilities(state, basis) -> np.ndarray:
    """Outcome probabilities |<u_k|psi>|^2 of measuring ``state`` in ``basis``.

    ``basis`` is one (d, d) entry of a :class:`MubTable` (rows are vectors).
    """
    basis = np.asarray(basis)
    psi = _as_state(state)
    if basis.ndim != 2 or basis.shape != (psi.shape[0], psi.shape[0]):
        raise ValueError(
            f"dimension mismatch: state has {psi.shape[0]} amplitudes, basis shape {basis.shape}"
        )
    return np.abs(basis.conj() @ psi) ** 2
