"""Parameter sweeps: information curves, Table-1 thresholds and phase diagrams."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .information import (
    PHYSICAL,
    InfoReport,
    ProtocolParams,
    bisect_boundary,
    info_report,
    info_report_uniform,
    quantum_error,
)

SECURE = "secure"
INSECURE = "insecure"

TABLE1_CASES = ((3, 2), (3, 3), (3, 4), (2, 2), (2, 3))


@dataclass(frozen=True)
class CurveSample:
    t: float
    i_ab: float
    i_ae_m: list[float]
    i_ae: float
    p_err: float

    @classmethod
    def from_report(cls, t: float, report: InfoReport) -> "CurveSample":
        return cls(t, report.i_ab, list(report.i_ae_m), report.i_ae, report.p_err)


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple[float, ...]


@dataclass
class PhaseDiagram:
    """Secure/insecure verdicts on a grid plus refined boundary points.

    ``verdicts[i][j]`` belongs to ``x.values[j]``, ``y.values[i]``; each
    boundary entry is ``(row_value, boundary_x)`` for the first change along
    the row, ``boundary_x`` being ``None`` when the row has no change.
    Further changes in the same row go to ``extra_crossings``.
    """

    x: Axis
    y: Axis
    verdicts: list[list[bool]]
    boundary: list[tuple[float, float | None]]
    extra_crossings: list[tuple[float, float]] = field(default_factory=list)

    def verdict_labels(self) -> list[list[str]]:
        return [[SECURE if v else INSECURE for v in row] for row in self.verdicts]

    def to_json_obj(self) -> dict:
        return {
            "x": {"name": self.x.name, "values": list(self.x.values)},
            "y": {"name": self.y.name, "values": list(self.y.values)},
            "verdicts": self.verdict_labels(),
            "boundary": [{"row_value": r, "boundary_value": b} for r, b in self.boundary],
            "extra_crossings": [{"row_value": r, "boundary_value": b} for r, b in self.extra_crossings],
        }


def grid(a: float = 0.0, b: float = 1.0, n: int = 201) -> list[float]:
    if n < 2:
        raise ValueError(f"grid needs at least 2 points, got {n}")
    return [float(v) for v in np.linspace(a, b, n)]


def single_family(t: float) -> tuple[float, ...]:
    return (t,)


def info_curve(
    params: ProtocolParams,
    ts: Sequence[float],
    family: Callable[[float], Sequence[float]] = single_family,
    mode: str = PHYSICAL,
) -> list[CurveSample]:
    """Sample :func:`info_report` along ``family(t)`` for every ``t`` in ``ts``."""
    return [CurveSample.from_report(t, info_report(params, family(t), mode)) for t in ts]


def info_curve_single(params: ProtocolParams, ts: Sequence[float]) -> list[CurveSample]:
    return info_curve(params, ts)


def info_curve_single_both(M: int, ts: Sequence[float]) -> dict[int, list[CurveSample]]:
    """The single-eavesdropper curve for d=3 and, where M allows it, d=2."""
    out = {3: info_curve_single(ProtocolParams(3, M), ts)}
    if M <= 3:
        out[2] = info_curve_single(ProtocolParams(2, M), ts)
    return out


def info_vs_error(
    params: ProtocolParams,
    ts: Sequence[float],
    family: Callable[[float], Sequence[float]] = single_family,
    mode: str = PHYSICAL,
) -> list[CurveSample]:
    """Same samples as :func:`info_curve`, re-keyed so ``t`` holds the error probability."""
    samples = info_curve(params, ts, family, mode)
    keyed = [CurveSample(s.p_err, s.i_ab, s.i_ae_m, s.i_ae, s.p_err) for s in samples]
    return sorted(keyed, key=lambda s: s.t)


def crossing_error(samples: Sequence[CurveSample]) -> float | None:
    """Linear-interpolated error probability where i_ab - i_ae first drops to <= 0."""
    diffs = [s.i_ab - s.i_ae for s in samples]
    for k, (s, diff) in enumerate(zip(samples, diffs)):
        if diff <= 0:
            if k == 0:
                return s.p_err
            prev, dprev = samples[k - 1], diffs[k - 1]
            frac = dprev / (dprev - diff)
            return prev.p_err + frac * (s.p_err - prev.p_err)
    return None


def table1() -> dict[tuple[int, int], float | None]:
    """Quantum error per (d, M) for one eavesdropper, ``None`` if no crossing."""
    out = {}
    for d, M in TABLE1_CASES:
        res = quantum_error(ProtocolParams(d, M), single_family)
        out[(d, M)] = None if res is None else res[1]
    return out


def _row_boundary(secure: Callable[[float], bool], xs: Sequence[float], row: Sequence[bool], tol: float):
    crossings = []
    for j in range(len(xs) - 1):
        if row[j] != row[j + 1]:
            crossings.append(bisect_boundary(secure, xs[j], xs[j + 1], tol))
    return crossings


def phase_diagram_two(
    params: ProtocolParams,
    resolution: int | tuple[int, int] = 201,
    mode: str = PHYSICAL,
    tol: float = 1e-9,
    omega1_range: tuple[float, float] = (0.0, 1.0),
    omega2_range: tuple[float, float] = (0.0, 1.0),
) -> PhaseDiagram:
    """(omega_1, omega_2) diagram for two eavesdroppers; boundary in omega_1 per omega_2 row."""
    nx, ny = (resolution, resolution) if isinstance(resolution, int) else resolution
    xs = grid(*omega1_range, nx)
    ys = grid(*omega2_range, ny)
    verdicts, boundary, extra = [], [], []
    for w2 in ys:

        def secure(w1, w2=w2):
            return info_report(params, (w1, w2), mode).secure

        row = [secure(w1) for w1 in xs]
        verdicts.append(row)
        crossings = _row_boundary(secure, xs, row, tol)
        boundary.append((w2, crossings[0] if crossings else None))
        extra.extend((w2, c) for c in crossings[1:])
    return PhaseDiagram(Axis("omega1", tuple(xs)), Axis("omega2", tuple(ys)), verdicts, boundary, extra)


def phase_diagram_collab(
    params: ProtocolParams,
    omegas: Sequence[float] | None = None,
    n_range: Sequence[int] = range(1, 101),
    tol: float = 1e-9,
) -> PhaseDiagram:
    """(omega, N) diagram for N collaborating eavesdroppers sharing one omega."""
    xs = list(grid()) if omegas is None else [float(w) for w in omegas]
    ns = [int(n) for n in n_range]
    if not ns or min(ns) < 1:
        raise ValueError("N range must contain positive integers")
    verdicts, boundary, extra = [], [], []
    for n in ns:

        def secure(w, n=n):
            return info_report_uniform(params, w, n).secure

        row = [secure(w) for w in xs]
        verdicts.append(row)
        crossings = _row_boundary(secure, xs, row, tol)
        boundary.append((float(n), crossings[0] if crossings else None))
        extra.extend((float(n), c) for c in crossings[1:])
    return PhaseDiagram(Axis("omega", tuple(xs)), Axis("N", tuple(float(n) for n in ns)), verdicts, boundary, extra)
