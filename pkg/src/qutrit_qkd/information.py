"""Closed-form conditional probabilities and Shannon informations for a chain
of intercept-resend eavesdroppers.

Everything here is parametric in the dimension ``d`` and the number ``M`` of
mutually unbiased bases in use.  Eavesdropper ``E_1`` sits next to Alice and
``E_N`` next to Bob; ``omegas[i]`` is the interception probability of
``E_{i+1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

PHYSICAL = "physical"
PAPER_LITERAL = "paper_literal"
MODES = (PHYSICAL, PAPER_LITERAL)


class UnsupportedModeError(ValueError):
    """Raised when a formula variant is requested outside its defined range."""


@dataclass(frozen=True)
class ProtocolParams:
    d: int
    M: int

    def __post_init__(self):
        if self.d not in (2, 3):
            raise ValueError(f"d must be 2 or 3, got {self.d!r}")
        if not 2 <= self.M <= self.d + 1:
            raise ValueError(f"M must satisfy 2 <= M <= {self.d + 1} for d={self.d}, got {self.M!r}")


@dataclass(frozen=True)
class AttackVector:
    omegas: tuple[float, ...] = ()

    def __post_init__(self):
        omegas = tuple(float(w) for w in self.omegas)
        for w in omegas:
            if not 0.0 <= w <= 1.0:
                raise ValueError(f"interception probabilities must lie in [0, 1], got {w!r}")
        object.__setattr__(self, "omegas", omegas)

    @property
    def n(self) -> int:
        return len(self.omegas)

    def __len__(self):
        return len(self.omegas)


def _attack(attack) -> AttackVector:
    return attack if isinstance(attack, AttackVector) else AttackVector(tuple(attack))


@dataclass(frozen=True)
class InfoReport:
    p_ab_00: float
    p_ae_00: list[float]
    i_ab: float
    i_ae_m: list[float]
    i_ae: float
    p_err: float
    secure: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "secure", self.i_ab > self.i_ae)


def chain_fidelity(params: ProtocolParams, j: int) -> float:
    """Probability that a sifted symbol survives ``j`` intercept-resend steps.

    Each step measures in a uniformly random basis; the symbol is preserved
    only if every step hit Alice's basis, otherwise it is uniformly random.
    """
    if j < 0:
        raise ValueError(f"j must be non-negative, got {j!r}")
    d, M = params.d, params.M
    return 1 / d + (1 - 1 / d) * float(M) ** (-j)


def pattern_weights(omegas: Sequence[float]) -> list[float]:
    """All intercept-pattern weights at once: entry k is the probability that
    exactly k of the listed eavesdroppers do not intercept."""
    weights = [1.0]
    for w in omegas:
        nxt = [0.0] * (len(weights) + 1)
        for k, c in enumerate(weights):
            nxt[k] += c * w
            nxt[k + 1] += c * (1 - w)
        weights = nxt
    return weights


def intercept_pattern_weight(omegas: Sequence[float], k: int) -> float:
    """Probability that exactly ``k`` of the eavesdroppers skip and the rest intercept."""
    if not 0 <= k <= len(omegas):
        raise ValueError(f"k must lie in [0, {len(omegas)}], got {k!r}")
    return pattern_weights(omegas)[k]


def p_ab(params: ProtocolParams, attack) -> float:
    """Sifted P_AB(0|0) for the full chain."""
    omegas = _attack(attack).omegas
    n = len(omegas)
    weights = pattern_weights(omegas)
    # k non-intercepts means n - k measurements on the way to Bob
    return sum(chain_fidelity(params, n - k) * weights[k] for k in range(n + 1))


def p_ae(params: ProtocolParams, attack, m: int, mode: str = PHYSICAL) -> float:
    """P_AE_m(0|0) for eavesdropper ``m`` (1-based).

    In physical mode only eavesdroppers upstream of ``E_m`` can disturb the
    state she measures.  ``paper_literal`` swaps in the printed
    two-eavesdropper expression for ``m = 1`` and is only defined for N = 2.
    """
    omegas = _attack(attack).omegas
    n = len(omegas)
    if not 1 <= m <= n:
        raise ValueError(f"m must lie in [1, {n}], got {m!r}")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    d = params.d
    if mode == PAPER_LITERAL:
        if n != 2:
            raise UnsupportedModeError("paper_literal P_AE is only defined for two eavesdroppers")
        if m == 1:
            w1, w2 = omegas
            return (1 - w1) / d + chain_fidelity(params, 2) * w1 * w2
    w = omegas[m - 1]
    upstream = omegas[: m - 1]
    weights = pattern_weights(upstream)
    # j upstream interceptions plus E_m's own measurement
    informed = sum(
        chain_fidelity(params, j + 1) * weights[m - 1 - j] for j in range(m)
    )
    return (1 - w) / d + w * informed


def p_ae_unrestricted(params: ProtocolParams, attack, m: int) -> float:
    """The alternative reading of P_AE_m in which the pattern sum runs over
    E_1..E_m (E_m counted as a possible skip) instead of E_1..E_{m-1}.

    Kept only so the simulator can discriminate between the two readings.
    """
    omegas = _attack(attack).omegas
    n = len(omegas)
    if not 1 <= m <= n:
        raise ValueError(f"m must lie in [1, {n}], got {m!r}")
    weights = pattern_weights(omegas[:m])
    total = sum(chain_fidelity(params, m - k) * weights[k] for k in range(m))
    return (1 - omegas[m - 1]) / params.d + total


def _xlog2x(x: float) -> float:
    return 0.0 if x <= 0.0 else x * math.log2(x)


def mutual_info(params: ProtocolParams, p00: float) -> float:
    """Shannon information (bits) of a symmetric d-ary channel with
    correct-symbol probability ``p00``."""
    if not 0.0 <= p00 <= 1.0:
        raise ValueError(f"p00 must lie in [0, 1], got {p00!r}")
    d = params.d
    wrong = 1.0 - p00
    value = math.log2(d) + _xlog2x(p00)
    if wrong > 0.0:
        value += wrong * math.log2(wrong / (d - 1))
    # rounding can push the exact zero at p00 = 1/d slightly negative
    return max(value, 0.0)


def error_probability(params: ProtocolParams, p00: float) -> float:
    """Per-wrong-symbol error rate (1 - P(0|0)) / (d - 1)."""
    return (1.0 - p00) / (params.d - 1)


def _report(params: ProtocolParams, pab: float, paes: list[float]) -> InfoReport:
    i_ab = mutual_info(params, pab)
    i_ae_m = [mutual_info(params, p) for p in paes]
    return InfoReport(
        p_ab_00=pab,
        p_ae_00=paes,
        i_ab=i_ab,
        i_ae_m=i_ae_m,
        i_ae=max(i_ae_m, default=0.0),
        p_err=error_probability(params, pab),
    )


def info_report(params: ProtocolParams, attack, mode: str = PHYSICAL) -> InfoReport:
    attack = _attack(attack)
    pab = p_ab(params, attack)
    paes = [p_ae(params, attack, m, mode) for m in range(1, attack.n + 1)]
    return _report(params, pab, paes)


def _survival(M: int, omega: float) -> float:
    # 1 - omega (M-1)/M, written so omega = 1 gives exactly 1/M
    return (M - (M - 1) * omega) / M


def p_ab_uniform(params: ProtocolParams, omega: float, n: int) -> float:
    """P_AB(0|0) when ``n`` collaborating eavesdroppers all use ``omega``."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n!r}")
    d, M = params.d, params.M
    return 1 / d + (1 - 1 / d) * _survival(M, omega) ** n


def p_ae_uniform(params: ProtocolParams, omega: float, m: int) -> float:
    """P_AE_m(0|0) for collaborating eavesdroppers sharing ``omega``."""
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m!r}")
    d, M = params.d, params.M
    return 1 / d + (1 - 1 / d) * (omega / M) * _survival(M, omega) ** (m - 1)


def info_report_uniform(params: ProtocolParams, omega: float, n: int) -> InfoReport:
    pab = p_ab_uniform(params, omega, n)
    paes = [p_ae_uniform(params, omega, m) for m in range(1, n + 1)]
    return _report(params, pab, paes)


def bisect_boundary(secure: Callable[[float], bool], lo: float, hi: float, tol: float = 1e-9) -> float:
    """Shrink [lo, hi] with ``secure(lo) != secure(hi)`` to width < tol.

    Returns the end carrying the verdict of ``hi``.
    """
    side = secure(lo)
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        if secure(mid) == side:
            lo = mid
        else:
            hi = mid
    return hi


def quantum_error(
    params: ProtocolParams,
    family: Callable[[float], Sequence[float]],
    mode: str = PHYSICAL,
    grid: int = 201,
    tol: float = 1e-9,
):
    """Error probability at the first change of verdict along ``family``.

    ``family`` maps t in [0, 1] to an attack vector.  The scan is on a
    uniform grid, refined by bisection.  Returns ``(t_star, p_err)``, or
    ``None`` if the verdict never changes on [0, 1].
    """

    def secure(t):
        return info_report(params, family(t), mode).secure

    ts = [i / (grid - 1) for i in range(grid)]
    first = secure(ts[0])
    for a, b in zip(ts, ts[1:]):
        if secure(b) != first:
            t_star = bisect_boundary(secure, a, b, tol)
            return t_star, info_report(params, family(t_star), mode).p_err
    return None
