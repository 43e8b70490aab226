"""Monte Carlo simulation of the Alice -> E_1 -> ... -> E_N -> Bob chain.

Two backends are available.  ``symbolic`` tracks each transmitted state as a
(basis, symbol) pair and applies the rule "same basis keeps the symbol, a
different basis gives a uniform outcome".  ``quantum`` carries the actual
state vectors from :func:`qutrit_qkd.mubs.mub_table` and samples outcomes
from the Born rule, so it checks the symbolic rule instead of assuming it.

Randomness is keyed by ``(seed, block, party)``: rounds are grouped in
fixed-size blocks and every party gets its own stream per block.  The
output therefore does not depend on how blocks are spread over workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .information import AttackVector, ProtocolParams, p_ab, p_ae
from .mubs import mub_table

SYMBOLIC = "symbolic"
QUANTUM = "quantum"
BACKENDS = (SYMBOLIC, QUANTUM)

BLOCK = 1 << 16


class InsufficientDataError(RuntimeError):
    """No sifted rounds were produced, so no conditional can be estimated."""


@dataclass(frozen=True)
class SimConfig:
    params: ProtocolParams
    attack: AttackVector
    rounds: int
    seed: int = 0
    backend: str = SYMBOLIC

    def __post_init__(self):
        if not isinstance(self.attack, AttackVector):
            object.__setattr__(self, "attack", AttackVector(tuple(self.attack)))
        if int(self.rounds) != self.rounds or self.rounds < 1:
            raise ValueError(f"rounds must be a positive integer, got {self.rounds!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}, got {self.backend!r}")

    def to_json_obj(self) -> dict:
        return {
            "d": self.params.d,
            "m_bases": self.params.M,
            "omegas": list(self.attack.omegas),
            "rounds": int(self.rounds),
            "seed": int(self.seed),
            "backend": self.backend,
        }


@dataclass(frozen=True)
class RoundRecord:
    alice_basis: int
    alice_symbol: int
    intercepted: tuple[bool, ...]
    eve_bases: tuple[int, ...]
    eve_records: tuple[int, ...]
    bob_basis: int
    bob_symbol: int

    @property
    def sifted(self) -> bool:
        return self.bob_basis == self.alice_basis


@dataclass(frozen=True)
class SimulationStats:
    config: SimConfig
    sifted_count: int
    ab_counts: np.ndarray
    eve_counts: tuple[np.ndarray, ...]
    pooled: bool = True

    def __post_init__(self):
        self.ab_counts.setflags(write=False)
        for c in self.eve_counts:
            c.setflags(write=False)

    def _p00(self, counts: np.ndarray) -> float:
        if self.pooled:
            return float(np.trace(counts) / counts.sum())
        return float(counts[0, 0] / counts[0].sum())

    @property
    def p_ab_00(self) -> float:
        return self._p00(self.ab_counts)

    @property
    def p_ae_00(self) -> list[float]:
        return [self._p00(c) for c in self.eve_counts]

    @property
    def error_rate(self) -> float:
        return (1.0 - self.p_ab_00) / (self.config.params.d - 1)

    @property
    def sifted_fraction(self) -> float:
        return self.sifted_count / self.config.rounds

    def row_conditionals(self, counts: np.ndarray | None = None) -> np.ndarray:
        """P(x|x) for each Alice symbol x separately."""
        counts = self.ab_counts if counts is None else counts
        return np.diag(counts) / counts.sum(axis=1)

    def effective_n(self) -> int:
        """Number of sifted samples behind each P(0|0) estimate."""
        if self.pooled:
            return self.sifted_count
        return int(self.ab_counts[0].sum())

    def to_json_obj(self) -> dict:
        return {
            "config": self.config.to_json_obj(),
            "pooled": self.pooled,
            "sifted_count": int(self.sifted_count),
            "ab_counts": self.ab_counts.tolist(),
            "eve_counts": [c.tolist() for c in self.eve_counts],
            "p_ab_00": self.p_ab_00,
            "p_ae_00": self.p_ae_00,
            "error_rate": self.error_rate,
        }


def _party_rngs(seed: int, block: int, n_parties: int) -> list[np.random.Generator]:
    return [
        np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block, party])))
        for party in range(n_parties)
    ]


def _run_block(config: SimConfig, rngs, size: int, bases=None):
    """Vectorized simulation of ``size`` rounds.

    ``rngs[0]`` drives Alice, ``rngs[i]`` eavesdropper E_i and ``rngs[-1]``
    Bob.  Returns per-round arrays.
    """
    d, M = config.params.d, config.params.M
    omegas = config.attack.omegas
    quantum = config.backend == QUANTUM
    if quantum and bases is None:
        bases = mub_table(d).as_array()[:M]

    a_basis = rngs[0].integers(M, size=size)
    a_sym = rngs[0].integers(d, size=size)
    cur_basis, cur_sym = a_basis, a_sym
    psi = bases[a_basis, a_sym] if quantum else None
    if quantum:
        # rows of ``flat`` are <u_k| for every basis vector of every basis
        flat = bases.conj().reshape(M * d, d)
        rows = np.arange(size)

    def measure(rng, basis):
        if quantum:
            amps = (psi @ flat.T).reshape(size, M, d)[rows, basis]
            probs = np.cumsum(amps.real**2 + amps.imag**2, axis=1)
            u = rng.random(size) * probs[:, -1]
            out = np.minimum((probs < u[:, None]).sum(axis=1), d - 1)
        else:
            out = np.where(basis == cur_basis, cur_sym, rng.integers(d, size=size))
        return out

    intercepted, e_bases, records = [], [], []
    for i, w in enumerate(omegas, start=1):
        rng = rngs[i]
        hit = rng.random(size) < w
        e_basis = rng.integers(M, size=size)
        guess = rng.integers(d, size=size)
        out = measure(rng, e_basis)
        records.append(np.where(hit, out, guess))
        intercepted.append(hit)
        e_bases.append(e_basis)
        cur_basis = np.where(hit, e_basis, cur_basis)
        cur_sym = np.where(hit, out, cur_sym)
        if quantum:
            psi = np.where(hit[:, None], bases[e_basis, out], psi)

    b_basis = rngs[-1].integers(M, size=size)
    b_sym = measure(rngs[-1], b_basis)
    return a_basis, a_sym, intercepted, e_bases, records, b_basis, b_sym


def run_round(config: SimConfig, rng: np.random.Generator) -> RoundRecord:
    """Simulate a single round, drawing every party's randomness from ``rng``."""
    rngs = [rng] * (config.attack.n + 2)
    a_b, a_s, hits, e_b, recs, b_b, b_s = _run_block(config, rngs, 1)
    return RoundRecord(
        alice_basis=int(a_b[0]),
        alice_symbol=int(a_s[0]),
        intercepted=tuple(bool(h[0]) for h in hits),
        eve_bases=tuple(int(e[0]) for e in e_b),
        eve_records=tuple(int(r[0]) for r in recs),
        bob_basis=int(b_b[0]),
        bob_symbol=int(b_s[0]),
    )


def _block_counts(config: SimConfig, block: int, bases) -> tuple[int, np.ndarray, np.ndarray]:
    d = config.params.d
    n_eve = config.attack.n
    start = block * BLOCK
    size = min(BLOCK, config.rounds - start)
    rngs = _party_rngs(config.seed, block, n_eve + 2)
    a_b, a_s, _, _, recs, b_b, b_s = _run_block(config, rngs, size, bases)
    sifted = a_b == b_b
    a = a_s[sifted]
    ab = np.bincount(a * d + b_s[sifted], minlength=d * d).reshape(d, d)
    eve = np.zeros((n_eve, d, d), dtype=np.int64)
    for i, r in enumerate(recs):
        eve[i] = np.bincount(a * d + r[sifted], minlength=d * d).reshape(d, d)
    return int(sifted.sum()), ab.astype(np.int64), eve


def simulate(config: SimConfig, workers: int = 1, pooled: bool = True) -> SimulationStats:
    """Run ``config.rounds`` rounds and accumulate sifted count matrices."""
    d = config.params.d
    n_eve = config.attack.n
    bases = mub_table(d).as_array()[: config.params.M] if config.backend == QUANTUM else None
    n_blocks = -(-config.rounds // BLOCK)
    blocks = range(n_blocks)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _block_counts(config, b, bases), blocks))
    else:
        parts = [_block_counts(config, b, bases) for b in blocks]

    sifted = sum(p[0] for p in parts)
    if sifted == 0:
        raise InsufficientDataError(f"no sifted rounds out of {config.rounds}")
    ab = np.zeros((d, d), dtype=np.int64)
    eve = np.zeros((n_eve, d, d), dtype=np.int64)
    for _, ab_part, eve_part in parts:
        ab += ab_part
        eve += eve_part
    return SimulationStats(config, sifted, ab, tuple(eve[i] for i in range(n_eve)), pooled)


@dataclass(frozen=True)
class Comparison:
    name: str
    empirical: float
    analytic: float
    stderr: float

    @property
    def delta(self) -> float:
        return self.empirical - self.analytic

    @property
    def z(self) -> float:
        return self.delta / self.stderr if self.stderr > 0 else (0.0 if self.delta == 0 else math.inf)

    def passes(self, sigmas: float = 4.0) -> bool:
        return abs(self.z) <= sigmas


def compare_with_analytic(stats: SimulationStats) -> list[Comparison]:
    """Empirical conditionals against the physical closed forms.

    Standard errors are binomial, evaluated at the analytic probability.
    """
    params, attack = stats.config.params, stats.config.attack
    n = stats.effective_n()

    def se(p):
        return math.sqrt(max(p * (1 - p), 0.0) / n)

    exact = p_ab(params, attack)
    out = [Comparison("P_AB(0|0)", stats.p_ab_00, exact, se(exact))]
    for m, emp in enumerate(stats.p_ae_00, start=1):
        exact = p_ae(params, attack, m)
        out.append(Comparison(f"P_AE{m}(0|0)", emp, exact, se(exact)))
    return out


@dataclass(frozen=True)
class ExactConditionals:
    p_ab_00: float
    p_ae_00: list[float] = field(default_factory=list)
    p_ab_exact: Fraction | None = None
    p_ae_exact: list[Fraction] = field(default_factory=list)


def exact_enumeration(params: ProtocolParams, attack) -> ExactConditionals:
    """Exhaustive, exact-rational enumeration of the symbolic chain.

    Every Alice basis and symbol, every interception pattern, every
    eavesdropper and Bob basis, and every uniform outcome branch is
    weighted exactly.  Sifting is imposed by conditioning on Bob's basis
    equal to Alice's.  The joint law is carried as a distribution over
    (Alice basis, Alice symbol, channel basis, channel symbol), and each
    eavesdropper's record is scored against Alice's symbol as she is reached.
    """
    attack = attack if isinstance(attack, AttackVector) else AttackVector(tuple(attack))
    d, M = params.d, params.M
    if attack.n > 4 or M > 4:
        raise ValueError("exact enumeration is limited to N <= 4 and M <= 4")

    inv_d, inv_m = Fraction(1, d), Fraction(1, M)
    dist: dict[tuple[int, int, int, int], Fraction] = {}
    for a in range(M):
        for x in range(d):
            dist[(a, x, a, x)] = inv_m * inv_d

    def outcomes(state_basis, state_sym, basis):
        if basis == state_basis:
            return [(state_sym, Fraction(1))]
        return [(y, inv_d) for y in range(d)]

    eve_correct = []
    for w in attack.omegas:
        w = Fraction(w)
        nxt: dict[tuple[int, int, int, int], Fraction] = {}
        correct = Fraction(0)
        for (a, x, b, s), p in dist.items():
            # skip: private uniform guess, state untouched
            for g in range(d):
                q = p * (1 - w) * inv_d
                if g == x:
                    correct += q
            key = (a, x, b, s)
            nxt[key] = nxt.get(key, Fraction(0)) + p * (1 - w)
            # intercept: random basis, measure, resend the measured state
            for e in range(M):
                for y, py in outcomes(b, s, e):
                    q = p * w * inv_m * py
                    if y == x:
                        correct += q
                    key = (a, x, e, y)
                    nxt[key] = nxt.get(key, Fraction(0)) + q
        # records are independent of Bob's later basis draw, so they
        # condition on sifting trivially
        eve_correct.append(correct)
        dist = {k: v for k, v in nxt.items() if v}

    joint_sifted = Fraction(0)
    joint_correct = Fraction(0)
    for (a, x, b, s), p in dist.items():
        for bob in range(M):
            if bob != a:
                continue
            for y, py in outcomes(b, s, bob):
                q = p * inv_m * py
                joint_sifted += q
                if y == x:
                    joint_correct += q
    pab = joint_correct / joint_sifted
    return ExactConditionals(
        p_ab_00=float(pab),
        p_ae_00=[float(c) for c in eve_correct],
        p_ab_exact=pab,
        p_ae_exact=eve_correct,
    )
