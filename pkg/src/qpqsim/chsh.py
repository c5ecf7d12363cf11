"""The CHSH self-test: inputs, measurement bases, win statistic, abort rule.

Both parties play n rounds on shared EPR pairs. The referee side draws the
two input bits uniformly per round; the server measures in the
computational or Hadamard basis, the client in a basis rotated by +/- pi/8.
A round is won when ``b xor c == u and v``; with honest devices each input
pair wins with probability cos^2(pi/8) ~= 0.8536, and the test aborts when
the empirical win rate Z falls below ``cos^2(pi/8) - eta``.

The test is run twice per protocol execution, once with each party as
referee. Honest simulation makes the two runs statistically identical;
only the recorded announcement order differs (the referee's counterpart
declares outcomes first).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .povm import MeasBasis, sample_epr
from .qmath import PureState

#: The ideal quantum win probability, cos^2(pi/8).
IDEAL_WIN_RATE = math.cos(math.pi / 8) ** 2

REFEREES = ("Alice", "Bob")


def chsh_win(u: int, v: int, b: int, c: int) -> int:
    """1 if the round is won: the outcomes' XOR equals the inputs' AND."""
    return int((b ^ c) == (u & v))


def chsh_bob_basis(v: int) -> MeasBasis:
    """Server basis: computational for v=0, Hadamard (|+>,|->) for v=1."""
    if v == 0:
        return MeasBasis(PureState(1, 0), PureState(0, 1))
    if v == 1:
        s = math.sqrt(0.5)
        return MeasBasis(PureState(s, s), PureState(s, -s))
    raise ValueError(f"CHSH input must be 0 or 1, got {v!r}")


def chsh_alice_basis(u: int) -> MeasBasis:
    """Client basis: rotation by +pi/8 for u=0, by -pi/8 for u=1."""
    if u == 0:
        angle = math.pi / 8
    elif u == 1:
        angle = -math.pi / 8
    else:
        raise ValueError(f"CHSH input must be 0 or 1, got {u!r}")
    c, s = math.cos(angle), math.sin(angle)
    return MeasBasis(PureState(c, s), PureState(-s, c))


@dataclass(frozen=True)
class ChshRound:
    """One round: inputs (u, v), outcomes (b, c) and the win indicator."""

    u: int
    v: int
    b: int
    c: int
    win: int

    def __post_init__(self) -> None:
        if self.win != chsh_win(self.u, self.v, self.b, self.c):
            raise ValueError("win flag disagrees with the win predicate")


@dataclass(frozen=True)
class ChshReport:
    """Result of one CHSH test run.

    ``aborted`` is a pure function of the statistic and the threshold;
    the constructor refuses inconsistent flags so a report can never
    contradict its own abort rule.
    """

    n: int
    z_statistic: float
    threshold: float
    aborted: bool
    referee: str

    def __post_init__(self) -> None:
        if self.referee not in REFEREES:
            raise ValueError(f"referee must be one of {REFEREES}, got {self.referee!r}")
        if not 0.0 <= self.z_statistic <= 1.0:
            raise ValueError(f"Z statistic out of [0,1]: {self.z_statistic!r}")
        if self.aborted != (self.z_statistic < self.threshold):
            raise ValueError("abort flag disagrees with Z < threshold")

    @property
    def first_announcer(self) -> str:
        """The party who declares outcomes first: the referee's counterpart."""
        return "Bob" if self.referee == "Alice" else "Alice"


def run_chsh_test(
    n: int,
    eta: float,
    referee: str,
    rng: np.random.Generator,
    *,
    noise: float = 0.0,
    outcome_sampler: Callable[[int, int, np.random.Generator], tuple[int, int]] | None = None,
    on_round: Callable[[ChshRound], None] | None = None,
) -> ChshReport:
    """Play ``n`` CHSH rounds and apply the abort rule.

    Parameters
    ----------
    n : int
        Number of rounds, at least 1.
    eta : float
        Noise tolerance; the abort threshold is ``cos^2(pi/8) - eta``.
        Must lie in [0, cos^2(pi/8)).
    referee : {"Alice", "Bob"}
        Which party draws the inputs this run. Honest devices make the
        two choices statistically identical; the label is recorded for
        the transcript's announcement ordering.
    rng : numpy Generator
        Source of inputs and measurement randomness.
    noise : float, optional
        Depolarizing knob: each outcome bit is flipped independently with
        this probability. Zero for ideal devices.
    outcome_sampler : callable, optional
        Replaces the EPR measurement entirely: called as
        ``outcome_sampler(u, v, rng) -> (b, c)``. Used to model broken or
        adversarial devices in tests.
    on_round : callable, optional
        Invoked with each completed :class:`ChshRound` (transcripts).

    Returns
    -------
    ChshReport
    """
    if n < 1:
        raise ValueError(f"CHSH test needs at least one round, got n={n!r}")
    if not 0.0 <= eta < IDEAL_WIN_RATE:
        raise ValueError(f"eta must lie in [0, cos^2(pi/8)), got {eta!r}")
    if referee not in REFEREES:
        raise ValueError(f"referee must be one of {REFEREES}, got {referee!r}")

    alice_bases = (chsh_alice_basis(0), chsh_alice_basis(1))
    bob_bases = (chsh_bob_basis(0), chsh_bob_basis(1))

    wins = 0
    for _ in range(n):
        u = int(rng.integers(2))
        v = int(rng.integers(2))
        if outcome_sampler is not None:
            b, c = outcome_sampler(u, v, rng)
        else:
            c, b = sample_epr(bob_bases[v], alice_bases[u], rng)
        if noise > 0.0:
            if rng.random() < noise:
                b ^= 1
            if rng.random() < noise:
                c ^= 1
        w = chsh_win(u, v, b, c)
        wins += w
        if on_round is not None:
            on_round(ChshRound(u, v, b, c, w))

    z = wins / n
    threshold = IDEAL_WIN_RATE - eta
    return ChshReport(
        n=n,
        z_statistic=z,
        threshold=threshold,
        aborted=z < threshold,
        referee=referee,
    )
