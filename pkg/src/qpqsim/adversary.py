"""Dishonest-party strategies and their analytic success ceilings.

Three attacks are simulated, each keyed by an :class:`AttackKind`:

``alice-helstrom``
    A dishonest client replaces the prescribed three-outcome POVM with
    the minimum-error (Helstrom) measurement between the two candidate
    collapsed states, guessing every raw key bit.  Per round she guesses
    correctly with probability 1/2 + sin(theta)/2; a k-bit block is
    counted as guessed only when all k constituent guesses are correct,
    which happens with probability (1/2 + sin(theta)/2)^k.

``alice-usd``
    The client keeps the unambiguous measurement but is scored as an
    eavesdropper: she learns a raw bit exactly when the round is
    conclusive (probability 1 - cos(theta)) and never errs, so a k-bit
    block is learned with probability (1 - cos(theta))^k.

``bob-middle``
    A dishonest server measures his halves in the basis halfway between
    the two key bases and forges each announcement so the client's POVM
    never returns the inconclusive outcome.  The client's conclusive rate
    hits its maximum of 1, but her decoded bit is a fair coin carrying no
    correlation with any key record the server could hold.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .povm import Theta, build_povm, key_basis, middle_basis, outcome_distribution
from .qmath import helstrom_measurement


class AttackKind(str, enum.Enum):
    """Attack identifiers, valued to match the command-line flags."""

    ALICE_HELSTROM = "alice-helstrom"
    ALICE_USD = "alice-usd"
    BOB_MIDDLE = "bob-middle"


@dataclass(frozen=True)
class AttackReport:
    """Outcome of a simulated attack.

    ``success_rate`` is the empirical rate that ``bound`` ceilings: the
    guessed-block fraction for ``alice-helstrom``, the fully-conclusive
    block fraction for ``alice-usd``, and the conclusive fraction (whose
    maximum is 1) for ``bob-middle``.  The remaining fields are
    per-attack diagnostics and stay ``None`` where they do not apply.
    """

    kind: AttackKind
    theta: float
    rounds: int
    block_len: int
    bound: float
    success_rate: float
    conclusive_fraction: float | None = None
    error_count: int | None = None
    inconclusive_count: int | None = None
    agreement: float | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.kind, AttackKind):
            object.__setattr__(self, "kind", AttackKind(self.kind))
        if self.rounds < 1:
            raise ValueError("rounds must be positive")
        if self.block_len < 1:
            raise ValueError("block_len must be positive")
        for name in ("bound", "success_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} out of [0, 1]: {value!r}")


def final_key_guess_bound(theta: Theta, block_len: int, kind: AttackKind | str) -> float:
    """Probability of capturing one final-key bit built from ``block_len``
    raw bits, under the given attack.

    A final bit is the XOR of its whole block, so an attacker holds it
    exactly when every constituent raw bit is captured; the per-round
    capture probabilities multiply across a block.
    """
    if block_len < 1:
        raise ValueError("block_len must be positive")
    kind = AttackKind(kind)
    if kind is AttackKind.ALICE_HELSTROM:
        per_round = 0.5 + 0.5 * theta.sin
    elif kind is AttackKind.ALICE_USD:
        per_round = 1.0 - theta.cos
    else:
        # Middle states already force every round conclusive.
        per_round = 1.0
    return per_round**block_len


def _candidate_states(theta: Theta) -> list:
    """states[r][a] = client-side collapsed state for raw bit r, announcement a."""
    return [
        [key_basis(r, theta).vector(a) for a in (0, 1)]
        for r in (0, 1)
    ]


def _decode_distributions(theta: Theta) -> np.ndarray:
    """dists[r, a] = honest POVM outcome distribution for raw bit r, announcement a."""
    states = _candidate_states(theta)
    povms = (build_povm(0, theta), build_povm(1, theta))
    dists = np.empty((2, 2, 3))
    for r in (0, 1):
        for a in (0, 1):
            dists[r, a] = outcome_distribution(povms[a], states[r][a])
    return dists


def _sample_trits(dists: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF sample of three-outcome rounds, one distribution per row."""
    p0 = dists[..., 0]
    p1 = dists[..., 1]
    return np.where(u < p0, 0, np.where(u < p0 + p1, 1, 2)).astype(np.int8)


def attack_alice_helstrom(
    theta: Theta,
    rounds: int,
    rng: np.random.Generator,
    *,
    block_len: int = 1,
) -> AttackReport:
    """Guess every raw bit with the minimum-error two-outcome measurement.

    Each round the server's announcement ``a`` narrows the client's qubit
    to one of two pure states; the Helstrom measurement between them is
    optimal, succeeding with probability 1/2 + sin(theta)/2 regardless of
    ``a``.  Blocks of ``block_len`` rounds are scored as captured only
    when every guess inside is correct.
    """
    if rounds < 1:
        raise ValueError("rounds must be positive")
    if rounds % block_len != 0:
        raise ValueError(f"rounds ({rounds}) must be a multiple of block_len ({block_len})")

    states = _candidate_states(theta)
    # p_plus[r, a]: chance the Helstrom test for announcement a fires its
    # "raw bit 0" outcome on the state collapsed from raw bit r.
    p_plus = np.empty((2, 2))
    for a in (0, 1):
        v_plus, _ = helstrom_measurement(
            states[0][a].projector(), states[1][a].projector()
        )
        for r in (0, 1):
            p_plus[r, a] = abs(np.vdot(v_plus.vector, states[r][a].vector)) ** 2

    raw = rng.integers(2, size=rounds)
    ann = rng.integers(2, size=rounds)
    u = rng.random(rounds)
    guesses = np.where(u < p_plus[raw, ann], 0, 1)
    correct = guesses == raw
    captured = correct.reshape(-1, block_len).all(axis=1)

    return AttackReport(
        kind=AttackKind.ALICE_HELSTROM,
        theta=theta.radians,
        rounds=rounds,
        block_len=block_len,
        bound=final_key_guess_bound(theta, block_len, AttackKind.ALICE_HELSTROM),
        success_rate=float(captured.mean()),
    )


def attack_alice_usd(
    theta: Theta,
    rounds: int,
    rng: np.random.Generator,
    *,
    block_len: int = 1,
) -> AttackReport:
    """Score the unambiguous measurement as an eavesdropping strategy.

    Rounds are conclusive with probability 1 - cos(theta) and a
    conclusive decode always equals the raw bit, so ``error_count`` must
    come back 0.  A block counts as captured when all its rounds are
    conclusive.
    """
    if rounds < 1:
        raise ValueError("rounds must be positive")
    if rounds % block_len != 0:
        raise ValueError(f"rounds ({rounds}) must be a multiple of block_len ({block_len})")

    dists = _decode_distributions(theta)
    raw = rng.integers(2, size=rounds)
    ann = rng.integers(2, size=rounds)
    outcomes = _sample_trits(dists[raw, ann], rng.random(rounds))

    conclusive = outcomes != 2
    errors = int(np.count_nonzero(conclusive & (outcomes != raw)))
    captured = conclusive.reshape(-1, block_len).all(axis=1)

    return AttackReport(
        kind=AttackKind.ALICE_USD,
        theta=theta.radians,
        rounds=rounds,
        block_len=block_len,
        bound=final_key_guess_bound(theta, block_len, AttackKind.ALICE_USD),
        success_rate=float(captured.mean()),
        conclusive_fraction=float(conclusive.mean()),
        error_count=errors,
    )


def attack_bob_middle_state(
    theta: Theta,
    rounds: int,
    rng: np.random.Generator,
) -> AttackReport:
    """Send intermediate states and forge announcements accordingly.

    Measuring the server halves in the middle basis collapses the client
    qubit onto one of the two intermediate states; announcing the
    opposite bit pairs each with the POVM whose inconclusive element it
    annihilates.  Every round therefore decodes conclusively, but the
    decoded bit agrees with an independent uniform key record only half
    the time — the attack trades away correctness for conclusiveness.
    """
    if rounds < 1:
        raise ValueError("rounds must be positive")

    mid = middle_basis(theta)
    povms = (build_povm(0, theta), build_povm(1, theta))
    # dists[m]: decode distribution when the client holds middle state m
    # and the server announces 1 - m.
    dists = np.empty((2, 3))
    for m in (0, 1):
        dists[m] = outcome_distribution(povms[1 - m], mid.vector(m))

    middles = rng.integers(2, size=rounds)
    outcomes = _sample_trits(dists[middles], rng.random(rounds))
    record = rng.integers(2, size=rounds)

    conclusive = outcomes != 2
    inconclusive = int(rounds - np.count_nonzero(conclusive))
    agree = float(np.mean(outcomes[conclusive] == record[conclusive])) if conclusive.any() else 0.0

    return AttackReport(
        kind=AttackKind.BOB_MIDDLE,
        theta=theta.radians,
        rounds=rounds,
        block_len=1,
        bound=final_key_guess_bound(theta, 1, AttackKind.BOB_MIDDLE),
        success_rate=float(conclusive.mean()),
        conclusive_fraction=float(conclusive.mean()),
        inconclusive_count=inconclusive,
        agreement=agree,
    )
