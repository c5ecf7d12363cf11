"""Measurement bases, the three-outcome key POVMs, and EPR-pair sampling.

The protocol's server encodes each raw key bit in the choice between two
non-orthogonal single-qubit bases, the computational basis and a basis
rotated by an angle ``theta``. The client decodes with a three-outcome
POVM whose two conclusive elements never fire on the wrong state — an
unambiguous discrimination measurement — at the price of an inconclusive
outcome with probability ``cos(theta)``.

Entangled-pair sampling uses the collapse identity for real-amplitude
measurements on (|00> + |11>)/sqrt(2): the server's marginal is uniform and
the client's qubit collapses onto the server's post-measurement vector, so
no two-qubit state vector is ever materialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qmath import NUMERIC_TOL, STRUCT_TOL, PureState, eigenvalues_hermitian

#: Index of the inconclusive outcome in every three-outcome POVM here.
INCONCLUSIVE = 2

#: Outcome labels, in element order.
POVM_LABELS = ("conclusive-0", "conclusive-1", "inconclusive")


@dataclass(frozen=True)
class Theta:
    """The basis angle, restricted to (0, pi/2].

    ``theta = 0`` would make the two key bases identical (no key can be
    decoded, the protocol degenerates) and is rejected. ``theta = pi/2``
    is the orthogonal limit where discrimination becomes perfect. Cosine
    and sine are computed once at construction so every consumer sees
    consistent values.
    """

    radians: float
    cos: float = field(init=False, repr=False)
    sin: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        r = float(self.radians)
        if not math.isfinite(r) or not 0.0 < r <= math.pi / 2:
            raise ValueError(f"theta must lie in (0, pi/2], got {self.radians!r}")
        object.__setattr__(self, "radians", r)
        object.__setattr__(self, "cos", math.cos(r))
        object.__setattr__(self, "sin", math.sin(r))


@dataclass(frozen=True)
class MeasBasis:
    """An orthonormal two-outcome measurement basis.

    Attributes
    ----------
    v0, v1 : PureState
        The outcome-0 and outcome-1 vectors; orthogonality is validated
        at construction.
    """

    v0: PureState
    v1: PureState

    def __post_init__(self) -> None:
        overlap = abs(np.vdot(self.v0.vector, self.v1.vector))
        if overlap > STRUCT_TOL:
            raise ValueError(f"basis vectors are not orthogonal: |<v0|v1>| = {overlap!r}")

    def vector(self, outcome: int) -> PureState:
        """The post-measurement state for the given outcome bit."""
        if outcome == 0:
            return self.v0
        if outcome == 1:
            return self.v1
        raise ValueError(f"outcome must be 0 or 1, got {outcome!r}")

    @property
    def is_real(self) -> bool:
        return self.v0.is_real and self.v1.is_real


@dataclass(frozen=True)
class Povm3:
    """An ordered triple of PSD operators summing to the identity.

    Element order is (conclusive-0, conclusive-1, inconclusive); the
    constructor enforces positivity of each element and completeness.
    """

    e0: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    labels: tuple[str, str, str] = POVM_LABELS

    def __post_init__(self) -> None:
        for name, e in zip(self.labels, self.elements):
            lo, _ = eigenvalues_hermitian(e)
            if lo < -STRUCT_TOL:
                raise ValueError(f"POVM element {name} is not PSD: min eigenvalue {lo!r}")
        total = self.e0 + self.e1 + self.e2
        if np.max(np.abs(total - np.eye(2))) > STRUCT_TOL:
            raise ValueError("POVM elements do not sum to the identity")

    @property
    def elements(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.e0, self.e1, self.e2)

    @property
    def is_real(self) -> bool:
        return all(np.max(np.abs(e.imag)) <= STRUCT_TOL for e in self.elements)


def key_basis(bit: int, theta: Theta) -> MeasBasis:
    """The server's measurement basis for raw key bit ``bit``.

    bit 0 is the computational basis; bit 1 is the rotated basis
    {cos(t)|0> + sin(t)|1>, sin(t)|0> - cos(t)|1>}.
    """
    if bit == 0:
        return MeasBasis(PureState(1, 0), PureState(0, 1))
    if bit == 1:
        return MeasBasis(
            PureState(theta.cos, theta.sin),
            PureState(theta.sin, -theta.cos),
        )
    raise ValueError(f"key bit must be 0 or 1, got {bit!r}")


def middle_basis(theta: Theta) -> MeasBasis:
    """The basis halfway between the two key bases (rotation by theta/2).

    This is the basis a dishonest server uses in the correctness-breaking
    attack: both of its vectors give the client a conclusive outcome with
    certainty.
    """
    half = 0.5 * theta.radians
    return MeasBasis(
        PureState(math.cos(half), math.sin(half)),
        PureState(math.sin(half), -math.cos(half)),
    )


def optimal_alpha(theta: Theta) -> float:
    """Largest POVM weight keeping all three elements PSD: 1/(1+cos(theta)).

    With this weight the inconclusive element's smallest eigenvalue is
    exactly zero — the measurement is as conclusive as positivity allows.
    """
    return 1.0 / (1.0 + theta.cos)


def inconclusive_probability(theta: Theta) -> float:
    """Probability of the inconclusive outcome on either key state: cos(theta)."""
    return theta.cos


def povm_elements(
    announced_bit: int, theta: Theta, alpha: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Raw element matrices for the key-decoding POVM at weight ``alpha``.

    Unvalidated: the third element may fail positivity for
    ``alpha > optimal_alpha(theta)``, which is exactly what the
    optimization brute-force needs to probe. Use :func:`build_povm` for a
    validated measurement.

    The announced bit selects the candidate pair: 0 means the server's
    post-measurement state was |0> or |0'> (conclusive elements built from
    the states orthogonal to those), 1 means |1> or |1'>.
    """
    if announced_bit == 0:
        conc0 = np.array([math.sin(theta.radians), -math.cos(theta.radians)])  # _|_ to |0'>
        conc1 = np.array([0.0, 1.0])  # _|_ to |0>
    elif announced_bit == 1:
        conc0 = np.array([math.cos(theta.radians), math.sin(theta.radians)])  # _|_ to |1'>
        conc1 = np.array([1.0, 0.0])  # _|_ to |1>
    else:
        raise ValueError(f"announced bit must be 0 or 1, got {announced_bit!r}")
    e0 = alpha * np.outer(conc0, conc0)
    e1 = alpha * np.outer(conc1, conc1)
    e2 = np.eye(2) - e0 - e1
    return e0, e1, e2


def build_povm(announced_bit: int, theta: Theta, alpha: float | None = None) -> Povm3:
    """The client's three-outcome POVM for the announced bit.

    Parameters
    ----------
    announced_bit : {0, 1}
        The server's public announcement for this round.
    theta : Theta
        Basis angle.
    alpha : float, optional
        POVM weight; defaults to :func:`optimal_alpha`, the value that
        zeroes the inconclusive element's smallest eigenvalue.

    Returns
    -------
    Povm3
        Validated measurement. Outcome 0 conclusively indicates raw key
        bit 0, outcome 1 indicates bit 1, outcome 2 is inconclusive.
    """
    if alpha is None:
        alpha = optimal_alpha(theta)
    return Povm3(*povm_elements(announced_bit, theta, alpha))


def outcome_distribution(povm: Povm3, state: PureState) -> tuple[float, float, float]:
    """Born-rule outcome probabilities of ``povm`` on ``state``.

    Tiny negative values (floating-point dust, at most 1e-12 in magnitude)
    are clamped to zero; anything more negative is a genuine contract
    violation and raises.
    """
    v = state.vector
    probs = []
    for e in povm.elements:
        p = float(np.real(np.vdot(v, e @ v)))
        if p < -STRUCT_TOL:
            raise ValueError(f"negative outcome probability {p!r}")
        probs.append(min(max(p, 0.0), 1.0))
    total = sum(probs)
    if abs(total - 1.0) > NUMERIC_TOL:
        raise ValueError(f"outcome probabilities sum to {total!r}")
    return tuple(probs)


def measure_pure_state(
    action: MeasBasis | Povm3, state: PureState, rng: np.random.Generator
) -> int:
    """Sample one measurement outcome of ``action`` on a pure state.

    Returns 0/1 for a basis, 0/1/2 for a three-outcome POVM.
    """
    r = float(rng.random())
    if isinstance(action, MeasBasis):
        p0 = abs(np.vdot(action.v0.vector, state.vector)) ** 2
        return 0 if r < p0 else 1
    p0, p1, _ = outcome_distribution(action, state)
    if r < p0:
        return 0
    if r < p0 + p1:
        return 1
    return INCONCLUSIVE


def sample_epr(
    bob_basis: MeasBasis,
    alice_action: MeasBasis | Povm3,
    rng: np.random.Generator,
) -> tuple[int, int]:
    """Sample a joint measurement of one EPR pair (|00> + |11>)/sqrt(2).

    The server ("Bob") measures first in ``bob_basis``; for real-amplitude
    bases his marginal is exactly uniform and the client's ("Alice's")
    qubit collapses onto his post-measurement vector. Alice then measures
    the collapsed pure state with ``alice_action``.

    Only real-amplitude bases and POVMs are supported — the collapse
    shortcut would need a complex conjugation otherwise, and no
    measurement in this protocol has complex amplitudes.

    Returns
    -------
    (int, int)
        Bob's outcome bit and Alice's outcome (bit, or trit for a POVM).
    """
    if not bob_basis.is_real or not alice_action.is_real:
        raise ValueError("sample_epr supports only real-amplitude bases and POVMs")
    bob_outcome = int(rng.integers(2))
    collapsed = bob_basis.vector(bob_outcome)
    alice_outcome = measure_pure_state(alice_action, collapsed, rng)
    return bob_outcome, alice_outcome
