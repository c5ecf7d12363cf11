"""Closed-form privacy bounds and parameter sweeps.

All entropies are min-entropies in bits (base-2 logarithms).

Database privacy (against a dishonest client): every raw bit is guessed
with probability at most 1/2 + sin(theta)/2, so the raw key of N*k bits
carries

    H_min = N * k * log2(2 / (1 + sin(theta)))

and a single final bit — the XOR of k raw bits — is captured with
probability at most 2^(-lambda), lambda = k * log2(2 / (1 + sin(theta))).

User privacy (against a dishonest server): a final bit is conclusively
learned only via the unambiguous decode of its whole block, probability
(1 - cos(theta))^k, giving the exponent delta = k * log2(1 / (1 -
cos(theta))); over l independent queries the server's uncertainty is
l * delta bits.

Guessing beats conclusive learning, so lambda <= delta everywhere, with
equality exactly at theta = pi/2 where both collapse to zero and the
scheme degenerates.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .povm import Theta

#: Column order of a sweep table.
SWEEP_COLUMNS = ("theta", "conclusive", "helstrom", "lambda", "delta")

_LN2 = math.log(2.0)


def per_round_conclusive(theta: Theta) -> float:
    """Probability an honest decode is conclusive: 1 - cos(theta)."""
    return 1.0 - theta.cos


def per_round_helstrom(theta: Theta) -> float:
    """Optimal per-round guessing probability: 1/2 + sin(theta)/2."""
    return 0.5 + 0.5 * theta.sin


def lambda_bound(theta: Theta, k: int) -> float:
    """Database-privacy exponent per final-key bit.

    ``2**-lambda`` bounds a dishonest client's probability of holding one
    final bit; computed as ``k * (1 - log2(1 + sin))`` through ``log1p``
    so the right-angle case lands on exactly 0.0.
    """
    if k < 1:
        raise ValueError("k must be positive")
    return k * (1.0 - math.log1p(theta.sin) / _LN2)


def delta_bound(theta: Theta, k: int) -> float:
    """User-privacy exponent per final-key bit.

    ``2**-delta`` bounds a dishonest server's probability of conclusively
    holding one of the client's final bits.
    """
    if k < 1:
        raise ValueError("k must be positive")
    return k * (-math.log1p(-theta.cos) / _LN2)


def data_privacy_entropy(theta: Theta, k: int, N: int) -> float:
    """Min-entropy of the whole N*k-bit raw key given a guessing client."""
    if N < 1:
        raise ValueError("N must be positive")
    return N * lambda_bound(theta, k)


def user_privacy_entropy(theta: Theta, k: int, queries: int) -> float:
    """Min-entropy of the client's key knowledge over ``queries`` runs."""
    if queries < 0:
        raise ValueError("queries must be non-negative")
    return queries * delta_bound(theta, k)


@dataclass(frozen=True)
class SecuritySummary:
    """Every closed-form figure of merit for one parameter point."""

    theta: float
    k: int
    N: int
    queries: int
    conclusive_per_round: float
    helstrom_per_round: float
    lambda_exponent: float
    delta_exponent: float
    data_privacy_bits: float
    user_privacy_bits: float

    def __post_init__(self) -> None:
        if self.lambda_exponent > self.delta_exponent + 1e-12:
            raise ValueError(
                "guessing cannot be harder than conclusive learning "
                f"(lambda {self.lambda_exponent!r} > delta {self.delta_exponent!r})"
            )


def security_summary(theta: Theta, k: int, N: int, queries: int) -> SecuritySummary:
    """Assemble all bounds for one (theta, k, N, queries) point."""
    return SecuritySummary(
        theta=theta.radians,
        k=k,
        N=N,
        queries=queries,
        conclusive_per_round=per_round_conclusive(theta),
        helstrom_per_round=per_round_helstrom(theta),
        lambda_exponent=lambda_bound(theta, k),
        delta_exponent=delta_bound(theta, k),
        data_privacy_bits=data_privacy_entropy(theta, k, N),
        user_privacy_bits=user_privacy_entropy(theta, k, queries),
    )


@dataclass(frozen=True)
class SweepRow:
    """One sweep-table line; field order matches :data:`SWEEP_COLUMNS`."""

    theta: float
    conclusive: float
    helstrom: float
    lambda_: float
    delta: float

    def as_csv_row(self) -> list[str]:
        return [
            repr(float(v))
            for v in (self.theta, self.conclusive, self.helstrom, self.lambda_, self.delta)
        ]


def sweep_theta(thetas: Iterable[float | Theta], k: int) -> list[SweepRow]:
    """Evaluate the per-round rates and both exponents over a theta grid."""
    rows = []
    for t in thetas:
        theta = t if isinstance(t, Theta) else Theta(float(t))
        rows.append(
            SweepRow(
                theta=theta.radians,
                conclusive=per_round_conclusive(theta),
                helstrom=per_round_helstrom(theta),
                lambda_=lambda_bound(theta, k),
                delta=delta_bound(theta, k),
            )
        )
    return rows


def sweep_rows_to_csv(rows: Sequence[SweepRow]) -> str:
    """Render sweep rows as CSV text, header first, full float precision."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow(row.as_csv_row())
    return buf.getvalue()
