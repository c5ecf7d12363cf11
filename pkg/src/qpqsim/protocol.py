"""The four-phase private-query protocol for honest parties.

Phases, in pair-accounting order for a batch of K EPR pairs:

1. distribution (bookkeeping only — pairs are assumed delivered),
2. entanglement verification: two CHSH runs of gamma*K/2 rounds, one with
   each party as referee, abort below threshold;
3. key establishment on the remaining (1-gamma)*K pairs: the server draws
   a raw key bit per pair, measures in the matching key basis, announces
   which of the two candidate states his qubit collapsed to, and the
   client decodes with the announced three-outcome POVM (conclusive
   outcomes are never wrong, inconclusive ones are recorded as unknown);
4. measurement-device testing on 2 * gamma*K/2 sacrificed establishment
   rounds: a conflict sub-test (any conclusive decode disagreeing with the
   revealed post-measurement state aborts) and a rate sub-test (the
   conclusive fraction must reach 1 - cos(theta) - eta);
5. private query on the surviving k*N raw key bits: cyclic shift,
   public permutation, XOR of consecutive k-blocks down to an N-bit final
   key, then a one-time-pad exchange that reveals exactly one database bit
   per known final-key bit used.

Pair conservation: gamma*K (verification) + gamma*K (device tests) + k*N
(raw key) = K.

All randomness flows through an explicit numpy Generator, so a (config,
seed) pair fully determines every transcript byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .chsh import IDEAL_WIN_RATE, ChshReport, run_chsh_test
from .povm import Theta, build_povm, key_basis, outcome_distribution
from .qmath import PureState

#: Sentinel for an inconclusive (unknown) key trit.
UNKNOWN = -1

#: Signature of a client-side measurement-device override: called with the
#: announced bit, the collapsed qubit state and the RNG, returns 0/1/2.
AliceDevice = Callable[[int, PureState, np.random.Generator], int]


class ProtocolAbort(Exception):
    """An honest party refused to continue.

    Attributes
    ----------
    phase : str
        Which phase aborted.
    kind : str
        Machine-readable cause: "chsh", "conflict", "rate" or "error_rate".
    report : object or None
        The failing report, when the abort came out of a statistical test.
    """

    def __init__(self, phase: str, kind: str, reason: str, report: object | None = None):
        super().__init__(f"{phase} abort ({kind}): {reason}")
        self.phase = phase
        self.kind = kind
        self.reason = reason
        self.report = report


class RetriesExhausted(Exception):
    """Every attempt ended with zero known final-key bits."""

    def __init__(self, attempts: int):
        super().__init__(
            f"no known final-key bit after {attempts} protocol attempts"
        )
        self.attempts = attempts


@dataclass(frozen=True)
class ProtocolConfig:
    """All public protocol parameters, with the arithmetic constraints.

    Attributes
    ----------
    theta : Theta
        Key-basis angle; a plain float in radians is accepted and wrapped.
    K : int
        Number of EPR pairs per protocol attempt.
    gamma : float
        Test fraction in (0, 1/2): gamma*K pairs go to entanglement
        verification and another gamma*K to the measurement-device tests.
    k : int
        XOR block length.
    N : int
        Database size; (1 - 2*gamma) * K must equal k * N exactly.
    eta : float
        Noise tolerance for both statistical tests.
    seed : int
        64-bit master seed (recorded in reports; streams derive from it).
    max_retries : int
        Attempt budget for :func:`run_with_retries`.
    error_threshold : float
        Abort threshold for the error-rate estimate (0 = any mismatch
        aborts; noiseless honest runs estimate exactly 0).
    """

    theta: Theta
    K: int
    gamma: float
    k: int
    N: int
    eta: float
    seed: int
    max_retries: int = 10
    error_threshold: float = 0.0

    def __post_init__(self) -> None:
        if not isinstance(self.theta, Theta):
            object.__setattr__(self, "theta", Theta(self.theta))
        if self.K < 1 or self.k < 1 or self.N < 1:
            raise ValueError("K, k and N must all be positive")
        if not 0.0 < self.gamma < 0.5:
            raise ValueError(f"gamma must lie in (0, 1/2), got {self.gamma!r}")
        if not 0.0 <= self.eta < IDEAL_WIN_RATE:
            raise ValueError(f"eta must lie in [0, cos^2(pi/8)), got {self.eta!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")
        if self.max_retries < 1:
            raise ValueError("max_retries must be at least 1")
        if not 0.0 <= self.error_threshold < 1.0:
            raise ValueError("error_threshold must lie in [0, 1)")
        gk = self.gamma * self.K
        if abs(gk - round(gk)) > 1e-9:
            raise ValueError(f"gamma*K must be an integer, got {gk!r}")
        if round(gk) % 2 != 0:
            raise ValueError(
                f"gamma*K must be even (each referee runs gamma*K/2 rounds), got {round(gk)}"
            )
        if self.K - 2 * round(gk) != self.k * self.N:
            raise ValueError(
                f"(1-2*gamma)*K != k*N: {self.K - 2 * round(gk)} != {self.k * self.N}"
            )

    @property
    def gamma_pairs(self) -> int:
        """Pairs consumed by each testing phase: gamma*K."""
        return round(self.gamma * self.K)

    @property
    def chsh_rounds(self) -> int:
        """CHSH rounds per referee: gamma*K/2."""
        return self.gamma_pairs // 2

    @property
    def di_rounds(self) -> int:
        """Sacrificed establishment rounds per device sub-test: gamma*K/2."""
        return self.gamma_pairs // 2

    @property
    def establishment_pairs(self) -> int:
        """Pairs measured in the key establishment phase: (1-gamma)*K."""
        return self.K - self.gamma_pairs

    @property
    def raw_key_len(self) -> int:
        """Surviving raw key bits: (1-2*gamma)*K = k*N."""
        return self.k * self.N


def _locked(arr, dtype=np.int8) -> np.ndarray:
    a = np.array(arr, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class KeyMaterial:
    """Key strings on both sides, raw and (once post-processed) final.

    ``bob_raw`` holds the server's raw key bits, ``alice_raw`` the
    client's decodes (0/1, or :data:`UNKNOWN` for inconclusive rounds),
    ``announcements`` the public per-round bit. The final fields are
    ``None`` until :func:`postprocess_keys` fills them.

    The constructor checks alphabets and lengths. It deliberately does
    not enforce that conclusive decodes match the server's bits: catching
    devices that violate that is the job of the conflict sub-test, and
    the honest-path tests assert :meth:`raw_disagreements` is zero.
    """

    bob_raw: np.ndarray
    alice_raw: np.ndarray
    announcements: np.ndarray
    bob_final: np.ndarray | None = None
    alice_final: np.ndarray | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "bob_raw", _locked(self.bob_raw))
        object.__setattr__(self, "alice_raw", _locked(self.alice_raw))
        object.__setattr__(self, "announcements", _locked(self.announcements))
        n = len(self.bob_raw)
        if len(self.alice_raw) != n or len(self.announcements) != n:
            raise ValueError("raw-key arrays must share one length")
        if not np.isin(self.bob_raw, (0, 1)).all():
            raise ValueError("bob_raw must be bits")
        if not np.isin(self.alice_raw, (0, 1, UNKNOWN)).all():
            raise ValueError("alice_raw must be bits or UNKNOWN")
        if not np.isin(self.announcements, (0, 1)).all():
            raise ValueError("announcements must be bits")
        if (self.bob_final is None) != (self.alice_final is None):
            raise ValueError("final keys must be set together")
        if self.bob_final is not None:
            object.__setattr__(self, "bob_final", _locked(self.bob_final))
            object.__setattr__(self, "alice_final", _locked(self.alice_final))
            if len(self.bob_final) != len(self.alice_final):
                raise ValueError("final keys must share one length")
            if not np.isin(self.bob_final, (0, 1)).all():
                raise ValueError("bob_final must be bits")
            if not np.isin(self.alice_final, (0, 1, UNKNOWN)).all():
                raise ValueError("alice_final must be bits or UNKNOWN")

    def known_raw_count(self) -> int:
        return int(np.count_nonzero(self.alice_raw != UNKNOWN))

    def known_final_count(self) -> int:
        if self.alice_final is None:
            raise ValueError("final keys not derived yet")
        return int(np.count_nonzero(self.alice_final != UNKNOWN))

    def raw_disagreements(self) -> int:
        """Conclusive client trits that contradict the server's bits."""
        known = self.alice_raw != UNKNOWN
        return int(np.count_nonzero(self.alice_raw[known] != self.bob_raw[known]))


@dataclass(frozen=True)
class Database:
    """The server's N-bit database."""

    bits: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "bits", _locked(self.bits))
        if not np.isin(self.bits, (0, 1)).all():
            raise ValueError("database entries must be bits")

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "Database":
        return cls(rng.integers(2, size=n))

    def __len__(self) -> int:
        return len(self.bits)


@dataclass(frozen=True)
class QueryOutcome:
    """Result of one private-query exchange."""

    requested_index: int
    used_key_index: int
    announced_shift: int
    retrieved_bit: int
    correct: bool


class Transcript:
    """Per-round protocol records, exportable as line-delimited JSON.

    Every record carries the same five keys in a fixed order —
    phase, index, inputs, announced, outcomes — so transcript files are
    byte-stable under a fixed (config, seed) and diff cleanly.
    """

    def __init__(self) -> None:
        self.records: list[dict] = []

    def add(self, phase: str, index: int, inputs: dict, announced: dict, outcomes: dict) -> None:
        self.records.append(
            {
                "phase": phase,
                "index": int(index),
                "inputs": _plain(inputs),
                "announced": _plain(announced),
                "outcomes": _plain(outcomes),
            }
        )

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r) + "\n" for r in self.records)

    def write(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_jsonl())

    def __len__(self) -> int:
        return len(self.records)


def _plain(value):
    """Recursively coerce numpy scalars/arrays into JSON-clean types."""
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    return value


# ---------------------------------------------------------------------------
# phase 2: entanglement verification
# ---------------------------------------------------------------------------


def run_verification(
    cfg: ProtocolConfig,
    rng: np.random.Generator,
    *,
    noise: float = 0.0,
    outcome_sampler=None,
    transcript: Transcript | None = None,
) -> tuple[ChshReport, ChshReport]:
    """Run both CHSH sub-tests (Alice referee, then Bob referee).

    Consumes gamma*K pairs. Raises :class:`ProtocolAbort` carrying the
    failing report as soon as either run falls below threshold.
    """
    reports = []
    for referee in ("Alice", "Bob"):
        on_round = None
        if transcript is not None:
            counter = iter(range(cfg.chsh_rounds))
            first = "Bob" if referee == "Alice" else "Alice"

            def on_round(r, _referee=referee, _counter=counter, _first=first):
                transcript.add(
                    phase="entanglement_verification",
                    index=next(_counter),
                    inputs={"u": r.u, "v": r.v, "referee": _referee},
                    announced={"first_announcer": _first, "b": r.b, "c": r.c},
                    outcomes={"win": r.win},
                )

        report = run_chsh_test(
            cfg.chsh_rounds,
            cfg.eta,
            referee,
            rng,
            noise=noise,
            outcome_sampler=outcome_sampler,
            on_round=on_round,
        )
        if report.aborted:
            raise ProtocolAbort(
                phase="entanglement_verification",
                kind="chsh",
                reason=(
                    f"referee {referee}: Z = {report.z_statistic:.4f} "
                    f"< threshold {report.threshold:.4f}"
                ),
                report=report,
            )
        reports.append(report)
    return tuple(reports)


# ---------------------------------------------------------------------------
# phase 3: key establishment
# ---------------------------------------------------------------------------


def run_key_establishment(
    cfg: ProtocolConfig,
    rng: np.random.Generator,
    *,
    alice_device: AliceDevice | None = None,
    transcript: Transcript | None = None,
) -> KeyMaterial:
    """Measure the (1-gamma)*K key pairs and decode announcements.

    Per pair: the server draws raw bit R uniformly, measures in
    ``key_basis(R)``, announces which candidate state the pair collapsed
    to, and the client measures the collapsed qubit with the POVM for the
    announced bit. Conclusive outcomes decode the raw bit exactly;
    inconclusive ones become :data:`UNKNOWN`.

    ``alice_device`` substitutes the client's measurement (dishonest or
    broken hardware); the honest path is vectorized and draws the same
    randomness regardless of transcript collection.
    """
    theta = cfg.theta
    n = cfg.establishment_pairs
    bases = (key_basis(0, theta), key_basis(1, theta))
    povms = (build_povm(0, theta), build_povm(1, theta))

    raw = rng.integers(2, size=n).astype(np.int8)
    bob_out = rng.integers(2, size=n).astype(np.int8)

    if alice_device is None:
        # Honest client: per-round outcome distributions depend only on
        # (raw bit, server outcome), so sample them in one vectorized pass.
        dists = np.empty((2, 2, 3))
        for r in (0, 1):
            for o in (0, 1):
                dists[r, o] = outcome_distribution(povms[o], bases[r].vector(o))
        u = rng.random(n)
        p0 = dists[raw, bob_out, 0]
        p1 = dists[raw, bob_out, 1]
        outcomes = np.where(u < p0, 0, np.where(u < p0 + p1, 1, 2)).astype(np.int8)
    else:
        outcomes = np.empty(n, dtype=np.int8)
        for i in range(n):
            collapsed = bases[raw[i]].vector(int(bob_out[i]))
            outcomes[i] = alice_device(int(bob_out[i]), collapsed, rng)

    trits = np.where(outcomes == 2, UNKNOWN, outcomes).astype(np.int8)

    if transcript is not None:
        for i in range(n):
            transcript.add(
                phase="key_establishment",
                index=i,
                inputs={"bob_basis": int(raw[i])},
                announced={"a": int(bob_out[i])},
                outcomes={"bob": int(bob_out[i]), "alice": int(outcomes[i])},
            )

    return KeyMaterial(bob_raw=raw, alice_raw=trits, announcements=bob_out)


# ---------------------------------------------------------------------------
# phase 4: measurement-device tests
# ---------------------------------------------------------------------------


def run_di_povm_tests(
    cfg: ProtocolConfig,
    material: KeyMaterial,
    rng: np.random.Generator,
    *,
    transcript: Transcript | None = None,
) -> KeyMaterial:
    """Sacrifice 2 * gamma*K/2 establishment rounds to test the client POVM.

    Sub-test 1 (conflict): on gamma*K/2 random rounds the server reveals
    his post-measurement state; any conclusive decode that contradicts it
    aborts immediately — honest devices never produce one.

    Sub-test 2 (rate): on another gamma*K/2 random rounds the conclusive
    count P must reach (1 - cos(theta) - eta) * gamma*K/2.

    Returns the surviving k*N rounds, in their original order, as the raw
    key material. The two abort causes stay distinguishable through
    :class:`ProtocolAbort.kind` ("conflict" vs "rate").
    """
    n = len(material.bob_raw)
    if n != cfg.establishment_pairs:
        raise ValueError(
            f"material holds {n} rounds, config expects {cfg.establishment_pairs}"
        )
    m = cfg.di_rounds
    order = rng.permutation(n)
    conflict_rounds = np.sort(order[:m])
    rate_rounds = np.sort(order[m : 2 * m])
    keep = np.sort(order[2 * m :])

    for i, idx in enumerate(conflict_rounds):
        idx = int(idx)
        trit = int(material.alice_raw[idx])
        revealed_basis = int(material.bob_raw[idx])
        revealed_outcome = int(material.announcements[idx])
        if transcript is not None:
            transcript.add(
                phase="di_test_conflict",
                index=i,
                inputs={"round": idx},
                announced={
                    "revealed_basis": revealed_basis,
                    "revealed_outcome": revealed_outcome,
                },
                outcomes={"alice": trit},
            )
        if trit != UNKNOWN and trit != revealed_basis:
            raise ProtocolAbort(
                phase="di_povm_test",
                kind="conflict",
                reason=(
                    f"round {idx}: conclusive decode {trit} contradicts revealed "
                    f"state (basis {revealed_basis}, outcome {revealed_outcome})"
                ),
            )

    conclusive = int(np.count_nonzero(material.alice_raw[rate_rounds] != UNKNOWN))
    required = (1.0 - cfg.theta.cos - cfg.eta) * m
    if transcript is not None:
        transcript.add(
            phase="di_test_rate",
            index=0,
            inputs={"rounds": [int(x) for x in rate_rounds]},
            announced={"conclusive_count": conclusive},
            outcomes={"required": required, "passed": bool(conclusive >= required)},
        )
    if conclusive < required:
        raise ProtocolAbort(
            phase="di_povm_test",
            kind="rate",
            reason=f"conclusive count {conclusive} below required {required:.2f} of {m}",
        )

    surviving = KeyMaterial(
        bob_raw=material.bob_raw[keep],
        alice_raw=material.alice_raw[keep],
        announcements=material.announcements[keep],
    )
    assert len(surviving.bob_raw) == cfg.raw_key_len
    return surviving


def estimate_error_rate(material: KeyMaterial) -> float:
    """Mismatch fraction among the client's conclusive raw trits.

    Stands in for a full error-correction exchange: honest noiseless runs
    estimate exactly 0.0, injected noise shows up as a positive rate.
    """
    known = int(np.count_nonzero(material.alice_raw != UNKNOWN))
    if known == 0:
        return 0.0
    return material.raw_disagreements() / known


def check_error_rate(cfg: ProtocolConfig, material: KeyMaterial) -> float:
    """Apply the configured abort threshold to the error-rate estimate."""
    rate = estimate_error_rate(material)
    if rate > cfg.error_threshold:
        raise ProtocolAbort(
            phase="error_estimation",
            kind="error_rate",
            reason=f"estimated error rate {rate:.4f} exceeds threshold {cfg.error_threshold}",
        )
    return rate


# ---------------------------------------------------------------------------
# phase 5 prep: post-processing to final keys
# ---------------------------------------------------------------------------


def postprocess_keys(
    material: KeyMaterial,
    s0: int,
    perm: Sequence[int] | np.ndarray,
    k: int,
    N: int,
) -> KeyMaterial:
    """Shift, permute, and XOR-compress the raw keys into final keys.

    Both raw strings are cyclically left-shifted by ``s0``, reordered so
    position ``t`` takes the shifted bit at ``perm[t]``, and cut into N
    consecutive blocks of k. Each server final bit is the XOR of its
    block; a client final trit is the XOR when all k trits in the block
    are known and :data:`UNKNOWN` otherwise.

    Deterministic and bit-exact: identical inputs give identical finals.
    """
    kn = len(material.bob_raw)
    if kn != k * N:
        raise ValueError(f"raw key length {kn} != k*N = {k * N}")
    perm = np.asarray(perm, dtype=np.int64)
    if perm.shape != (kn,) or not np.array_equal(np.sort(perm), np.arange(kn)):
        raise ValueError("perm must be a bijection on the raw-key positions")

    def rearrange(arr):
        return np.roll(arr, -int(s0))[perm]

    bob = rearrange(material.bob_raw).reshape(N, k)
    bob_final = np.bitwise_xor.reduce(bob, axis=1)

    alice = rearrange(material.alice_raw).reshape(N, k)
    known = np.all(alice != UNKNOWN, axis=1)
    xors = np.bitwise_xor.reduce(np.where(alice == UNKNOWN, 0, alice), axis=1)
    alice_final = np.where(known, xors, UNKNOWN)

    return replace(material, bob_final=bob_final, alice_final=alice_final)


# ---------------------------------------------------------------------------
# full pipeline
# ---------------------------------------------------------------------------


def run_protocol_once(
    cfg: ProtocolConfig,
    rng: np.random.Generator,
    *,
    noise: float = 0.0,
    alice_device: AliceDevice | None = None,
    transcript: Transcript | None = None,
) -> KeyMaterial:
    """One full attempt: verification, establishment, device tests, keys."""
    run_verification(cfg, rng, noise=noise, transcript=transcript)
    material = run_key_establishment(
        cfg, rng, alice_device=alice_device, transcript=transcript
    )
    material = run_di_povm_tests(cfg, material, rng, transcript=transcript)
    check_error_rate(cfg, material)

    s0 = int(rng.integers(cfg.raw_key_len))
    perm = rng.permutation(cfg.raw_key_len)
    final = postprocess_keys(material, s0, perm, cfg.k, cfg.N)
    if transcript is not None:
        transcript.add(
            phase="post_processing",
            index=0,
            inputs={"k": cfg.k, "N": cfg.N},
            announced={"s0": s0, "perm": [int(p) for p in perm]},
            outcomes={"alice_known_final_bits": final.known_final_count()},
        )
    return final


def run_with_retries(
    cfg: ProtocolConfig,
    rng: np.random.Generator,
    *,
    noise: float = 0.0,
    transcript: Transcript | None = None,
) -> KeyMaterial:
    """Repeat full attempts (fresh pairs each time) until the client knows
    at least one final-key bit, or the retry budget runs out.

    The expected known-bit count per attempt is N * (1 - cos(theta))^k, so
    for sane parameters the first attempt almost always suffices.

    Raises
    ------
    RetriesExhausted
        After ``cfg.max_retries`` attempts with zero known bits.
    ProtocolAbort
        Propagated from any phase (device trouble is not retried).
    """
    for _attempt in range(cfg.max_retries):
        material = run_protocol_once(cfg, rng, noise=noise, transcript=transcript)
        if material.known_final_count() >= 1:
            return material
    raise RetriesExhausted(cfg.max_retries)


# ---------------------------------------------------------------------------
# phase 5: the query exchange
# ---------------------------------------------------------------------------


def answer_query(
    bob_final: np.ndarray,
    alice_final: np.ndarray,
    database: Database,
    j: int,
    rng: np.random.Generator,
    *,
    transcript: Transcript | None = None,
) -> QueryOutcome:
    """Run the one-time-pad exchange for database index ``j``.

    The client picks a known final-key position i uniformly at random,
    announces the shift s = i - j (mod N); the server encrypts entry t
    with key bit (t + s) mod N, so entry j lands exactly on the client's
    known bit i and nothing else decodes.
    """
    bob_final = np.asarray(bob_final, dtype=np.int8)
    alice_final = np.asarray(alice_final, dtype=np.int8)
    n = len(database)
    if len(bob_final) != n or len(alice_final) != n:
        raise ValueError("final keys and database must share one length")
    if not 0 <= j < n:
        raise ValueError(f"query index {j} outside [0, {n})")
    known = np.flatnonzero(alice_final != UNKNOWN)
    if len(known) == 0:
        raise ValueError("client knows no final-key bit; cannot query")

    i = int(known[rng.integers(len(known))])
    s = (i - j) % n
    ciphertext = database.bits ^ np.roll(bob_final, -s)
    retrieved = int(ciphertext[j] ^ alice_final[i])
    correct = retrieved == int(database.bits[j])
    if transcript is not None:
        transcript.add(
            phase="private_query",
            index=0,
            inputs={"requested_index": int(j), "used_key_index": i},
            announced={"shift": s, "ciphertext": [int(b) for b in ciphertext]},
            outcomes={"retrieved_bit": retrieved, "correct": bool(correct)},
        )
    return QueryOutcome(
        requested_index=int(j),
        used_key_index=i,
        announced_shift=s,
        retrieved_bit=retrieved,
        correct=bool(correct),
    )


def multi_query(
    cfg: ProtocolConfig,
    database: Database,
    indices: Sequence[int],
    rng: np.random.Generator,
    *,
    transcript: Transcript | None = None,
) -> list[QueryOutcome]:
    """Answer several queries, running the full protocol afresh per index."""
    if len(database) != cfg.N:
        raise ValueError(f"database holds {len(database)} bits, config expects {cfg.N}")
    outcomes = []
    for j in indices:
        material = run_with_retries(cfg, rng, transcript=transcript)
        outcomes.append(
            answer_query(
                material.bob_final, material.alice_final, database, j, rng,
                transcript=transcript,
            )
        )
    return outcomes


# ---------------------------------------------------------------------------
# string helpers (goldens, CLI display)
# ---------------------------------------------------------------------------


def bits_to_str(arr) -> str:
    """Render a bit array as a compact 0/1 string."""
    return "".join(str(int(b)) for b in arr)


def trits_to_str(arr) -> str:
    """Render a trit array as 0/1 with '?' for unknown positions."""
    return "".join("?" if int(t) == UNKNOWN else str(int(t)) for t in arr)


def str_to_bits(s: str) -> np.ndarray:
    """Parse a 0/1 string (whitespace ignored) into a bit array."""
    return np.array([int(ch) for ch in s if not ch.isspace()], dtype=np.int8)


def str_to_trits(s: str) -> np.ndarray:
    """Parse a 0/1/? string (whitespace ignored) into a trit array."""
    return np.array(
        [UNKNOWN if ch == "?" else int(ch) for ch in s if not ch.isspace()],
        dtype=np.int8,
    )
