"""Exact complex 2x2 linear algebra for qubit states and operators.

Everything downstream (measurement bases, POVMs, the protocol phases, the
attack simulations) works with single-qubit pure states and 2x2 Hermitian
operators, so this module deliberately stops at dimension two: eigenvalues
come from the closed-form quadratic rather than an iterative solver, which
keeps results exact, deterministic and cheap.

Operators are plain ``numpy`` arrays of shape (2, 2); validation helpers
(:func:`require_hermitian`, :func:`require_density`) take the place of
operator wrapper classes.  Pure states get a small container class because
normalization is an invariant worth enforcing at construction time.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

# Tolerances: structural checks (Hermiticity, normalization, PSD) are exact
# up to floating-point dust; derived numerics get a looser bound.
STRUCT_TOL = 1e-12
NUMERIC_TOL = 1e-10

# A complex scalar is just Python's builtin complex.
ComplexScalar = complex


@dataclass(frozen=True)
class PureState:
    """A normalized single-qubit pure state.

    Parameters
    ----------
    amp0, amp1 : complex
        Amplitudes on the computational basis states. The squared
        magnitudes must sum to 1 within ``1e-12``.
    """

    amp0: complex
    amp1: complex

    def __post_init__(self) -> None:
        for amp in (self.amp0, self.amp1):
            if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
                raise ValueError("pure state amplitudes must be finite")
        norm_sq = abs(self.amp0) ** 2 + abs(self.amp1) ** 2
        if abs(norm_sq - 1.0) > STRUCT_TOL:
            raise ValueError(
                f"pure state is not normalized: |amp0|^2 + |amp1|^2 = {norm_sq!r}"
            )

    @classmethod
    def from_vector(cls, vec) -> "PureState":
        """Build a state from any length-2 sequence of amplitudes."""
        v = np.asarray(vec, dtype=complex).reshape(2)
        return cls(complex(v[0]), complex(v[1]))

    @property
    def vector(self) -> np.ndarray:
        """The state as a length-2 complex ndarray."""
        return np.array([self.amp0, self.amp1], dtype=complex)

    @property
    def is_real(self) -> bool:
        """True when both amplitudes are real within 1e-12."""
        return max(abs(self.amp0.imag), abs(self.amp1.imag)) <= STRUCT_TOL

    def projector(self) -> np.ndarray:
        """Rank-1 density operator |psi><psi| as a 2x2 ndarray."""
        v = self.vector
        return np.outer(v, v.conj())


def require_hermitian(op: np.ndarray, *, what: str = "operator") -> np.ndarray:
    """Validate that ``op`` is a finite Hermitian 2x2 matrix.

    Returns the array (as ``complex`` dtype) so calls can be chained.
    Raises ``ValueError`` on violation — the "contract violation signal"
    used throughout this package.
    """
    a = np.asarray(op, dtype=complex)
    if a.shape != (2, 2):
        raise ValueError(f"{what} must be 2x2, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(float))):
        raise ValueError(f"{what} has non-finite entries")
    if np.max(np.abs(a - a.conj().T)) > STRUCT_TOL:
        raise ValueError(f"{what} is not Hermitian within {STRUCT_TOL}")
    return a


def require_density(op: np.ndarray, *, what: str = "density operator") -> np.ndarray:
    """Validate Hermiticity, unit trace and positive semidefiniteness."""
    a = require_hermitian(op, what=what)
    tr = a[0, 0].real + a[1, 1].real
    if abs(tr - 1.0) > STRUCT_TOL:
        raise ValueError(f"{what} has trace {tr!r}, expected 1")
    lo, _ = eigenvalues_hermitian(a)
    if lo < -STRUCT_TOL:
        raise ValueError(f"{what} is not PSD: min eigenvalue {lo!r}")
    return a


def eigenvalues_hermitian(op: np.ndarray) -> tuple[float, float]:
    """Eigenvalues of a Hermitian 2x2 matrix, sorted ascending.

    Uses the closed-form roots of the characteristic quadratic:
    for [[a, b], [conj(b), d]] they are (a+d)/2 -/+ sqrt(((a-d)/2)^2 + |b|^2).

    Parameters
    ----------
    op : ndarray
        Hermitian 2x2 matrix (validated; ``ValueError`` otherwise).

    Returns
    -------
    (float, float)
        The two real eigenvalues, smallest first.
    """
    a = require_hermitian(op)
    m00 = a[0, 0].real
    m11 = a[1, 1].real
    mean = 0.5 * (m00 + m11)
    radius = math.hypot(0.5 * (m00 - m11), abs(a[0, 1]))
    return (mean - radius, mean + radius)


def eigensystem_hermitian(op: np.ndarray) -> tuple[tuple[float, float], tuple[PureState, PureState]]:
    """Eigenvalues (ascending) and matching orthonormal eigenvectors.

    Closed form for the 2x2 Hermitian case. For ``b != 0`` the eigenvector
    of eigenvalue ``lam`` is ``(b, lam - a)`` up to normalization; for a
    diagonal matrix the computational basis is returned in eigenvalue order.
    """
    a = require_hermitian(op)
    lo, hi = eigenvalues_hermitian(a)
    b = a[0, 1]
    if abs(b) <= STRUCT_TOL:
        if a[0, 0].real <= a[1, 1].real:
            vecs = (PureState(1, 0), PureState(0, 1))
        else:
            vecs = (PureState(0, 1), PureState(1, 0))
        return (lo, hi), vecs

    def unit_eigvec(lam: float) -> PureState:
        v0, v1 = b, complex(lam - a[0, 0].real)
        scale = 1.0 / math.hypot(abs(v0), abs(v1))
        return PureState(v0 * scale, v1 * scale)

    return (lo, hi), (unit_eigvec(lo), unit_eigvec(hi))


def trace_norm(op: np.ndarray) -> float:
    """Trace norm Tr|M| of a Hermitian 2x2 matrix: sum of |eigenvalues|.

    Note the protocol literature sometimes folds a factor 1/2 into the
    trace distance; this function returns the raw norm and callers apply
    any factors explicitly.
    """
    lo, hi = eigenvalues_hermitian(op)
    return abs(lo) + abs(hi)


def fidelity_pure(a: PureState, b: PureState) -> float:
    """Fidelity |<a|b>|^2 between two pure states, clamped to [0, 1]."""
    overlap = np.vdot(a.vector, b.vector)
    f = abs(overlap) ** 2
    return min(max(f, 0.0), 1.0)


def helstrom_guess_probability(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Optimal success probability for distinguishing two equiprobable states.

    Returns ``1/2 * (1 + 1/2 * Tr|rho - sigma|)``, the two-state
    discrimination optimum. Both inputs must be valid density operators.
    """
    r = require_density(rho, what="rho")
    s = require_density(sigma, what="sigma")
    return 0.5 * (1.0 + 0.5 * trace_norm(r - s))


def helstrom_measurement(rho: np.ndarray, sigma: np.ndarray) -> tuple[PureState, PureState]:
    """The two-outcome measurement achieving the optimal guess probability.

    Measures in the eigenbasis of ``rho - sigma``. Outcome on the
    positive-eigenvalue vector (returned first) means "guess rho"; the
    negative-eigenvalue vector (second) means "guess sigma".

    Raises
    ------
    ValueError
        If ``rho`` and ``sigma`` coincide (degenerate input: the difference
        has no eigenbasis that helps, and no measurement beats coin
        flipping).
    """
    r = require_density(rho, what="rho")
    s = require_density(sigma, what="sigma")
    diff = r - s
    if trace_norm(diff) <= STRUCT_TOL:
        raise ValueError("degenerate input: rho == sigma, no distinguishing basis")
    _, (v_minus, v_plus) = eigensystem_hermitian(diff)
    return v_plus, v_minus


def random_pure_state(rng: np.random.Generator, *, real: bool = False) -> PureState:
    """A Haar-ish random pure state for property tests.

    With ``real=True`` the state is drawn uniformly on the real unit circle
    (the family this protocol actually uses).
    """
    if real:
        phi = rng.uniform(0.0, 2.0 * math.pi)
        return PureState(math.cos(phi), math.sin(phi))
    raw = rng.normal(size=4)
    z = np.array([raw[0] + 1j * raw[1], raw[2] + 1j * raw[3]])
    z /= np.linalg.norm(z)
    # strip the global phase so amp0 is real-positive (no physical effect)
    phase = cmath.exp(-1j * cmath.phase(z[0])) if abs(z[0]) > 1e-9 else 1.0
    z *= phase
    z /= np.linalg.norm(z)
    return PureState.from_vector(z)
