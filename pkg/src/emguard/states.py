"""State constructors and measurement utilities for multi-qudit systems.

Index convention (fixed package-wide): basis strings are big-endian, the
first subsystem is the most significant digit of the flat amplitude index.
``np.kron`` and C-order ``reshape`` both follow this convention, so states
built here compose directly with the kernel in :mod:`emguard.linalg`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import linalg

NORM_TOL = 1e-10
DEFAULT_SIZE_CAP = 2**20
SIZE_CAP_ENV = "EMGUARD_SIZE_CAP"


def size_cap() -> int:
    """Maximum allowed statevector length (env ``EMGUARD_SIZE_CAP`` overrides)."""
    raw = os.environ.get(SIZE_CAP_ENV)
    return int(raw) if raw else DEFAULT_SIZE_CAP


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over a tensor product of subsystems.

    ``dims`` lists the subsystem dimensions (each >= 2); ``amplitudes`` has
    length ``prod(dims)`` and unit 2-norm unless ``unnormalized`` is set.
    Instances are immutable; the amplitude array is a read-only copy.
    """

    dims: tuple[int, ...]
    amplitudes: np.ndarray
    unnormalized: bool = False

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 2 for d in dims):
            raise ValueError(f"every subsystem dimension must be >= 2, got {dims}")
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 1:
            raise ValueError("amplitudes must be a 1-D sequence")
        side = int(np.prod(dims))
        if amps.shape[0] != side:
            raise ValueError(
                f"amplitude length {amps.shape[0]} != product of dims {side}"
            )
        if side > size_cap():
            raise ValueError(f"statevector length {side} exceeds size cap {size_cap()}")
        if not np.isfinite(amps).all():
            raise ValueError("amplitudes must be finite")
        if not self.unnormalized:
            nrm = float(np.linalg.norm(amps))
            if abs(nrm - 1.0) > NORM_TOL:
                raise ValueError(f"state norm {nrm} is not 1 within {NORM_TOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probabilities of computational-basis strings for one measurement."""

    dims: tuple[int, ...]
    probabilities: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        p = np.array(self.probabilities, dtype=float)
        if p.shape[0] != int(np.prod(dims)):
            raise ValueError("probability length must match product of dims")
        if p.min(initial=0.0) < -1e-12 or p.max(initial=0.0) > 1 + 1e-12:
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(p.sum() - 1.0) > 1e-10:
            raise ValueError(f"probabilities sum to {p.sum()}, not 1")
        p = np.clip(p, 0.0, 1.0)
        p.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "probabilities", p)


def index_to_digits(index: int, dims) -> tuple[int, ...]:
    """Flat amplitude index -> big-endian basis string."""
    return tuple(int(x) for x in np.unravel_index(index, tuple(dims)))


def digits_to_index(digits, dims) -> int:
    """Big-endian basis string -> flat amplitude index."""
    return int(np.ravel_multi_index(tuple(digits), tuple(dims)))


def tensor(*states: StateVector) -> StateVector:
    """Tensor product of states, subsystems concatenated in argument order."""
    if not states:
        raise ValueError("tensor needs at least one state")
    amps = states[0].amplitudes
    dims: tuple[int, ...] = states[0].dims
    for s in states[1:]:
        amps = np.kron(amps, s.amplitudes)
        dims = dims + s.dims
    return StateVector(dims, amps, unnormalized=any(s.unnormalized for s in states))


def basis_state(d: int, k: int) -> StateVector:
    """Computational basis state |k> of a single d-level system."""
    if not 0 <= k < d:
        raise ValueError(f"label {k} out of range for dimension {d}")
    amps = np.zeros(d, dtype=complex)
    amps[k] = 1.0
    return StateVector((d,), amps)


def qft_matrix(d: int) -> np.ndarray:
    """Quantum Fourier transform on one d-level system.

    Entry ``[r, k]`` is ``zeta**(k*r) / sqrt(d)`` with ``zeta = exp(2*pi*i/d)``;
    exponents are reduced mod d before exponentiating to keep the matrix
    unitary to full double precision.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    idx = np.arange(d)
    expo = np.outer(idx, idx) % d
    return np.exp(2j * np.pi * expo / d) / np.sqrt(d)


def bell_state(b: int, sign: int) -> StateVector:
    """Two-qubit state ``(|0 b> + sign |1 (1-b)>) / sqrt(2)``."""
    if b not in (0, 1):
        raise ValueError("b must be 0 or 1")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    amps = np.zeros(4, dtype=complex)
    amps[digits_to_index((0, b), (2, 2))] = 1.0
    amps[digits_to_index((1, 1 - b), (2, 2))] = float(sign)
    return StateVector((2, 2), amps / np.sqrt(2.0))


def ghz_state(d: int, n: int) -> StateVector:
    """d-level n-particle GHZ state: amplitude 1/sqrt(d) on each |j,...,j>."""
    if d < 2 or n < 2:
        raise ValueError("need d >= 2 and n >= 2")
    dims = (d,) * n
    side = d**n
    if side > size_cap():
        raise ValueError(f"statevector length {side} exceeds size cap {size_cap()}")
    amps = np.zeros(side, dtype=complex)
    for j in range(d):
        amps[digits_to_index((j,) * n, dims)] = 1.0
    return StateVector(dims, amps / np.sqrt(d))


def apply_to_wires(u: np.ndarray, psi: StateVector, wires) -> StateVector:
    """Apply an operator to a subset of subsystems.

    ``u`` must be square with side equal to the product of the targeted
    subsystem dimensions, ordered as in ``wires``.
    """
    wires = tuple(int(w) for w in wires)
    n = len(psi.dims)
    if len(set(wires)) != len(wires) or any(w < 0 or w >= n for w in wires):
        raise ValueError(f"bad wire set {wires} for {n} subsystems")
    u = np.asarray(u, dtype=complex)
    tgt = int(np.prod([psi.dims[w] for w in wires]))
    if u.shape != (tgt, tgt):
        raise ValueError(f"operator shape {u.shape} does not match target side {tgt}")
    arr = psi.amplitudes.reshape(psi.dims)
    arr = np.moveaxis(arr, wires, range(len(wires)))
    rest = arr.shape[len(wires):]
    out = u @ arr.reshape(tgt, -1)
    out = np.moveaxis(out.reshape(tuple(psi.dims[w] for w in wires) + rest),
                      range(len(wires)), wires)
    return StateVector(psi.dims, out.reshape(-1), unnormalized=psi.unnormalized)


def ghz_fourier(d: int, n: int) -> StateVector:
    """GHZ state with the Fourier transform applied to every particle.

    Computed numerically; the result is supported exactly on the strings
    whose digit sum is 0 mod d, each with amplitude ``d**((1-n)/2)``.
    """
    psi = ghz_state(d, n)
    f = qft_matrix(d)
    for w in range(n):
        psi = apply_to_wires(f, psi, (w,))
    return psi


def outcome_distribution(psi: StateVector) -> OutcomeDistribution:
    """Exact computational-basis measurement distribution of a state."""
    nrm = psi.norm()
    if abs(nrm - 1.0) > 1e-8:
        raise ValueError(f"state norm {nrm} deviates from 1 beyond 1e-8")
    p = np.abs(psi.amplitudes) ** 2
    return OutcomeDistribution(psi.dims, p / p.sum())


def sample_outcome(psi: StateVector, rng: np.random.Generator) -> tuple[int, ...]:
    """Sample one basis string with probability |amplitude|^2."""
    dist = outcome_distribution(psi)
    cum = np.cumsum(dist.probabilities)
    idx = int(np.searchsorted(cum, rng.random(), side="right"))
    idx = min(idx, dist.probabilities.shape[0] - 1)
    return index_to_digits(idx, psi.dims)
