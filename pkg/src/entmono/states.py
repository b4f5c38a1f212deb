"""Tripartite pure states, reduced density matrices and Haar sampling.

All states live on H_A (x) H_B (x) H_C with amplitudes stored row-major over
the product basis |abc>, i.e. index i = a*dB*dC + b*dC + c.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

# Dense vectors only; anything bigger belongs to a different tool.
MAX_TOTAL_DIM = 4096

# Inputs with a norm further from 1 than this are rejected rather than
# silently rescaled; closer ones are renormalized (decimal truncation in
# hand-written files is common).
NORM_REJECT_TOL = 1e-6
# Renormalizations larger than this are flagged on the state.
NORM_WARN_TOL = 1e-9


class StateError(ValueError):
    """Invalid state data (dimensions, normalization, file format)."""


@dataclass(frozen=True)
class PureTripartiteState:
    """Normalized pure state of a tripartite system.

    Attributes
    ----------
    dims : (dA, dB, dC)
    amps : complex vector of length dA*dB*dC, unit norm
    renorm_warning : True if construction had to rescale the input by more
        than ``NORM_WARN_TOL``.
    """

    dims: tuple[int, int, int]
    amps: np.ndarray
    renorm_warning: bool = field(default=False, compare=False)

    def __post_init__(self):
        self.amps.setflags(write=False)

    @property
    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to (dA, dB, dC)."""
        return self.amps.reshape(self.dims)

    def reduced(self, keep: str) -> "DensityMatrix":
        return reduced_density(self, keep)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, PSD, unit-trace matrix on a (reduced) subsystem."""

    mat: np.ndarray

    def __post_init__(self):
        m = self.mat
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise StateError(f"density matrix must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > 1e-10:
            raise StateError("density matrix is not Hermitian within 1e-10")
        if abs(np.trace(m).real - 1.0) > 1e-10 or abs(np.trace(m).imag) > 1e-10:
            raise StateError("density matrix trace differs from 1 by more than 1e-10")
        m.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def validate(self):
        """Full invariant check including positivity (costs an eigh)."""
        w = np.linalg.eigvalsh(self.mat)
        if w[0] < -1e-10:
            raise StateError(f"density matrix has eigenvalue {w[0]} < -1e-10")
        return self


@dataclass(frozen=True)
class SchmidtParams:
    """Five-parameter canonical form of a three-qubit pure state.

    lambda0..lambda4 are non-negative with squares summing to 1; phi is the
    phase carried by the |100> term.
    """

    lambdas: tuple[float, float, float, float, float]
    phi: float = 0.0

    def __post_init__(self):
        if len(self.lambdas) != 5:
            raise StateError("need exactly five Schmidt coefficients")
        if any(l < 0 for l in self.lambdas):
            raise StateError("Schmidt coefficients must be non-negative")
        s = sum(l * l for l in self.lambdas)
        if abs(s - 1.0) > 1e-9:
            raise StateError(f"Schmidt coefficients have squared sum {s}, not 1")


def _check_dims(dims):
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3 or any(d < 1 for d in dims):
        raise StateError(f"dims must be three positive integers, got {dims}")
    total = dims[0] * dims[1] * dims[2]
    if total > MAX_TOTAL_DIM:
        raise StateError(f"total dimension {total} exceeds limit {MAX_TOTAL_DIM}")
    return dims


def pure_state_new(dims, amplitudes) -> PureTripartiteState:
    """Build a state from raw amplitudes, renormalizing small deviations.

    Rejects vectors whose norm is outside [1 - 1e-6, 1 + 1e-6] (all-zero
    included); flags the state when the rescaling exceeded 1e-9.
    """
    dims = _check_dims(dims)
    amps = np.asarray(amplitudes, dtype=complex).ravel().copy()
    total = dims[0] * dims[1] * dims[2]
    if amps.size != total:
        raise StateError(f"amplitude vector has length {amps.size}, dims need {total}")
    norm = float(np.linalg.norm(amps))
    if norm == 0.0:
        raise StateError("all-zero amplitude vector")
    if abs(norm - 1.0) > NORM_REJECT_TOL:
        raise StateError(f"norm {norm} deviates from 1 by more than {NORM_REJECT_TOL}")
    return PureTripartiteState(dims, amps / norm, abs(norm - 1.0) > NORM_WARN_TOL)


def _exact_state(dims, amps) -> PureTripartiteState:
    """Internal constructor for vectors that are unit-norm by construction."""
    amps = np.asarray(amps, dtype=complex).ravel()
    return PureTripartiteState(tuple(dims), amps / np.linalg.norm(amps))


def from_schmidt(p: SchmidtParams) -> PureTripartiteState:
    """Three-qubit state in generalized Schmidt form.

    Amplitudes: l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>.
    """
    l0, l1, l2, l3, l4 = p.lambdas
    amps = np.zeros(8, dtype=complex)
    amps[0] = l0
    amps[4] = l1 * np.exp(1j * p.phi)
    amps[5] = l2
    amps[6] = l3
    amps[7] = l4
    return _exact_state((2, 2, 2), amps)


def w_class(b0, b1, b2, b3) -> PureTripartiteState:
    """W-class state b0|000> + b1|100> + b2|010> + b3|001>."""
    b = np.asarray([b0, b1, b2, b3], dtype=complex)
    s = float(np.sum(np.abs(b) ** 2))
    if abs(s - 1.0) > 1e-9:
        raise StateError(f"W-class coefficients have squared sum {s}, not 1")
    amps = np.zeros(8, dtype=complex)
    amps[0], amps[4], amps[2], amps[1] = b
    return _exact_state((2, 2, 2), amps)


def ghz() -> PureTripartiteState:
    """Three-qubit GHZ state (|000> + |111>)/sqrt(2)."""
    amps = np.zeros(8, dtype=complex)
    amps[0] = amps[7] = 1.0
    return _exact_state((2, 2, 2), amps)


def w_state() -> PureTripartiteState:
    """Symmetric W state (|100> + |010> + |001>)/sqrt(3)."""
    return w_class(0.0, 1 / math.sqrt(3), 1 / math.sqrt(3), 1 / math.sqrt(3))


def example_223() -> PureTripartiteState:
    """The 2x2x3 state (|000> + |111> + |phi+>|2>)/sqrt(3).

    Nonzero amplitudes: 1/sqrt(3) at |000>, |111>; 1/sqrt(6) at |012>, |102>.
    Its assistance triple is the canonical non-monogamy witness.
    """
    amps = np.zeros(12, dtype=complex)
    s3, s6 = 1 / math.sqrt(3), 1 / math.sqrt(6)
    amps[0 * 6 + 0 * 3 + 0] = s3  # |000>
    amps[1 * 6 + 1 * 3 + 1] = s3  # |111>
    amps[0 * 6 + 1 * 3 + 2] = s6  # |012>
    amps[1 * 6 + 0 * 3 + 2] = s6  # |102>
    return _exact_state((2, 2, 3), amps)


def antisymmetric_qutrit() -> PureTripartiteState:
    """Purification of the totally antisymmetric two-qutrit state.

    (1/sqrt(6)) sum_sigma sign(sigma) |sigma(0) sigma(1) sigma(2)> over all
    six permutations of {0,1,2}.
    """
    from itertools import permutations

    amps = np.zeros(27, dtype=complex)
    for perm in permutations(range(3)):
        # parity of a 3-permutation
        inv = sum(1 for i in range(3) for j in range(i + 1, 3) if perm[i] > perm[j])
        sign = -1.0 if inv % 2 else 1.0
        a, b, c = perm
        amps[a * 9 + b * 3 + c] = sign
    return _exact_state((3, 3, 3), amps)


def haar_random(dims, rng_seed) -> PureTripartiteState:
    """Haar-random pure state: normalized i.i.d. complex Gaussian vector.

    Deterministic for a fixed seed; ``rng_seed`` may be an int or a
    numpy SeedSequence.
    """
    dims = _check_dims(dims)
    total = dims[0] * dims[1] * dims[2]
    seq = rng_seed if isinstance(rng_seed, np.random.SeedSequence) else np.random.SeedSequence(rng_seed)
    rng = np.random.Generator(np.random.PCG64(seq))
    raw = rng.standard_normal(2 * total)
    amps = raw[:total] + 1j * raw[total:]
    return _exact_state(dims, amps)


_AXIS = {"A": 0, "B": 1, "C": 2}


def reduced_density(state: PureTripartiteState, keep) -> DensityMatrix:
    """Partial trace of |psi><psi| keeping the named subsystems.

    ``keep`` is a string or iterable over {A, B, C}; the kept factors stay
    in A,B,C order regardless of the order given.
    """
    labels = [k.upper() for k in keep]
    if not labels or len(set(labels)) != len(labels) or any(k not in _AXIS for k in labels):
        raise StateError(f"keep must name distinct subsystems among A,B,C, got {keep!r}")
    keep_axes = sorted(_AXIS[k] for k in labels)
    t = state.tensor
    trace_axes = [ax for ax in range(3) if ax not in keep_axes]
    # move kept axes to the front, flatten kept and traced groups
    perm = keep_axes + trace_axes
    m = np.transpose(t, perm)
    dk = int(np.prod([state.dims[ax] for ax in keep_axes]))
    dt = int(np.prod([state.dims[ax] for ax in trace_axes])) if trace_axes else 1
    m = m.reshape(dk, dt)
    rho = m @ m.conj().T
    rho = (rho + rho.conj().T) / 2.0
    return DensityMatrix(rho)


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2), in [1/dim, 1] up to round-off."""
    return float(np.real(np.trace(rho.mat @ rho.mat)))


# --- state file I/O ---------------------------------------------------------


def load_state(path) -> PureTripartiteState:
    """Read a state file: {"dims": [dA,dB,dC], "amps": [[re,im], ...]}."""
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise StateError(f"{path}: not valid JSON ({exc})") from exc
    try:
        dims = doc["dims"]
        pairs = doc["amps"]
        amps = np.array([complex(re, im) for re, im in pairs])
    except (KeyError, TypeError, ValueError) as exc:
        raise StateError(f"{path}: malformed state document ({exc})") from exc
    return pure_state_new(dims, amps)


def save_state(state: PureTripartiteState, path):
    """Write a state file with full double precision (>= 15 significant digits)."""
    doc = {
        "dims": list(state.dims),
        "amps": [[float(z.real), float(z.imag)] for z in state.amps],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")
