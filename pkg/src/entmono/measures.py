"""Entanglement measures evaluated on tripartite pure states.

Each measure produces a triple (E_{A|BC}, E_{AB}, E_{AC}); the two-qubit
kernels are the standard spin-flip spectral closed forms.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .states import DensityMatrix, PureTripartiteState, reduced_density, purity

LOG2_3 = math.log2(3.0)

# Spectral values below this are numerical noise from exactly-zero
# eigenvalues of rank-deficient products; sqrt would inflate them to ~1e-8.
_SPECTRUM_FLOOR = 1e-14

_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_YY = np.kron(_SIGMA_Y, _SIGMA_Y)


class MeasureError(ValueError):
    """Measure not applicable to the given state or dimensions."""


class MeasureId(enum.Enum):
    CONCURRENCE = "c"
    CONCURRENCE_OF_ASSISTANCE = "ca"
    EOF = "eof"
    ENTANGLEMENT_COST_LOOKUP = "ec-lookup"

    @classmethod
    def from_string(cls, s: str) -> "MeasureId":
        for m in cls:
            if m.value == s:
                return m
        raise MeasureError(f"unknown measure {s!r}; known: {[m.value for m in cls]}")


@dataclass(frozen=True)
class MeasureTriple:
    """The three operand values of the monogamy inequality for one state."""

    e_abc: float
    e_ab: float
    e_ac: float
    measure_id: MeasureId

    def __post_init__(self):
        if min(self.e_abc, self.e_ab, self.e_ac) < 0:
            raise MeasureError("measure values must be non-negative")

    def as_tuple(self):
        return (self.e_abc, self.e_ab, self.e_ac)


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2(1-x), with h(0) = h(1) = 0."""
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S(rho) in base 2."""
    w = np.linalg.eigvalsh(rho.mat)
    w = w[w > 1e-15]
    return float(-np.sum(w * np.log2(w)))


def concurrence_pure_cut(state: PureTripartiteState) -> float:
    """Concurrence of the pure A|BC cut, sqrt(2 (1 - Tr rho_A^2))."""
    rho_a = reduced_density(state, "A")
    return math.sqrt(max(0.0, 2.0 * (1.0 - purity(rho_a))))


def spinflip_sqrt_spectrum(rho: DensityMatrix) -> np.ndarray:
    """Descending sqrt-eigenvalues of rho * rho_tilde for a two-qubit rho.

    rho_tilde = (Y x Y) rho* (Y x Y).  The product is similar to the PSD
    matrix sqrt(rho) rho_tilde sqrt(rho), which is what gets diagonalized;
    noise-level eigenvalues are clipped to zero before the square root.
    """
    if rho.dim != 4:
        raise MeasureError(f"two-qubit kernel needs dim 4, got {rho.dim}")
    w, v = np.linalg.eigh(rho.mat)
    keep = w > _SPECTRUM_FLOOR
    w, v = w[keep], v[:, keep]
    # subnormalized eigendecomposition psi_k = sqrt(w_k) v_k; the sqrt
    # eigenvalues of rho*rho_tilde are the singular values of the complex
    # symmetric matrix A_kl = psi_k^T (Y x Y) psi_l (Takagi route), which
    # avoids squaring the spectrum and is exact on rank-deficient rho.
    psi = v * np.sqrt(w)
    a = psi.T @ _YY @ psi
    s = np.linalg.svd(a, compute_uv=False)
    out = np.zeros(4)
    out[: s.size] = s
    return out


def wootters_concurrence(rho: DensityMatrix) -> float:
    """Two-qubit mixed-state concurrence max(0, s1 - s2 - s3 - s4)."""
    s = spinflip_sqrt_spectrum(rho)
    return max(0.0, float(s[0] - s[1] - s[2] - s[3]))


def concurrence_of_assistance(rho: DensityMatrix) -> float:
    """Two-qubit concurrence of assistance, s1 + s2 + s3 + s4."""
    s = spinflip_sqrt_spectrum(rho)
    return float(np.sum(s))


def assistance_pure_cut(state: PureTripartiteState) -> float:
    """C_a of the pure A|BC cut; equals the pure-cut concurrence for qubit A."""
    if state.dims[0] != 2:
        raise MeasureError("assistance across the A|BC cut is only defined for d_A = 2")
    return concurrence_pure_cut(state)


def eof_two_qubit(rho: DensityMatrix) -> float:
    """Two-qubit entanglement of formation h((1 + sqrt(1 - C^2)) / 2)."""
    c = wootters_concurrence(rho)
    return binary_entropy((1.0 + math.sqrt(max(0.0, 1.0 - c * c))) / 2.0)


def entanglement_cost_lookup(name: str) -> MeasureTriple:
    """Tabulated entanglement-cost triples; E_C is not computable in general.

    The only entry is the antisymmetric two-qutrit purification,
    (log2 3, 1, 1).
    """
    if name != "antisymmetric_qutrit":
        raise MeasureError(f"no tabulated E_C for state {name!r}")
    return MeasureTriple(LOG2_3, 1.0, 1.0, MeasureId.ENTANGLEMENT_COST_LOOKUP)


# --- extended-precision pure-state fast path -------------------------------
#
# For a three-qubit pure state the reduced pair states have rank <= 2 and
# the whole spin-flip spectrum lives in a 2x2 complex symmetric matrix
# built from tensor slices.  Doing that arithmetic in clongdouble removes
# the cancellation error that otherwise dominates x-values with a tiny gap.


def _pair_sqrt_spectrum_pure(state: PureTripartiteState, partner: str) -> tuple[float, float]:
    """(s1, s2) spin-flip sqrt-spectrum of the reduced A-partner pair.

    Only the two possibly-nonzero values exist; requires a three-qubit state.
    """
    t = state.tensor.astype(np.clongdouble)
    # stored amplitudes carry a one-ulp normalization error; divide it out
    # so cut and pair values refer to exactly the same normalized vector
    nsq = np.real(np.vdot(t.ravel(), t.ravel()))
    if partner == "B":
        psi = t.reshape(4, 2)                      # rows |ab>, columns c
    else:
        psi = np.transpose(t, (0, 2, 1)).reshape(4, 2)
    yy = _YY.astype(np.clongdouble)
    a = psi.T @ yy @ psi                           # 2x2 complex symmetric
    # singular values of a 2x2 from trace/det of a^H a, closed form
    m = a.conj().T @ a
    tr = np.real(m[0, 0] + m[1, 1])
    det = np.real(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    disc = np.sqrt(np.maximum(np.longdouble(0.0), tr * tr - 4.0 * det))
    s1 = np.sqrt((tr + disc) / 2.0) / nsq
    s2sq = (tr - disc) / 2.0
    s2 = (np.sqrt(s2sq) if s2sq > 0 else np.longdouble(0.0)) / nsq
    return float(s1), float(s2)


def _pure_cut_concurrence_ld(state: PureTripartiteState) -> float:
    """Pure-cut concurrence sqrt(2 (1 - Tr rho_A^2)) in extended precision."""
    t = state.tensor.astype(np.clongdouble)
    nsq = np.real(np.vdot(t.ravel(), t.ravel()))
    m = t.reshape(state.dims[0], -1)
    rho_a = m @ m.conj().T
    pur = np.real(np.trace(rho_a @ rho_a))
    val = 2.0 * (nsq * nsq - pur) / (nsq * nsq)
    return float(np.sqrt(val)) if val > 0 else 0.0


# --- assisted concurrence for a qubit-qudit pair ---------------------------


def _fibonacci_bloch(n):
    """Roughly uniform directions on the Bloch sphere as qubit kets."""
    i = np.arange(n)
    z = 1.0 - 2.0 * (i + 0.5) / n
    theta = np.arccos(z)
    phi = i * math.pi * (3.0 - math.sqrt(5.0))
    kets = np.empty((n, 2), dtype=complex)
    kets[:, 0] = np.cos(theta / 2.0)
    kets[:, 1] = np.exp(1j * phi) * np.sin(theta / 2.0)
    return kets


def _projective_avg_concurrence(psi_apx, kets):
    """Average concurrence after measuring the assistant along each ket.

    psi_apx has axes (A=2, partner, assistant=2).  For a rank-1 outcome the
    subnormalized conditional A-marginal M satisfies p*C = 2 sqrt(det M),
    so the ensemble average for the projective pair {e, e_perp} is
    2 sqrt(det M(e)) + 2 sqrt(det M(e_perp)).
    """
    perp = np.empty_like(kets)
    perp[:, 0] = -kets[:, 1].conj()
    perp[:, 1] = kets[:, 0].conj()
    out = np.empty(len(kets))
    for arr, half in ((kets, 0), (perp, 1)):
        w = np.einsum("apx,nx->nap", psi_apx, arr.conj())
        m = np.einsum("nap,nbp->nab", w, w.conj())
        det = np.real(m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0])
        contrib = 2.0 * np.sqrt(np.clip(det, 0.0, None))
        if half == 0:
            out[:] = contrib
        else:
            out += contrib
    return out


def assisted_concurrence(state: PureTripartiteState, partner: str) -> float:
    """C_a(rho_{A,partner}) via ensemble search over the qubit assistant.

    Maximizes the average conditional concurrence over projective
    measurements of the third party (Bloch-sphere grid plus local refine).
    Requires d_A = 2 and a two-dimensional assistant.
    """
    partner = partner.upper()
    if partner not in ("B", "C"):
        raise MeasureError("partner must be B or C")
    assistant = "C" if partner == "B" else "B"
    dA, dB, dC = state.dims
    if dA != 2:
        raise MeasureError("assisted concurrence needs d_A = 2")
    d_assist = dC if assistant == "C" else dB
    if d_assist != 2:
        raise MeasureError(f"assistant {assistant} must be a qubit, has dim {d_assist}")
    t = state.tensor
    # axes -> (A, partner, assistant)
    psi = t if assistant == "C" else np.transpose(t, (0, 2, 1))

    kets = _fibonacci_bloch(128)
    vals = _projective_avg_concurrence(psi, kets)
    best = int(np.argmax(vals))
    z = kets[best]
    theta0 = 2.0 * math.atan2(abs(z[1]), abs(z[0]))
    phi0 = math.atan2(z[1].imag, z[1].real)

    from scipy.optimize import minimize

    def neg(x):
        theta, phi = x
        k = np.array([[math.cos(theta / 2.0), math.sin(theta / 2.0) * complex(math.cos(phi), math.sin(phi))]])
        return -_projective_avg_concurrence(psi, k)[0]

    res = minimize(neg, [theta0, phi0], method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 400})
    return max(float(vals[best]), -float(res.fun))


# --- triple assembly --------------------------------------------------------


def _pair_value(state, partner, kernel):
    """Two-qubit kernel on a reduced pair, or the assisted route for C_a."""
    dA, dB, dC = state.dims
    d_partner = dB if partner == "B" else dC
    if dA == 2 and d_partner == 2:
        return kernel(reduced_density(state, "A" + partner))
    if kernel is concurrence_of_assistance:
        return assisted_concurrence(state, partner)
    raise MeasureError(
        f"pair A{partner} has dims ({dA},{d_partner}); the two-qubit kernel needs (2,2)"
    )


def measure_triple(state: PureTripartiteState, mid: MeasureId) -> MeasureTriple:
    """Evaluate (E_{A|BC}, E_{AB}, E_{AC}) for the requested measure.

    Concurrence and EoF require a three-qubit state.  Concurrence of
    assistance requires qubit A and at least one qubit among B, C; the
    non-qubit pair (if any) is handled by the assisted-ensemble search.
    Entanglement cost is lookup-only (see entanglement_cost_lookup).
    """
    dA, dB, dC = state.dims
    if mid is MeasureId.CONCURRENCE:
        if (dA, dB, dC) != (2, 2, 2):
            raise MeasureError(
                f"concurrence triple needs dims (2,2,2), got {state.dims}: "
                "the two-qubit Wootters kernel applies to both reduced pairs"
            )
        s_ab = _pair_sqrt_spectrum_pure(state, "B")
        s_ac = _pair_sqrt_spectrum_pure(state, "C")
        return MeasureTriple(
            _pure_cut_concurrence_ld(state),
            max(0.0, s_ab[0] - s_ab[1]),
            max(0.0, s_ac[0] - s_ac[1]),
            mid,
        )
    if mid is MeasureId.CONCURRENCE_OF_ASSISTANCE:
        if dA != 2:
            raise MeasureError("assistance triple needs d_A = 2 for the A|BC cut")
        if (dB, dC) == (2, 2):
            s_ab = _pair_sqrt_spectrum_pure(state, "B")
            s_ac = _pair_sqrt_spectrum_pure(state, "C")
            return MeasureTriple(
                _pure_cut_concurrence_ld(state), sum(s_ab), sum(s_ac), mid
            )
        return MeasureTriple(
            assistance_pure_cut(state),
            _pair_value(state, "B", concurrence_of_assistance),
            _pair_value(state, "C", concurrence_of_assistance),
            mid,
        )
    if mid is MeasureId.EOF:
        if (dA, dB, dC) != (2, 2, 2):
            raise MeasureError(
                f"EoF triple needs dims (2,2,2), got {state.dims}: "
                "the concurrence-based kernel applies to both reduced pairs"
            )
        return MeasureTriple(
            von_neumann_entropy(reduced_density(state, "A")),
            eof_two_qubit(reduced_density(state, "AB")),
            eof_two_qubit(reduced_density(state, "AC")),
            mid,
        )
    if mid is MeasureId.ENTANGLEMENT_COST_LOOKUP:
        raise MeasureError(
            "entanglement cost is not computable from amplitudes; "
            "use entanglement_cost_lookup with a named state"
        )
    raise MeasureError(f"unhandled measure {mid}")
