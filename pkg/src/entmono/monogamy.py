"""Monogamy decision machinery.

The central object is the state-dependent parameter x solving

    x * (E^y(A|BC) - max{E^y(AB), E^y(AC)}) = min{E^y(AB), E^y(AC)}

for a fixed exponent y > 0.  Boundedness of the set of x over a family of
states is equivalent to the measure being alpha-monogamous on that family,
with alpha = max(M*y, y) for any bound M on x.  A state where the cut value
equals the larger pair value while the smaller one stays positive admits no
finite x and defeats monogamy at every exponent.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect

from . import states as _states
from . import measures as _measures
from .measures import MeasureId, MeasureTriple

DEFAULT_EPS = 1e-9

# Exponent search bracket; values in play are O(1), so exponents beyond 64
# are numerically meaningless.
ALPHA_MAX = 64.0
BISECT_MAXITER = 200


class DomainError(ValueError):
    """Triple outside the domain of the requested operation."""


class MonotonicityError(ValueError):
    """Cut value below the larger pair value beyond tolerance.

    Signals that the measure is not an entanglement monotone on this state,
    which the solver's derivation assumes."""


class XKind(enum.Enum):
    ZERO = "zero"
    FINITE = "finite"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class XSolution:
    kind: XKind
    y: float
    x: float = 0.0  # positive for FINITE, 0 for ZERO, inf for UNBOUNDED


class CertificateKind(enum.Enum):
    THEOREM1_BOUND = "empirical-x-bound"
    THEOREM3_PER_STATE = "per-state-exponent"
    THEOREM3_RELAXED = "relaxed-base"
    THEOREM2_WITNESS = "non-monogamy-witness"


@dataclass(frozen=True)
class Certificate:
    kind: CertificateKind
    alpha: float | None
    inputs: dict
    residual_at_alpha: float | None = None


def _split(t: MeasureTriple):
    hi = max(t.e_ab, t.e_ac)
    lo = min(t.e_ab, t.e_ac)
    return t.e_abc, hi, lo


def solve_x(t: MeasureTriple, y: float, eps: float = DEFAULT_EPS) -> XSolution:
    """Classify the solution of the x-equation at exponent y.

    Zero when the smaller pair value vanishes (this takes precedence when
    the gap vanishes too); Finite(min^y / gap) when both the gap and the
    smaller pair value are at least eps; Unbounded when the gap vanishes
    but the smaller pair value does not.
    """
    if y <= 0:
        raise DomainError(f"exponent y must be positive, got {y}")
    cut, hi, lo = _split(t)
    if cut < hi - eps:
        raise MonotonicityError(
            f"cut value {cut} below larger pair value {hi} beyond eps={eps}"
        )
    gap = cut ** y - hi ** y
    m = lo ** y
    if m < eps:
        return XSolution(XKind.ZERO, y, 0.0)
    if gap < eps:
        return XSolution(XKind.UNBOUNDED, y, math.inf)
    return XSolution(XKind.FINITE, y, m / gap)


def residual(t: MeasureTriple, alpha: float) -> float:
    """E^a(A|BC) - E^a(AB) - E^a(AC); non-negative iff monogamous at alpha."""
    if alpha <= 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return t.e_abc ** alpha - t.e_ab ** alpha - t.e_ac ** alpha


def alpha_from_bound(m_bound: float, y0: float) -> float:
    """Monogamy exponent max(M * y0, y0) implied by an x-bound M at y0."""
    if m_bound < 0 or y0 <= 0:
        raise DomainError(f"need M >= 0 and y0 > 0, got M={m_bound}, y0={y0}")
    return max(m_bound * y0, y0)


def per_state_base(t: MeasureTriple) -> float:
    """The ratio b = E(A|BC) / max(E(AB), E(AC)) used by the per-state exponent."""
    cut, hi, lo = _split(t)
    if lo <= 0 or cut <= hi:
        raise DomainError(
            "per-state exponent needs a strict gap and positive smaller pair value "
            f"(got cut={cut}, max={hi}, min={lo})"
        )
    return cut / hi


def theorem3_alpha(t: MeasureTriple) -> float:
    """Per-state monogamy exponent log_b 2 with b = cut / max-pair value."""
    b = per_state_base(t)
    return math.log(2.0) / math.log(b)


def theorem3_alpha_relaxed(c: float) -> float:
    """Exponent log_c 2 valid for every triple whose base ratio is >= c > 1."""
    if c <= 1.0:
        raise DomainError(f"relaxed base must exceed 1, got {c}")
    return math.log(2.0) / math.log(c)


def is_theorem2_witness(t: MeasureTriple, eps: float = DEFAULT_EPS) -> bool:
    """True iff the cut equals the larger pair value and the smaller is positive.

    Such a state rules out monogamy at every exponent.
    """
    cut, hi, lo = _split(t)
    if cut < hi - eps:
        raise MonotonicityError(
            f"cut value {cut} below larger pair value {hi} beyond eps={eps}"
        )
    return abs(cut - hi) < eps and lo >= eps


def min_alpha(t: MeasureTriple, tol: float = 1e-6, eps: float = DEFAULT_EPS) -> float:
    """Smallest exponent at which the residual turns non-negative.

    Returns 0.0 when the smaller pair value vanishes (monogamous at every
    exponent), math.inf when no finite exponent works (witness case or
    bracket failure), else the root of the residual found by bisection on
    [tol, 64].
    """
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    cut, hi, lo = _split(t)
    if cut < hi - eps:
        raise MonotonicityError(f"cut value {cut} below larger pair value {hi}")
    if lo < eps:
        return 0.0
    if abs(cut - hi) < eps:
        return math.inf
    f = lambda a: residual(t, a)
    if f(tol) >= 0.0:
        return tol
    if f(ALPHA_MAX) < 0.0:
        return math.inf
    return float(bisect(f, tol, ALPHA_MAX, xtol=tol, maxiter=BISECT_MAXITER))


def beta_curves(t: MeasureTriple, y_grid) -> list[tuple[float, float, float]]:
    """Rows (y, x(y)*y, y) over a grid of exponents.

    The minimum over y of max(z1, z2) approximates the best exponent
    reachable from the x-equation for this triple; requires a finite x at
    every grid point.
    """
    rows = []
    for y in y_grid:
        sol = solve_x(t, float(y))
        if sol.kind is not XKind.FINITE:
            raise DomainError(f"x is {sol.kind.value} at y={y}; curve undefined")
        rows.append((float(y), sol.x * float(y), float(y)))
    return rows


# --- Monte-Carlo sweeps -----------------------------------------------------

FAMILIES = ("haar", "w_class", "schmidt")

_SWEEP_CHUNK = 512


@dataclass
class SweepReport:
    """Aggregate of x-solutions over sampled states.

    certified_alpha is present iff no unbounded solution occurred, and is an
    empirical certificate only: boundedness over the continuum of states
    cannot be proven by sampling.
    """

    dims: tuple[int, int, int]
    measure: MeasureId
    family: str
    y: float
    seed: int
    samples: int
    zero_count: int
    finite_count: int
    unbounded_count: int
    monotonicity_violations: int
    max_finite_x: float
    witnesses: list  # (sample seed index, MeasureTriple), sorted by index
    histogram: list  # (bucket_lo, bucket_hi, count)
    certified_alpha: float | None
    empirical: bool = True

    def to_json_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "measure": self.measure.value,
            "family": self.family,
            "y": self.y,
            "seed": self.seed,
            "samples": self.samples,
            "zero_count": self.zero_count,
            "finite_count": self.finite_count,
            "unbounded_count": self.unbounded_count,
            "monotonicity_violations": self.monotonicity_violations,
            "max_finite_x": self.max_finite_x,
            "witnesses": [
                {"seed": i, "triple": list(t.as_tuple())} for i, t in self.witnesses
            ],
            "histogram": [
                {"bucket_lo": lo, "bucket_hi": hi, "count": n}
                for lo, hi, n in self.histogram
            ],
            "certified_alpha": self.certified_alpha,
            "certificate_kind": CertificateKind.THEOREM1_BOUND.value,
            "empirical": self.empirical,
        }


def _sample_state(dims, family, seq):
    if family == "haar":
        return _states.haar_random(dims, seq)
    rng = np.random.Generator(np.random.PCG64(seq))
    if family == "w_class":
        if tuple(dims) != (2, 2, 2):
            raise DomainError("w_class family is defined on dims (2,2,2)")
        raw = rng.standard_normal(8)
        b = raw[:4] + 1j * raw[4:]
        b /= np.linalg.norm(b)
        return _states.w_class(*b)
    if family == "schmidt":
        if tuple(dims) != (2, 2, 2):
            raise DomainError("schmidt family is defined on dims (2,2,2)")
        lam = np.abs(rng.standard_normal(5))
        lam /= np.linalg.norm(lam)
        phi = rng.uniform(0.0, 2.0 * math.pi)
        return _states.from_schmidt(_states.SchmidtParams(tuple(lam), phi))
    raise DomainError(f"unknown family {family!r}; known: {FAMILIES}")


def _sweep_chunk(args):
    dims, mid_value, family, y, eps, master_seed, start, stop = args
    mid = MeasureId(mid_value)
    zero = finite = unbounded = violations = 0
    finite_xs = []
    witnesses = []
    for i in range(start, stop):
        seq = np.random.SeedSequence((master_seed, i))
        state = _sample_state(dims, family, seq)
        t = _measures.measure_triple(state, mid)
        cut, hi, lo = _split(t)
        if cut < hi - eps:
            violations += 1
            # classify anyway, treating the (negative) gap as vanished
            if lo ** y < eps:
                zero += 1
            else:
                unbounded += 1
                witnesses.append((i, t))
            continue
        sol = solve_x(t, y, eps)
        if sol.kind is XKind.ZERO:
            zero += 1
        elif sol.kind is XKind.FINITE:
            finite += 1
            finite_xs.append(sol.x)
        else:
            unbounded += 1
            witnesses.append((i, t))
    return zero, finite, unbounded, violations, finite_xs, witnesses


def _worker_count(n_chunks):
    cap = os.environ.get("MONO_THREADS")
    workers = os.cpu_count() or 1
    if cap:
        workers = max(1, min(workers, int(cap)))
    return max(1, min(workers, n_chunks))


def sweep(dims, mid: MeasureId, y: float, n: int, seed: int,
          family: str = "haar", eps: float = DEFAULT_EPS) -> SweepReport:
    """Sample n states, solve for x on each, and aggregate.

    Sampling is deterministic in (seed, sample index), so results do not
    depend on the worker count.  Workers fan out over fixed-size chunks;
    MONO_THREADS caps the pool.
    """
    if n < 1:
        raise DomainError(f"need at least one sample, got {n}")
    dims = tuple(int(d) for d in dims)
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}; known: {FAMILIES}")
    # fail fast on unsupported measure/dims before burning samples
    _measures.measure_triple(_sample_state(dims, family, np.random.SeedSequence((seed, 0))), mid)

    bounds = list(range(0, n, _SWEEP_CHUNK)) + [n]
    chunks = [
        (dims, mid.value, family, y, eps, seed, bounds[k], bounds[k + 1])
        for k in range(len(bounds) - 1)
    ]
    workers = _worker_count(len(chunks))
    if workers > 1 and n >= 4 * _SWEEP_CHUNK:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_chunk, chunks))
    else:
        results = [_sweep_chunk(c) for c in chunks]

    zero = finite = unbounded = violations = 0
    finite_xs = []
    witnesses = []
    for z, f, u, v, xs, ws in results:
        zero += z
        finite += f
        unbounded += u
        violations += v
        finite_xs.extend(xs)
        witnesses.extend(ws)
    witnesses.sort(key=lambda iw: iw[0])

    finite_arr = np.asarray(finite_xs)
    max_x = float(finite_arr.max()) if finite else 0.0
    histogram = []
    if finite:
        counts, edges = np.histogram(finite_arr, bins=50, range=(0.0, max_x))
        histogram = [
            (float(edges[k]), float(edges[k + 1]), int(counts[k])) for k in range(50)
        ]
    certified = alpha_from_bound(max_x, y) if unbounded == 0 else None
    return SweepReport(
        dims=dims, measure=mid, family=family, y=y, seed=seed, samples=n,
        zero_count=zero, finite_count=finite, unbounded_count=unbounded,
        monotonicity_violations=violations, max_finite_x=max_x,
        witnesses=witnesses, histogram=histogram, certified_alpha=certified,
    )


# --- certificates -----------------------------------------------------------


def certify_per_state(t: MeasureTriple) -> Certificate:
    """Per-state exponent certificate log_b 2 with its verified residual."""
    b = per_state_base(t)
    alpha = math.log(2.0) / math.log(b)
    return Certificate(
        CertificateKind.THEOREM3_PER_STATE,
        alpha,
        {"b": b, "triple": t.as_tuple()},
        residual(t, alpha),
    )


def certify_relaxed(t: MeasureTriple, c: float) -> Certificate:
    """Relaxed-base certificate log_c 2, valid when 1 < c <= b for the triple."""
    b = per_state_base(t)
    if not (1.0 < c <= b):
        raise DomainError(f"relaxed base must satisfy 1 < c <= b = {b}, got {c}")
    alpha = theorem3_alpha_relaxed(c)
    return Certificate(
        CertificateKind.THEOREM3_RELAXED,
        alpha,
        {"b": b, "c": c, "triple": t.as_tuple()},
        residual(t, alpha),
    )
