"""Eigensolvers, the tail-norm convergence filter, and spectrum alignment.

Truncated-basis eigenvectors are trusted only when almost no amplitude has
reached the top of the basis; the filter formalizes that as an l2 norm over
the last fraction of Fock amplitudes compared against a tolerance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg

from .model import HermitianMatrix, TridiagonalMatrix

_SIGNIFICANT = 1e-8  # amplitude magnitude that fixes the canonical sign


@dataclass(frozen=True)
class EigenPair:
    """One eigenvalue with its unit-norm eigenvector and filter verdict."""

    value: float
    vector: np.ndarray
    tail_norm: float
    converged: bool = False

    def __post_init__(self) -> None:
        vector = np.asarray(self.vector)
        norm = float(np.linalg.norm(vector))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"eigenvector norm {norm} is not 1 within 1e-12")
        if not (np.isfinite(self.value) and np.isfinite(self.tail_norm)):
            raise ValueError("value and tail_norm must be finite")
        if self.tail_norm < 0:
            raise ValueError(f"tail_norm must be >= 0, got {self.tail_norm}")
        object.__setattr__(self, "vector", vector)


@dataclass(frozen=True)
class FilteredSpectrum:
    """Eigenpairs sorted by value, with the filter settings that judged them."""

    pairs: tuple[EigenPair, ...]
    cutoff: int
    tail_fraction: float
    tolerance: float

    @property
    def converged_pairs(self) -> tuple[EigenPair, ...]:
        return tuple(p for p in self.pairs if p.converged)

    @property
    def converged_values(self) -> np.ndarray:
        return np.array([p.value for p in self.pairs if p.converged])

    @property
    def converged_count(self) -> int:
        return sum(1 for p in self.pairs if p.converged)


class Alignment(NamedTuple):
    """Constant shift onto the reference and the largest leftover deviation."""

    offset: float
    residual: float


def interior_count(dimension: int, edge_fraction: float = 0.2) -> int:
    """Number of trustworthy low eigenvalues of a truncated matrix.

    The top edge_fraction of any truncated spectrum is corrupted by the basis
    cutoff and excluded from cross-representation comparisons.
    """
    return dimension - math.ceil(edge_fraction * dimension)


def tail_norm_of(vector: np.ndarray, tail_fraction: float = 0.2, qubit_dim: int = 1) -> float:
    """l2 norm of the last ceil(tail_fraction * N) Fock levels of a vector.

    For qubit-tensored vectors in interleaved ordering the tail spans those
    Fock levels across every qubit component.
    """
    if not 0 < tail_fraction < 1:
        raise ValueError(f"tail_fraction must be in (0, 1), got {tail_fraction}")
    fock_len = len(vector) // qubit_dim
    take = math.ceil(tail_fraction * fock_len) * qubit_dim
    if take <= 0 or take > len(vector):
        raise ValueError(f"tail of length {take} invalid for vector of length {len(vector)}")
    return float(np.linalg.norm(vector[len(vector) - take :]))


def _canonical_sign(vector: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the first significant amplitude is positive."""
    significant = np.flatnonzero(np.abs(vector) > _SIGNIFICANT)
    pivot = vector[significant[0]] if significant.size else vector[np.argmax(np.abs(vector))]
    if np.iscomplexobj(vector):
        return vector * (np.conj(pivot) / abs(pivot))
    return -vector if pivot < 0 else vector


def _to_pairs(values: np.ndarray, vectors: np.ndarray, qubit_dim: int) -> list[EigenPair]:
    tails = np.array(
        [tail_norm_of(vectors[:, i], 0.2, qubit_dim) for i in range(vectors.shape[1])]
    )
    # ascending by value, ties broken by ascending tail norm
    order = np.lexsort((tails, values))
    return [
        EigenPair(
            value=float(values[i]),
            vector=_canonical_sign(vectors[:, i]),
            tail_norm=float(tails[i]),
            converged=False,
        )
        for i in order
    ]


def solve_tridiagonal(matrix: TridiagonalMatrix, k: int) -> list[EigenPair]:
    """k lowest eigenpairs of a real symmetric tridiagonal matrix."""
    dim = matrix.dimension
    if not 1 <= k <= dim:
        raise ValueError(f"k must be in [1, {dim}], got {k}")
    if dim == 1:
        vector = np.ones(1)
        return [EigenPair(float(matrix.diag[0]), vector, tail_norm_of(vector))]
    values, vectors = scipy.linalg.eigh_tridiagonal(
        matrix.diag, matrix.offdiag, select="i", select_range=(0, k - 1)
    )
    return _to_pairs(values, vectors, qubit_dim=1)


def solve_hermitian(matrix: HermitianMatrix, k: int) -> list[EigenPair]:
    """k lowest eigenpairs of a dense or banded Hermitian matrix."""
    dim = matrix.dimension
    if not 1 <= k <= dim:
        raise ValueError(f"k must be in [1, {dim}], got {k}")
    if matrix.storage == "dense":
        values, vectors = scipy.linalg.eigh(matrix.data, subset_by_index=[0, k - 1])
    else:
        values, vectors = scipy.linalg.eig_banded(
            matrix.data, lower=True, select="i", select_range=(0, k - 1)
        )
    return _to_pairs(values, vectors, matrix.qubit_dim)


def convergence_filter(
    pairs: Sequence[EigenPair],
    tail_fraction: float = 0.2,
    tolerance: float = 1e-6,
    qubit_dim: int = 1,
) -> FilteredSpectrum:
    """Recompute tail norms and verdicts for a batch of eigenpairs.

    A pair converges when the norm of the last ceil(tail_fraction * N) Fock
    amplitudes of its vector is below tolerance.
    """
    if not 0 < tail_fraction < 1:
        raise ValueError(f"tail_fraction must be in (0, 1), got {tail_fraction}")
    if tolerance <= 0:
        raise ValueError(f"tolerance must be > 0, got {tolerance}")
    if not pairs:
        return FilteredSpectrum((), 0, tail_fraction, tolerance)
    judged = []
    for pair in pairs:
        tail = tail_norm_of(pair.vector, tail_fraction, qubit_dim)
        judged.append(replace(pair, tail_norm=tail, converged=tail < tolerance))
    judged.sort(key=lambda p: (p.value, p.tail_norm))
    cutoff = len(judged[0].vector) // qubit_dim
    return FilteredSpectrum(tuple(judged), cutoff, tail_fraction, tolerance)


def _injective_match(reference: np.ndarray, shifted: np.ndarray) -> np.ndarray | None:
    """Monotone one-to-one matching minimizing the largest pair distance.

    Both inputs sorted ascending. Each shifted value claims a distinct
    reference entry, so degenerate spectra cannot collapse onto a single
    reference level. Returns the matched reference indices, or None when
    there are more values than reference entries.
    """
    n = len(shifted)
    if n > len(reference):
        return None

    def attempt(t: float) -> np.ndarray | None:
        # smallest strictly increasing indices with reference[j] >= v - t
        lower = np.searchsorted(reference, shifted - t)
        j = np.maximum.accumulate(lower - np.arange(n)) + np.arange(n)
        if j[-1] >= len(reference) or np.any(reference[j] > shifted + t):
            return None
        return j

    hi = float(max(reference[-1], shifted[-1]) - min(reference[0], shifted[0])) + 1.0
    lo = 0.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if attempt(mid) is None:
            lo = mid
        else:
            hi = mid
    return attempt(hi)


def _align_candidates(reference: np.ndarray, values: np.ndarray) -> list[Alignment]:
    """Distinct locally-optimal alignments, best residual first.

    Runs the match-and-shift iteration from several anchors; each fixed
    point is one candidate. Degenerate lattices can tie several offsets at
    zero residual, so all of them are reported for joint disambiguation.
    """
    starts = {float(r - values[0]) for r in reference[: min(len(reference), 8)]}
    span = min(len(reference), len(values))
    starts.add(float(np.mean(reference[:span]) - np.mean(values[:span])))
    found: list[Alignment] = []
    for start in sorted(starts):
        offset = start
        matched = None
        for _ in range(100):
            matched = _injective_match(reference, values + offset)
            if matched is None:
                break
            update = offset + float(np.mean(reference[matched] - (values + offset)))
            if update == offset:
                break
            offset = update
        if matched is None:
            continue
        residual = float(np.max(np.abs(values + offset - reference[matched])))
        if all(abs(offset - c.offset) > 1e-9 for c in found):
            found.append(Alignment(offset, residual))
    if not found:
        raise ValueError(
            f"cannot align {len(values)} values onto {len(reference)} reference values"
        )
    found.sort(key=lambda a: (a.residual, abs(a.offset)))
    return found


def align_spectra(
    reference: FilteredSpectrum, others: Sequence[FilteredSpectrum]
) -> list[Alignment]:
    """Least-squares constant shift matching each spectrum onto the reference.

    Only converged values participate. Shifted values are paired one-to-one
    with converged reference values (so degenerate levels respect their
    multiplicities); the returned residual is the largest absolute pair
    deviation under the best shift. The reference must span the values being
    aligned and offer at least as many converged values.
    """
    ref = reference.converged_values
    if len(ref) < 3:
        raise ValueError(f"reference has {len(ref)} converged values, need >= 3")
    value_lists = []
    tie_sets = []
    for spectrum in others:
        values = spectrum.converged_values
        if len(values) < 3:
            raise ValueError(f"spectrum has {len(values)} converged values, need >= 3")
        candidates = _align_candidates(ref, values)
        ties = [c for c in candidates if c.residual <= candidates[0].residual + 1e-9]
        value_lists.append(values)
        tie_sets.append(ties[:4])

    combos = 1
    for ties in tie_sets:
        combos *= len(ties)
    if combos == 1 or combos > 256:
        return [ties[0] for ties in tie_sets]

    # several exact embeddings per spectrum (degenerate lattices): pick the
    # combination whose shifted union best tiles the reference one-to-one
    best_combo = None
    best_residual = math.inf
    for combo in itertools.product(*tie_sets):
        union = np.sort(
            np.concatenate(
                [vals + a.offset for vals, a in zip(value_lists, combo)]
            )
        )
        matched = _injective_match(ref, union)
        if matched is None:
            continue
        residual = float(np.max(np.abs(union - ref[matched])))
        if residual < best_residual:
            best_combo, best_residual = combo, residual
    if best_combo is None:
        return [ties[0] for ties in tie_sets]
    return list(best_combo)
