"""Truncated-basis Hamiltonians of the two-photon quantum Rabi model.

The full model couples a qubit to a boson mode through two-photon
exchange, H = (omega0/2) sigma_z + omega a^dag a + g2 (a^dag^2 + a^2) sigma_x.
Builders return the full Fock-basis form, its quadrature (phase-space) and
rotated equivalents, and the four SU(1,1) subspace tridiagonals obtained by
diagonalizing in the qubit basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Matrices at or above this dimension are kept in lower-banded storage.
DENSE_LIMIT = 1024

# In the interleaved qubit (x) Fock ordering (index = 2n + s, s = 0 spin-up)
# no builder couples states farther apart than this.
FULL_BANDWIDTH = 5


@dataclass(frozen=True)
class ModelParams:
    """Frequencies and coupling, all dimensionless in a common unit."""

    omega0: float
    omega: float
    g2: float

    def __post_init__(self) -> None:
        vals = (self.omega0, self.omega, self.g2)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError(f"parameters must be finite, got {vals}")
        if self.omega0 < 0:
            raise ValueError(f"omega0 must be >= 0, got {self.omega0}")
        if self.omega < 0:
            raise ValueError(f"omega must be >= 0, got {self.omega}")
        if self.g2 < 0:
            raise ValueError(f"g2 must be >= 0, got {self.g2}")


@dataclass(frozen=True)
class SubspaceLabel:
    """Bargmann index q in {1/4, 3/4} and the qubit-diagonalization branch.

    q = 1/4 labels the even Fock sector |2m>, q = 3/4 the odd sector |2m+1>.
    """

    bargmann_q: float
    branch: int

    def __post_init__(self) -> None:
        if self.bargmann_q not in (0.25, 0.75):
            raise ValueError(f"bargmann_q must be 1/4 or 3/4, got {self.bargmann_q}")
        if self.branch not in (1, -1):
            raise ValueError(f"branch must be +1 or -1, got {self.branch}")

    @property
    def name(self) -> str:
        sector = "q14" if self.bargmann_q == 0.25 else "q34"
        return sector + ("+" if self.branch == 1 else "-")

    @classmethod
    def from_name(cls, name: str) -> "SubspaceLabel":
        table = {s.name: s for s in ALL_SUBSPACES}
        try:
            return table[name]
        except KeyError:
            raise ValueError(
                f"unknown subspace {name!r}, expected one of {sorted(table)}"
            ) from None


ALL_SUBSPACES = (
    SubspaceLabel(0.25, 1),
    SubspaceLabel(0.25, -1),
    SubspaceLabel(0.75, 1),
    SubspaceLabel(0.75, -1),
)


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Real symmetric tridiagonal matrix (diagonal plus one off-diagonal)."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self) -> None:
        diag = np.asarray(self.diag, dtype=float)
        offdiag = np.asarray(self.offdiag, dtype=float)
        if diag.ndim != 1 or offdiag.ndim != 1:
            raise ValueError("diag and offdiag must be one-dimensional")
        if len(offdiag) != len(diag) - 1:
            raise ValueError(
                f"offdiag length {len(offdiag)} != diag length {len(diag)} - 1"
            )
        if not (np.all(np.isfinite(diag)) and np.all(np.isfinite(offdiag))):
            raise ValueError("matrix entries must be finite")
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", offdiag)

    @property
    def dimension(self) -> int:
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        out = np.diag(self.diag)
        idx = np.arange(self.dimension - 1)
        out[idx + 1, idx] = self.offdiag
        out[idx, idx + 1] = self.offdiag
        return out


@dataclass(frozen=True)
class HermitianMatrix:
    """Hermitian matrix in dense or lower-banded storage.

    Banded data holds the subdiagonals: data[r, j] = A[j + r, j]. The upper
    triangle is implied by conjugate symmetry, so banded matrices are
    Hermitian by construction; dense data is checked on construction.
    """

    data: np.ndarray
    storage: str
    qubit_dim: int = 1

    def __post_init__(self) -> None:
        if self.storage not in ("dense", "banded"):
            raise ValueError(f"storage must be 'dense' or 'banded', got {self.storage!r}")
        if self.qubit_dim not in (1, 2):
            raise ValueError(f"qubit_dim must be 1 or 2, got {self.qubit_dim}")
        data = np.asarray(self.data)
        if not np.all(np.isfinite(data)):
            raise ValueError("matrix entries must be finite")
        if self.storage == "dense":
            if data.ndim != 2 or data.shape[0] != data.shape[1]:
                raise ValueError(f"dense storage must be square, got {data.shape}")
            if not np.array_equal(data, data.conj().T):
                raise ValueError("dense entries must be exactly Hermitian")
        else:
            if data.ndim != 2 or data.shape[0] > data.shape[1]:
                raise ValueError(f"banded storage must be (bandwidth+1, dim), got {data.shape}")
        object.__setattr__(self, "data", data)

    @property
    def dimension(self) -> int:
        return self.data.shape[1] if self.storage == "banded" else self.data.shape[0]

    @property
    def bandwidth(self) -> int:
        return self.data.shape[0] - 1 if self.storage == "banded" else self.dimension - 1

    def to_dense(self) -> np.ndarray:
        if self.storage == "dense":
            return self.data.copy()
        rows, dim = self.data.shape
        out = np.zeros((dim, dim), dtype=self.data.dtype)
        for r in range(rows):
            idx = np.arange(dim - r)
            out[idx + r, idx] = self.data[r, : dim - r]
        return out + np.triu(out.conj().T, 1)


def _check_cutoff(cutoff: int, minimum: int) -> None:
    if not isinstance(cutoff, (int, np.integer)) or isinstance(cutoff, bool):
        raise ValueError(f"cutoff must be an integer, got {cutoff!r}")
    if cutoff < minimum:
        raise ValueError(f"cutoff {cutoff} too small, need at least {minimum}")


def _package(band: np.ndarray, qubit_dim: int) -> HermitianMatrix:
    dim = band.shape[1]
    if band.shape[0] > dim:  # tiny matrices cannot hold the full bandwidth
        band = band[:dim]
    if dim < DENSE_LIMIT:
        dense = HermitianMatrix(band, "banded", qubit_dim).to_dense()
        return HermitianMatrix(dense, "dense", qubit_dim)
    return HermitianMatrix(band, "banded", qubit_dim)


def _quadrature_bands(cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and second off-diagonal of q^2 truncated elementwise.

    q^2 = (2n+1)/2 on the diagonal and sqrt((n+1)(n+2))/2 two steps off it;
    p^2 shares the diagonal and negates the off-diagonal.
    """
    n = np.arange(cutoff, dtype=float)
    diag = n + 0.5
    off2 = np.sqrt((n[: cutoff - 2] + 1.0) * (n[: cutoff - 2] + 2.0)) / 2.0
    return diag, off2


def build_full_fock(params: ModelParams, cutoff: int) -> HermitianMatrix:
    """Full model in the interleaved |n> (x) |up/down> product basis.

    Matrix elements: omega*n +/- omega0/2 on the diagonal and
    g2*sqrt((n+1)(n+2)) between |n, s> and |n+2, flip(s)>.
    """
    _check_cutoff(cutoff, 2)
    N = cutoff
    band = np.zeros((FULL_BANDWIDTH + 1, 2 * N))
    n = np.arange(N, dtype=float)
    band[0, 0::2] = params.omega * n + params.omega0 / 2.0
    band[0, 1::2] = params.omega * n - params.omega0 / 2.0
    if N > 2:
        m = np.arange(N - 2, dtype=float)
        pair = params.g2 * np.sqrt((m + 1.0) * (m + 2.0))
        band[5, 0 : 2 * (N - 2) : 2] = pair
        band[3, 1 : 2 * (N - 2) : 2] = pair
    return _package(band, qubit_dim=2)


def build_phase_space(params: ModelParams, cutoff: int) -> HermitianMatrix:
    """Quadrature form H_y; its spectrum is the full model's plus omega/2.

    Spin-up block (alpha_+ p^2 + alpha_- q^2)/2, spin-down with the alphas
    swapped, and (omega0/2) sigma_x across the qubit.
    """
    _check_cutoff(cutoff, 2)
    N = cutoff
    diag, off2 = _quadrature_bands(N)
    band = np.zeros((FULL_BANDWIDTH + 1, 2 * N))
    # (alpha_+ + alpha_-)/2 = omega for both spin blocks on the diagonal
    band[0, 0::2] = params.omega * diag
    band[0, 1::2] = params.omega * diag
    band[1, 0::2] = params.omega0 / 2.0
    if N > 2:
        band[4, 0 : 2 * (N - 2) : 2] = -2.0 * params.g2 * off2
        band[4, 1 : 2 * (N - 2) : 2] = 2.0 * params.g2 * off2
    return _package(band, qubit_dim=2)


def build_rotated_fock(params: ModelParams, cutoff: int) -> HermitianMatrix:
    """Rotated form: common boson block (alpha_+ p^2 + alpha_- q^2)/2 and
    qubit coupling (omega0/2) through the diagonal Fock-space rotation with
    phases exp(-i pi (n + 1/2) / 2).
    """
    _check_cutoff(cutoff, 2)
    N = cutoff
    diag, off2 = _quadrature_bands(N)
    band = np.zeros((FULL_BANDWIDTH + 1, 2 * N), dtype=complex)
    band[0, 0::2] = params.omega * diag
    band[0, 1::2] = params.omega * diag
    if N > 2:
        band[4, 0 : 2 * (N - 2) : 2] = -2.0 * params.g2 * off2
        band[4, 1 : 2 * (N - 2) : 2] = -2.0 * params.g2 * off2
    n = np.arange(N, dtype=float)
    phases = np.exp(-1j * np.pi * (n + 0.5) / 2.0)
    # upper block <2n|H|2n+1> = (omega0/2) * phase; the stored lower band
    # carries its conjugate
    band[1, 0::2] = (params.omega0 / 2.0) * np.conj(phases)
    return _package(band, qubit_dim=2)


def build_subspace_tridiagonal(
    label: SubspaceLabel, params: ModelParams, cutoff: int
) -> TridiagonalMatrix:
    """SU(1,1) sector Hamiltonian H_{q,branch} on the ladder |q; m>.

    diag[m] = branch*(omega0/2)*(-1)^m + 2*omega*(q + m),
    offdiag[m] = -2*g2*sqrt((m+1)(m+2q)).
    """
    _check_cutoff(cutoff, 2)
    M = cutoff
    q = label.bargmann_q
    m = np.arange(M, dtype=float)
    diag = label.branch * (params.omega0 / 2.0) * (-1.0) ** m + 2.0 * params.omega * (q + m)
    head = m[: M - 1]
    offdiag = -2.0 * params.g2 * np.sqrt((head + 1.0) * (head + 2.0 * q))
    return TridiagonalMatrix(diag, offdiag)


def boson_parity(cutoff: int) -> HermitianMatrix:
    """Diagonal Fock-parity operator with entries (-1)^n."""
    _check_cutoff(cutoff, 1)
    band = ((-1.0) ** np.arange(cutoff, dtype=float))[np.newaxis, :]
    return _package(band, qubit_dim=1)
