"""Dense linear algebra for quantum effects.

An effect is a Hermitian matrix with spectrum inside [0, 1].  Everything in
this package works on small dense complex matrices (dimension 8 or less in
practice), so all routines here lean on exact eigendecompositions rather than
iterative methods.  Functions are pure and returned effects are immutable;
values can be shared freely.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

# Tolerance ladder, loosest use comes last: input hermiticity is checked at
# 1e-12, eigendecompositions must reconstruct their input to 1e-10, spectrum
# membership for effects is enforced at 1e-9 and Loewner order comparisons
# accept violations up to 1e-9.  Callers can override per call.
HERMITICITY_TOL = 1e-12
RECONSTRUCTION_TOL = 1e-10
EFFECT_SPECTRUM_TOL = 1e-9
ORDER_TOL = 1e-9

# Randomly generated effects keep interior eigenvalues at least this far from
# 0 and 1, so classifying generated data is never a coin flip.
INTERIOR_MARGIN = 1e-3


class NotHermitian(ValueError):
    """Input matrix differs from its conjugate transpose beyond tolerance."""


class SpectrumOutOfRange(ValueError):
    """An alleged effect has an eigenvalue outside [0, 1] beyond tolerance."""

    def __init__(self, eigenvalue: float, tol: float):
        self.eigenvalue = eigenvalue
        self.tol = tol
        super().__init__(
            f"eigenvalue {eigenvalue:.6g} lies outside [0, 1] "
            f"(tolerance {tol:g})"
        )


def _as_square_array(matrix) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] == 0:
        raise ValueError("empty matrix")
    return m


def require_hermitian(matrix, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Check hermiticity entrywise and return the symmetrised copy.

    Symmetrising after the check means downstream eigensolvers always see an
    exactly Hermitian array, so tiny asymmetries cannot leak into spectra.
    """
    m = _as_square_array(matrix)
    dev = np.max(np.abs(m - m.conj().T))
    if dev > tol:
        raise NotHermitian(
            f"matrix deviates from Hermitian by {dev:.6g} (tolerance {tol:g})"
        )
    return (m + m.conj().T) / 2.0


class EigenDecomposition(NamedTuple):
    """Ascending eigenvalues and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eig(matrix, tol: float = HERMITICITY_TOL) -> EigenDecomposition:
    """Spectral decomposition of a Hermitian matrix, eigenvalues ascending."""
    m = require_hermitian(matrix, tol)
    w, v = np.linalg.eigh(m)
    return EigenDecomposition(w, v)


class Effect:
    """Hermitian matrix with spectrum in [0, 1], validated on construction.

    Eigenvalues that stray outside the admissible interval by no more than
    the tolerance are snapped onto it (the stored array is then the clamped
    reconstruction), so effects built from honest data never carry -1e-15
    eigenvalue noise into later order comparisons.  Matrices whose spectrum
    is already inside [0, 1] are stored as given.  The array is marked
    read-only.
    """

    __slots__ = ("_matrix",)

    def __init__(self, matrix, tol: float = EFFECT_SPECTRUM_TOL):
        m = require_hermitian(matrix)
        w, v = np.linalg.eigh(m)
        if w[0] < -tol:
            raise SpectrumOutOfRange(float(w[0]), tol)
        if w[-1] > 1.0 + tol:
            raise SpectrumOutOfRange(float(w[-1]), tol)
        if w[0] < 0.0 or w[-1] > 1.0:
            m = (v * np.clip(w, 0.0, 1.0)) @ v.conj().T
            m = (m + m.conj().T) / 2.0
        m.flags.writeable = False
        self._matrix = m

    @classmethod
    def trusted(cls, matrix: np.ndarray) -> "Effect":
        """Wrap an array already known to be a valid effect.

        Skips validation and clamping; only for internal call sites that have
        just produced the matrix from vetted ingredients.
        """
        eff = object.__new__(cls)
        m = np.array(matrix, dtype=complex)
        m.flags.writeable = False
        eff._matrix = m
        return eff

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        m = self._matrix
        if dtype is not None and dtype != m.dtype:
            return m.astype(dtype)
        if copy:
            return m.copy()
        return m

    def __repr__(self) -> str:
        return f"Effect(dim={self.dim}, trace={float(np.trace(self._matrix).real):.6g})"


def as_matrix(value) -> np.ndarray:
    """Underlying ndarray of an effect, or the input coerced to complex."""
    if isinstance(value, Effect):
        return value.matrix
    return np.asarray(value, dtype=complex)


def as_effect(value, tol: float = EFFECT_SPECTRUM_TOL) -> Effect:
    """Coerce to a validated Effect; a given Effect passes through unchanged."""
    if isinstance(value, Effect):
        return value
    return Effect(value, tol)


def effect_validate(matrix, tol: float = EFFECT_SPECTRUM_TOL) -> Effect:
    """Validate an array as an effect.

    Raises NotHermitian or SpectrumOutOfRange with the offending quantity.
    """
    return Effect(matrix, tol)


def clamped_effect(matrix) -> Effect:
    """Clamp all eigenvalues into [0, 1] and wrap the result.

    Unlike the Effect constructor this never raises on out-of-range spectra;
    use it to round a near-effect produced by a numerical solve onto the set
    of exact effects.
    """
    m = require_hermitian(matrix)
    w, v = np.linalg.eigh(m)
    clamped = (v * np.clip(w, 0.0, 1.0)) @ v.conj().T
    return Effect.trusted((clamped + clamped.conj().T) / 2.0)


def identity_effect(dim: int) -> Effect:
    return Effect.trusted(np.eye(dim, dtype=complex))


def zero_effect(dim: int) -> Effect:
    return Effect.trusted(np.zeros((dim, dim), dtype=complex))


def orthocomplement(a) -> Effect:
    """The complementary effect I - A."""
    e = as_effect(a)
    return Effect.trusted(np.eye(e.dim, dtype=complex) - e.matrix)


def trace(matrix) -> float:
    return float(np.trace(as_matrix(matrix)).real)


def spectrum(matrix, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix."""
    return np.linalg.eigvalsh(require_hermitian(matrix, tol))


def operator_norm(matrix) -> float:
    """Largest singular value; for Hermitian input the largest |eigenvalue|."""
    m = _as_square_array(matrix)
    return float(np.linalg.norm(m, 2))


def loewner_leq(a, b, tol: float = ORDER_TOL) -> bool:
    """Whether A <= B in the positive semidefinite order, up to tolerance.

    True iff the smallest eigenvalue of B - A is at least -tol.
    """
    d = as_matrix(b) - as_matrix(a)
    d = require_hermitian(d, tol=np.inf)  # difference of Hermitians; no check
    return bool(np.linalg.eigvalsh(d)[0] >= -tol)


def strictly_less(a, b, tol: float = ORDER_TOL) -> bool:
    """Whether B - A is positive definite with margin strictly above tol."""
    d = as_matrix(b) - as_matrix(a)
    d = (d + d.conj().T) / 2.0
    return bool(np.linalg.eigvalsh(d)[0] > tol)


def psd_part(matrix) -> np.ndarray:
    """Projection onto the positive semidefinite cone in Frobenius norm.

    Clips negative eigenvalues to zero.  Idempotent at the 1e-12 level; PSD
    inputs are returned symmetrised but otherwise unchanged.
    """
    m = require_hermitian(matrix)
    n = m.shape[0]
    if n == 2:
        # Closed form: a 2x2 Hermitian with eigenvalues lo <= hi and lo < 0
        # projects to hi/(hi - lo) * (M - lo*I); other sign cases are trivial.
        half_tr = (m[0, 0].real + m[1, 1].real) / 2.0
        disc = np.hypot((m[0, 0].real - m[1, 1].real) / 2.0, abs(m[0, 1]))
        lo = half_tr - disc
        hi = half_tr + disc
        if lo >= 0.0:
            return m
        if hi <= 0.0:
            return np.zeros_like(m)
        scale = hi / (hi - lo)
        out = scale * (m - lo * np.eye(2))
        return (out + out.conj().T) / 2.0
    w, v = np.linalg.eigh(m)
    if w[0] >= 0.0:
        return m
    out = (v * np.clip(w, 0.0, None)) @ v.conj().T
    return (out + out.conj().T) / 2.0


def psd_project(matrix) -> np.ndarray:
    """Alias of psd_part, named for callers thinking of it as a projection."""
    return psd_part(matrix)


def sqrt_psd(matrix) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix.

    Eigenvalues in [-1e-12, 0) are treated as zero.
    """
    m = require_hermitian(matrix)
    w, v = np.linalg.eigh(m)
    if w[0] < -1e-12:
        raise ValueError(f"matrix is not PSD: smallest eigenvalue {w[0]:.6g}")
    out = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return (out + out.conj().T) / 2.0


def direct_sum(blocks: Sequence) -> np.ndarray:
    """Block-diagonal matrix assembled from Hermitian blocks."""
    mats = [as_matrix(b) for b in blocks]
    if not mats:
        raise ValueError("direct_sum needs at least one block")
    total = sum(m.shape[0] for m in mats)
    out = np.zeros((total, total), dtype=complex)
    at = 0
    for m in mats:
        k = m.shape[0]
        out[at:at + k, at:at + k] = m
        at += k
    return out


def conjugate(a, unitary, transpose: bool = False) -> Effect:
    """Map A to U A U* (optionally transposing A first).

    The transpose-then-conjugate form gives the antiunitary counterpart of
    the same symmetry.  The unitary is checked to 1e-10.
    """
    e = as_effect(a)
    u = require_unitary(unitary)
    m = e.matrix.T if transpose else e.matrix
    out = u @ m @ u.conj().T
    return Effect.trusted((out + out.conj().T) / 2.0)


def require_unitary(u, tol: float = 1e-10) -> np.ndarray:
    """Check ||U*U - I||_F <= tol and return U as a complex array."""
    m = _as_square_array(u)
    dev = np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0]))
    if dev > tol:
        raise ValueError(f"matrix is not unitary: ||U*U - I|| = {dev:.6g}")
    return m


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_unitary(dim: int, seed) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix.

    The R factor's diagonal phases are divided out, which is what makes the
    distribution Haar rather than merely orthogonally invariant.
    """
    rng = _rng(seed)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_effect(dim: int, stratum: tuple[int, int] | None = None, *, seed) -> Effect:
    """Random effect, optionally with a prescribed eigenvalue profile.

    ``stratum=(p, q)`` fixes the multiplicity of eigenvalue 1 to p and of
    eigenvalue 0 to q; the remaining eigenvalues are drawn uniformly from the
    open interval, at least INTERIOR_MARGIN away from both ends.  Without a
    stratum all eigenvalues are interior, i.e. the effect lands in the (0, 0)
    stratum.
    """
    if dim < 1:
        raise ValueError("dim must be positive")
    if stratum is None:
        p, q = 0, 0
    else:
        p, q = stratum
        if p < 0 or q < 0 or p + q > dim:
            raise ValueError(f"stratum {stratum} does not fit dimension {dim}")
    rng = _rng(seed)
    interior = dim - p - q
    lo, hi = INTERIOR_MARGIN, 1.0 - INTERIOR_MARGIN
    vals = np.concatenate([
        np.ones(p),
        lo + (hi - lo) * rng.random(interior),
        np.zeros(q),
    ])
    u = random_unitary(dim, rng)
    m = (u * vals) @ u.conj().T
    return Effect.trusted((m + m.conj().T) / 2.0)


def random_projection(dim: int, rank: int, seed) -> Effect:
    """Random rank-r orthogonal projection, Haar-uniform over subspaces."""
    if not 0 <= rank <= dim:
        raise ValueError(f"rank {rank} does not fit dimension {dim}")
    u = random_unitary(dim, _rng(seed))
    cols = u[:, :rank]
    m = cols @ cols.conj().T
    return Effect.trusted((m + m.conj().T) / 2.0)
