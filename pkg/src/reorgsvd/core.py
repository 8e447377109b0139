"""Dense-matrix primitives: validation, Frobenius norm, a one-sided Jacobi
thin SVD, and rank-k truncation with error and parameter accounting.

All public operations accept anything :func:`numpy.asarray` understands and
validate it up front, so the rest of the package can assume a well-formed,
finite, real, 2-D float64 array.  Factorizations and reports are frozen
dataclasses; nothing in this module mutates its inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SvdConvergenceError",
    "SvdFactorization",
    "ApproxReport",
    "as_matrix",
    "frobenius_norm",
    "thin_svd",
    "rank_k_approx",
    "relative_error",
    "parameter_count",
    "approx_report",
]

# Sweep cap and stopping threshold for the one-sided Jacobi iteration.  The
# threshold is relative to the Frobenius norm of the input, so scaling a
# matrix does not change how hard it is to converge.
JACOBI_MAX_SWEEPS = 60
JACOBI_REL_TOL = 1e-12

# Column norms at or below NULL_COLUMN_RTOL * ||A||_F are treated as a
# numerically zero singular value: the singular value is reported as the
# tiny norm that was measured, but the left factor column is replaced by a
# unit vector completed against the columns already accepted, because
# normalizing a vector of that size would amplify rounding noise.
NULL_COLUMN_RTOL = 1e-13


class SvdConvergenceError(RuntimeError):
    """Jacobi sweep cap exhausted before the off-diagonal mass went under
    the stopping threshold."""


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a C-contiguous float64 2-D array and validate it.

    Rejects empty axes and non-finite entries.  Returns a copy unless the
    input already satisfies every requirement, so callers may treat the
    result as their own.
    """
    m = np.ascontiguousarray(a, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got {m.ndim}-D")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"{name} must have positive dimensions, got {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError(f"{name} contains non-finite entries")
    return m


def frobenius_norm(a) -> float:
    """Square root of the sum of squared entries."""
    m = as_matrix(a)
    # Accumulate in the flat dot product; fast and accurate for float64.
    flat = m.ravel()
    return math.sqrt(float(flat @ flat))


@dataclass(frozen=True)
class SvdFactorization:
    """Thin SVD ``a = u @ diag(sigma) @ v.T``.

    ``u`` is rows x r, ``v`` is cols x r, ``sigma`` has length
    r = min(rows, cols) and is nonnegative and non-increasing.  Numerically
    zero singular values are kept (as the tiny measured values) so the
    factor shapes depend only on the input shape.
    """

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        r = self.sigma.shape[0]
        if self.u.ndim != 2 or self.v.ndim != 2 or self.sigma.ndim != 1:
            raise ValueError("factor arrays have wrong dimensionality")
        if self.u.shape[1] != r or self.v.shape[1] != r:
            raise ValueError("factor column counts disagree with sigma")
        if r and (self.sigma[0] < 0 or np.any(np.diff(self.sigma) > 0)):
            raise ValueError("sigma must be nonnegative and non-increasing")

    @property
    def rank_limit(self) -> int:
        """Number of singular triples stored, min(rows, cols)."""
        return self.sigma.shape[0]


def _complete_orthonormal(u: np.ndarray, filled: np.ndarray) -> None:
    """Fill the columns of ``u`` where ``filled`` is False with unit vectors
    orthogonal to every column already present.

    Candidates are standard basis vectors; the one with the largest residual
    after projecting out the accepted columns wins, which is safe even when
    the accepted columns nearly contain some basis vectors.
    """
    m = u.shape[0]
    eye = np.eye(m)
    for j in np.flatnonzero(~filled):
        have = u[:, filled]
        resid = eye - have @ (have.T @ eye)
        pick = int(np.argmax((resid * resid).sum(axis=0)))
        w = resid[:, pick]
        # Second projection pass cleans up loss of orthogonality from the
        # first when the chosen residual was small.
        w = w - have @ (have.T @ w)
        u[:, j] = w / math.sqrt(float(w @ w))
        filled[j] = True


def thin_svd(a) -> SvdFactorization:
    """Thin SVD by one-sided Jacobi rotations.

    Works on the tall orientation (the input is transposed first when it is
    wide, and the factors are swapped back at the end).  Each sweep visits
    every column pair (i, j), i < j, in row-major order and applies the
    rotation that orthogonalizes the two columns.  A pair is skipped when its
    inner product is negligible both against the absolute floor
    ``(JACOBI_REL_TOL * ||a||_F)**2`` and against the two column norms.
    Convergence is declared after a sweep with no rotations; more than
    ``JACOBI_MAX_SWEEPS`` sweeps raises :class:`SvdConvergenceError`.
    """
    m0 = as_matrix(a)
    transposed = m0.shape[0] < m0.shape[1]
    if transposed:
        m0 = m0.T
    tm, tn = m0.shape

    # Column-contiguous working copy: every rotation touches whole columns.
    # Must be a real copy, never a view of the input; the rotations run in
    # place.
    work = np.array(m0, order="F", copy=True)
    v = np.eye(tn, order="F")

    norm_f = math.sqrt(float((work * work).sum()))
    floor = (JACOBI_REL_TOL * norm_f) ** 2
    rel2 = JACOBI_REL_TOL * JACOBI_REL_TOL

    sweeps = 0
    while True:
        if sweeps > JACOBI_MAX_SWEEPS:
            raise SvdConvergenceError(
                f"one-sided Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps"
            )
        sweeps += 1
        # Fresh squared column norms each sweep; the in-sweep updates below
        # are cheap estimates that drift over many rotations.
        norms = (work * work).sum(axis=0)
        rotated = False
        for i in range(tn - 1):
            ci = work[:, i]
            vi = v[:, i]
            for j in range(i + 1, tn):
                cj = work[:, j]
                apq = float(ci @ cj)
                app = norms[i]
                aqq = norms[j]
                if abs(apq) <= floor or apq * apq <= rel2 * app * aqq:
                    continue
                rotated = True
                zeta = (aqq - app) / (2.0 * apq)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                wi = c * ci - s * cj
                cj *= c
                cj += s * ci
                ci[:] = wi
                wv = c * vi - s * v[:, j]
                v[:, j] *= c
                v[:, j] += s * vi
                vi[:] = wv
                norms[i] = app - t * apq
                norms[j] = aqq + t * apq
        if not rotated:
            break

    sig = np.sqrt((work * work).sum(axis=0))
    order = np.argsort(-sig, kind="stable")
    sig = sig[order]
    work = work[:, order]
    v = v[:, order]

    u = np.empty((tm, tn))
    filled = sig > norm_f * NULL_COLUMN_RTOL
    for j in np.flatnonzero(filled):
        u[:, j] = work[:, j] / sig[j]
    if not filled.all():
        _complete_orthonormal(u, filled)

    u = np.ascontiguousarray(u)
    v = np.ascontiguousarray(v)
    if transposed:
        return SvdFactorization(u=v, sigma=sig, v=u)
    return SvdFactorization(u=u, sigma=sig, v=v)


def rank_k_approx(f: SvdFactorization, k: int) -> np.ndarray:
    """Best rank-k approximation assembled from the leading k triples."""
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise ValueError(f"rank must be an integer, got {k!r}")
    if k < 1 or k > f.rank_limit:
        raise ValueError(f"rank must be in [1, {f.rank_limit}], got {k}")
    uk = f.u[:, :k]
    vk = f.v[:, :k]
    return (uk * f.sigma[:k]) @ vk.T


def relative_error(a, b) -> float:
    """``||a - b||_F / ||a||_F``; requires matching shapes and nonzero ``a``."""
    ma = as_matrix(a, "a")
    mb = as_matrix(b, "b")
    if ma.shape != mb.shape:
        raise ValueError(f"shape mismatch: {ma.shape} vs {mb.shape}")
    denom = frobenius_norm(ma)
    if denom == 0.0:
        raise ValueError("relative error undefined for a zero matrix")
    return frobenius_norm(ma - mb) / denom


def parameter_count(rows: int, cols: int, k: int) -> int:
    """Storage cost of a rank-k factorization of a rows x cols matrix:
    k * (rows + cols) scalars, counting both factor panels."""
    for name, val in (("rows", rows), ("cols", cols), ("k", k)):
        if not isinstance(val, (int, np.integer)) or isinstance(val, bool) or val < 1:
            raise ValueError(f"{name} must be a positive integer, got {val!r}")
    return int(k) * (int(rows) + int(cols))


@dataclass(frozen=True)
class ApproxReport:
    """One rank-k approximation outcome for a single matrix."""

    rows: int
    cols: int
    rank: int
    parameters: int
    abs_error_sq: float
    rel_error: float


def approx_report(a, k: int, f: SvdFactorization | None = None) -> ApproxReport:
    """Approximate ``a`` at rank ``k`` and report the cost and the error.

    Pass a precomputed factorization ``f`` of ``a`` to amortize the SVD
    across several ranks.  ``a`` must be nonzero for the relative error to
    be defined.
    """
    m = as_matrix(a)
    if f is None:
        f = thin_svd(m)
    y = rank_k_approx(f, k)
    diff = (m - y).ravel()
    abs_sq = float(diff @ diff)
    return ApproxReport(
        rows=m.shape[0],
        cols=m.shape[1],
        rank=int(k),
        parameters=parameter_count(m.shape[0], m.shape[1], int(k)),
        abs_error_sq=abs_sq,
        rel_error=math.sqrt(abs_sq) / frobenius_norm(m),
    )
