"""Dense spectral utilities: eigenvalues, Schur-stability tests, singular
values, and the peak angle of unit-circle modes.

Everything here is a pure function of its arguments; results are
deterministic for a given numeric backend, including the eigenvalue
ordering (descending modulus, then ascending argument).
"""

import numpy as np

from .errors import AssumptionError, DimensionError, NumericError

#: eigenvalues with | |lambda| - 1 | below this count as on the unit circle
UNIT_CIRCLE_TOL = 1e-7

#: default strict-stability margin: Schur stable means max |lambda| < 1 - tol
SCHUR_TOL = 1e-9


def _square(M):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {M.shape}")
    if M.shape[0] < 1:
        raise DimensionError("matrix order must be at least 1")
    if not np.all(np.isfinite(M)):
        raise NumericError("matrix has non-finite entries")
    return M


def eigenvalues(M):
    """All eigenvalues of a square matrix in a reproducible order.

    Sorted by descending modulus, ties broken by ascending argument, so
    repeated calls on identical input give identical vectors.
    """
    M = _square(M)
    try:
        vals = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigenvalue iteration failed for order-{M.shape[0]} "
                           f"matrix: {exc}") from exc
    order = np.lexsort((np.angle(vals), -np.abs(vals)))
    return vals[order]


def spectral_radius(M):
    """Largest eigenvalue modulus of a square matrix."""
    return float(np.abs(eigenvalues(M)).max())


def is_schur_stable(M, tol=SCHUR_TOL):
    """True iff every eigenvalue of M lies strictly inside the unit circle.

    Stability is tested on the open disc with margin `tol`:
    max |lambda| < 1 - tol.  Boundary eigenvalues never count as stable.
    """
    if tol < 0:
        raise ValueError(f"tol must be >= 0, got {tol}")
    return bool(np.abs(eigenvalues(M)).max() < 1.0 - tol)


def omega_max(A, tol=UNIT_CIRCLE_TOL):
    """Largest angle (radians, in [0, pi]) of any unit-circle eigenvalue of A.

    Returns 0.0 when every eigenvalue has modulus below 1 - tol.  Eigenvalues
    with modulus in [1 - tol, 1 + tol] are treated as on the circle; anything
    beyond 1 + tol violates the neutrally-stable model assumption and raises
    AssumptionError, since the delay tolerance is undefined for such models.
    """
    vals = eigenvalues(A)
    mods = np.abs(vals)
    if np.any(mods > 1.0 + tol):
        raise AssumptionError(
            "matrix has an eigenvalue outside the closed unit disc "
            f"(max modulus {mods.max():.12g}); delay tolerance undefined")
    on_circle = np.abs(mods - 1.0) <= tol
    if not np.any(on_circle):
        return 0.0
    return float(np.abs(np.angle(vals[on_circle])).max())


def min_singular_value(M):
    """Smallest singular value of a real or complex matrix (any shape)."""
    M = np.asarray(M)
    if M.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NumericError("matrix has non-finite entries")
    try:
        return float(np.linalg.svd(M, compute_uv=False)[-1])
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD failed: {exc}") from exc
