"""Complex-coefficient state-space algebra.

Everything downstream (spectral factorization, loop shifting, the two-disk
solver, the benchmark) manipulates rational transfer matrices through the
:class:`StateSpaceModel` quadruple ``(A, B, C, D)`` with

    G(s) = D + C (sI - A)^{-1} B,

where all four matrices are complex.  The module provides evaluation, the two
conjugations ``G^H(s) = G(-s*)^dagger`` and ``G(s*)^dagger``, interconnection,
exact Kalman minimal realization, stability margins and a certified
H-infinity norm (bisection on the Hamiltonian imaginary-eigenvalue test,
carried out directly in complex arithmetic).

All functions are pure; models are immutable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    IllPosedInterconnectionError,
    SingularResolventError,
    UnstableSystemError,
)

__all__ = [
    "StateSpaceModel",
    "FrequencyGrid",
    "StabilityMargin",
    "evaluate",
    "frequency_response",
    "para_conjugate",
    "mirror_adjoint",
    "lft_lower",
    "connect",
    "series",
    "parallel",
    "hstack",
    "vstack",
    "block_diag",
    "minimal_realization",
    "hinf_norm",
    "stability_margin",
    "spectral_abscissa",
    "default_grid",
    "ss_to_dict",
    "ss_from_dict",
    "ss_to_json",
    "ss_from_json",
]

# Relative threshold for all SVD-based rank decisions.
RANK_RTOL = 1e-9


def _as_complex_matrix(x, rows=None, cols=None) -> np.ndarray:
    a = np.atleast_2d(np.asarray(x, dtype=complex))
    if rows is not None and a.shape[0] != rows:
        raise DimensionMismatchError(f"expected {rows} rows, got {a.shape[0]}")
    if cols is not None and a.shape[1] != cols:
        raise DimensionMismatchError(f"expected {cols} columns, got {a.shape[1]}")
    return a


@dataclass(frozen=True)
class StateSpaceModel:
    """Immutable complex state-space realization of a rational transfer matrix."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        A = _as_complex_matrix(self.A)
        if A.size == 0:
            A = A.reshape(0, 0)
        if A.shape[0] != A.shape[1]:
            raise DimensionMismatchError(f"A must be square, got {A.shape}")
        n = A.shape[0]
        B = _as_complex_matrix(self.B) if np.size(self.B) or n == 0 else np.zeros((n, 0))
        C = _as_complex_matrix(self.C)
        D = _as_complex_matrix(self.D)
        if n == 0:
            B = np.asarray(B, dtype=complex).reshape(0, D.shape[1])
            C = np.asarray(C, dtype=complex).reshape(D.shape[0], 0)
        if B.shape[0] != n:
            raise DimensionMismatchError(f"B has {B.shape[0]} rows, expected {n}")
        if C.shape[1] != n:
            raise DimensionMismatchError(f"C has {C.shape[1]} columns, expected {n}")
        if D.shape != (C.shape[0], B.shape[1]):
            raise DimensionMismatchError(
                f"D has shape {D.shape}, expected {(C.shape[0], B.shape[1])}"
            )
        for name, m in (("A", A), ("B", B), ("C", C), ("D", D)):
            m = np.ascontiguousarray(m)
            m.setflags(write=False)
            object.__setattr__(self, name, m)

    @property
    def n_states(self) -> int:
        return self.A.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.D.shape[1]

    @property
    def n_outputs(self) -> int:
        return self.D.shape[0]

    @staticmethod
    def static(D) -> "StateSpaceModel":
        """Zero-state system with constant transfer matrix D."""
        D = _as_complex_matrix(D)
        return StateSpaceModel(
            np.zeros((0, 0)), np.zeros((0, D.shape[1])), np.zeros((D.shape[0], 0)), D
        )

    @staticmethod
    def identity(k: int) -> "StateSpaceModel":
        return StateSpaceModel.static(np.eye(k))

    @staticmethod
    def zero(n_outputs: int, n_inputs: int) -> "StateSpaceModel":
        return StateSpaceModel.static(np.zeros((n_outputs, n_inputs)))

    def __repr__(self):
        return (
            f"StateSpaceModel(n_states={self.n_states}, "
            f"n_outputs={self.n_outputs}, n_inputs={self.n_inputs})"
        )


@dataclass(frozen=True)
class FrequencyGrid:
    """Finite, strictly increasing grid of real angular frequencies (rad/s)."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).ravel()
        if pts.size == 0:
            raise ValueError("frequency grid must be non-empty")
        if not np.all(np.isfinite(pts)):
            raise ValueError("frequency grid must be finite")
        if not np.all(np.diff(pts) > 0):
            raise ValueError("frequency grid must be strictly increasing")
        pts = np.ascontiguousarray(pts)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.size

    def __iter__(self):
        return iter(self.points)


@dataclass(frozen=True)
class StabilityMargin:
    """Analyticity strip: all poles satisfy Re s < -tau with tau > 0."""

    tau: float

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"stability margin must be positive, got {self.tau}")


def evaluate(sys: StateSpaceModel, s: complex) -> np.ndarray:
    """Transfer matrix D + C (sI - A)^{-1} B at a single complex point."""
    if sys.n_states == 0:
        return sys.D.copy()
    M = s * np.eye(sys.n_states) - sys.A
    try:
        X = np.linalg.solve(M, sys.B)
    except np.linalg.LinAlgError as exc:
        raise SingularResolventError(f"sI - A singular at s={s}") from exc
    if not np.all(np.isfinite(X)):
        raise SingularResolventError(f"sI - A numerically singular at s={s}")
    return sys.D + sys.C @ X


def frequency_response(sys: StateSpaceModel, grid) -> np.ndarray:
    """Stacked transfer matrices on the imaginary axis, shape (L, ny, nu)."""
    pts = grid.points if isinstance(grid, FrequencyGrid) else np.asarray(grid, dtype=float)
    return np.stack([evaluate(sys, 1j * w) for w in pts])


def para_conjugate(sys: StateSpaceModel) -> StateSpaceModel:
    """Realization of G^H(s) = G(-s*)^dagger; on the axis G^H(iw) = G(iw)^dagger."""
    return StateSpaceModel(
        -sys.A.conj().T, -sys.C.conj().T, sys.B.conj().T, sys.D.conj().T
    )


def mirror_adjoint(sys: StateSpaceModel) -> StateSpaceModel:
    """Realization of G(s*)^dagger; conjugates the spectrum, preserves real parts."""
    return StateSpaceModel(
        sys.A.conj().T, sys.C.conj().T, sys.B.conj().T, sys.D.conj().T
    )


def _split(sys: StateSpaceModel, n_out2: int, n_in2: int):
    """Partition a 2x2 block plant by its last n_out2 outputs / n_in2 inputs."""
    p1 = sys.n_outputs - n_out2
    m1 = sys.n_inputs - n_in2
    if p1 < 0 or m1 < 0:
        raise DimensionMismatchError("partition exceeds plant dimensions")
    C1, C2 = sys.C[:p1], sys.C[p1:]
    B1, B2 = sys.B[:, :m1], sys.B[:, m1:]
    D11, D12 = sys.D[:p1, :m1], sys.D[:p1, m1:]
    D21, D22 = sys.D[p1:, :m1], sys.D[p1:, m1:]
    return B1, B2, C1, C2, D11, D12, D21, D22


def lft_lower(plant: StateSpaceModel, ctrl: StateSpaceModel) -> StateSpaceModel:
    """Lower linear fractional transformation F_l(P, C).

    The plant is partitioned 2x2 by the controller dimensions: the last
    ``ctrl.n_outputs`` plant inputs feed from the controller and the last
    ``ctrl.n_inputs`` plant outputs feed it.  Raises
    :class:`IllPosedInterconnectionError` when I - D22 Dc is singular.
    """
    n_in2 = ctrl.n_outputs
    n_out2 = ctrl.n_inputs
    B1, B2, C1, C2, D11, D12, D21, D22 = _split(plant, n_out2, n_in2)
    A, Ac, Bc, Cc, Dc = plant.A, ctrl.A, ctrl.B, ctrl.C, ctrl.D
    E = np.eye(n_out2) - D22 @ Dc
    if n_out2 and np.linalg.cond(E) > 1e12:
        raise IllPosedInterconnectionError("I - D22 Dc is numerically singular")
    Einv = np.linalg.inv(E) if n_out2 else E
    # y2 = Einv (C2 x + D21 w + D22 Cc xc);  u2 = Cc xc + Dc y2
    K = Dc @ Einv
    A_cl = np.block(
        [
            [A + B2 @ K @ C2, B2 @ (Cc + K @ D22 @ Cc)],
            [Bc @ Einv @ C2, Ac + Bc @ Einv @ D22 @ Cc],
        ]
    )
    B_cl = np.vstack([B1 + B2 @ K @ D21, Bc @ Einv @ D21])
    C_cl = np.hstack([C1 + D12 @ K @ C2, D12 @ (Cc + K @ D22 @ Cc)])
    D_cl = D11 + D12 @ K @ D21
    return StateSpaceModel(A_cl, B_cl, C_cl, D_cl)


def series(a: StateSpaceModel, b: StateSpaceModel) -> StateSpaceModel:
    """Cascade b(s) a(s): signal passes through `a` first, then `b`."""
    if a.n_outputs != b.n_inputs:
        raise DimensionMismatchError(
            f"series: a has {a.n_outputs} outputs, b expects {b.n_inputs} inputs"
        )
    A = np.block(
        [
            [a.A, np.zeros((a.n_states, b.n_states))],
            [b.B @ a.C, b.A],
        ]
    )
    B = np.vstack([a.B, b.B @ a.D])
    C = np.hstack([b.D @ a.C, b.C])
    return StateSpaceModel(A, B, C, b.D @ a.D)


def parallel(a: StateSpaceModel, b: StateSpaceModel) -> StateSpaceModel:
    """Sum a(s) + b(s) with shared inputs and outputs."""
    if a.n_inputs != b.n_inputs or a.n_outputs != b.n_outputs:
        raise DimensionMismatchError("parallel: dimensions must match")
    A = _dsum(a.A, b.A)
    return StateSpaceModel(A, np.vstack([a.B, b.B]), np.hstack([a.C, b.C]), a.D + b.D)


def _dsum(*blocks):
    n = sum(b.shape[0] for b in blocks)
    m = sum(b.shape[1] for b in blocks)
    out = np.zeros((n, m), dtype=complex)
    i = j = 0
    for b in blocks:
        out[i : i + b.shape[0], j : j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def hstack(a: StateSpaceModel, b: StateSpaceModel) -> StateSpaceModel:
    """Block row [a b]: stacked inputs, shared outputs."""
    if a.n_outputs != b.n_outputs:
        raise DimensionMismatchError("hstack: output dimensions must match")
    return StateSpaceModel(
        _dsum(a.A, b.A), _dsum(a.B, b.B), np.hstack([a.C, b.C]), np.hstack([a.D, b.D])
    )


def vstack(a: StateSpaceModel, b: StateSpaceModel) -> StateSpaceModel:
    """Block column [a; b]: shared inputs, stacked outputs."""
    if a.n_inputs != b.n_inputs:
        raise DimensionMismatchError("vstack: input dimensions must match")
    return StateSpaceModel(
        _dsum(a.A, b.A), np.vstack([a.B, b.B]), _dsum(a.C, b.C), np.vstack([a.D, b.D])
    )


def block_diag(a: StateSpaceModel, b: StateSpaceModel) -> StateSpaceModel:
    """diag(a, b): independent channels."""
    return StateSpaceModel(
        _dsum(a.A, b.A), _dsum(a.B, b.B), _dsum(a.C, b.C), _dsum(a.D, b.D)
    )


_CONNECT_MODES = {
    "series": series,
    "parallel": parallel,
    "hstack": hstack,
    "vstack": vstack,
    "diag": block_diag,
    "stack": block_diag,
}


def connect(a: StateSpaceModel, b: StateSpaceModel, mode: str) -> StateSpaceModel:
    """Interconnect two systems: series | parallel | hstack | vstack | diag."""
    try:
        op = _CONNECT_MODES[mode]
    except KeyError:
        raise ValueError(f"unknown connect mode {mode!r}") from None
    return op(a, b)


def _range_basis(M: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis of the column space, rank by relative SVD threshold."""
    if M.size == 0:
        return np.zeros((M.shape[0], 0), dtype=complex)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((M.shape[0], 0), dtype=complex)
    r = int(np.sum(s > tol * s[0]))
    return U[:, :r]


def _controllable_subspace(A: np.ndarray, B: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis of the smallest A-invariant subspace containing range(B)."""
    U = _range_basis(B, tol)
    for _ in range(A.shape[0]):
        U_next = _range_basis(np.hstack([U, A @ U]) if U.size else B, tol)
        if U_next.shape[1] == U.shape[1]:
            break
        U = U_next
    return U


def minimal_realization(sys: StateSpaceModel, tol: float = RANK_RTOL) -> StateSpaceModel:
    """Controllable and observable realization via Kalman staircase SVDs.

    Frequency response is preserved to working precision; the state dimension
    never increases.  ``tol`` is the relative rank threshold.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if sys.n_states == 0:
        return sys
    # controllability reduction
    U = _controllable_subspace(sys.A, sys.B, tol)
    A = U.conj().T @ sys.A @ U
    B = U.conj().T @ sys.B
    C = sys.C @ U
    # observability reduction = controllability of the adjoint
    V = _controllable_subspace(A.conj().T, C.conj().T, tol)
    A = V.conj().T @ A @ V
    B = V.conj().T @ B
    C = C @ V
    return StateSpaceModel(A, B, C, sys.D)


def spectral_abscissa(sys: StateSpaceModel) -> float:
    """max Re(eig(A)); -inf for static systems."""
    if sys.n_states == 0:
        return -np.inf
    return float(np.max(np.linalg.eigvals(sys.A).real))


def stability_margin(sys: StateSpaceModel):
    """tau = -max Re(eig(A)) when positive, else None.

    For a minimal realization this certifies analyticity in Re s > -tau.
    Static systems are entire; they report +inf.
    """
    alpha = spectral_abscissa(sys)
    if alpha == -np.inf:
        return np.inf
    tau = -alpha
    return tau if tau > 0 else None


def _has_imaginary_eigenvalue(sys: StateSpaceModel, gamma: float, atol: float) -> bool:
    """Hamiltonian test: does sigma_max(G(iw)) reach gamma for some finite w?"""
    A, B, C, D = sys.A, sys.B, sys.C, sys.D
    R = gamma**2 * np.eye(sys.n_inputs) - D.conj().T @ D
    Rinv = np.linalg.inv(R)
    Ah = A + B @ Rinv @ D.conj().T @ C
    H = np.block(
        [
            [Ah, B @ Rinv @ B.conj().T],
            [-C.conj().T @ (np.eye(sys.n_outputs) + D @ Rinv @ D.conj().T) @ C,
             -Ah.conj().T],
        ]
    )
    eigs = np.linalg.eigvals(H)
    return bool(np.any(np.abs(eigs.real) <= atol))


def hinf_norm(sys: StateSpaceModel, tol: float = 1e-6) -> float:
    """H-infinity norm of a stable system by Hamiltonian bisection.

    Returns sup_w sigma_max(G(iw)) within relative tolerance ``tol``; raises
    :class:`UnstableSystemError` when A has an eigenvalue with Re >= 0.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if sys.n_states == 0 or not np.any(sys.B) or not np.any(sys.C):
        return float(np.linalg.svd(sys.D, compute_uv=False)[0]) if sys.D.size else 0.0
    tau = stability_margin(sys)
    if tau is None:
        raise UnstableSystemError("hinf_norm requires all eigenvalues of A in Re s < 0")
    scale_A = max(np.linalg.norm(sys.A, 2), 1.0)
    atol_imag = 1e-8 * scale_A
    sig_d = float(np.linalg.svd(sys.D, compute_uv=False)[0]) if sys.D.size else 0.0
    # probe a few frequencies to seed the lower bound
    probes = [0.0] + [m * scale_A for m in (0.25, 0.5, 1.0, 2.0)]
    eigs = np.linalg.eigvals(sys.A)
    probes += list(eigs.imag)
    lo = sig_d
    for w in probes:
        sv = np.linalg.svd(evaluate(sys, 1j * w), compute_uv=False)
        lo = max(lo, float(sv[0]))
    hi = sig_d + 2.0 * np.linalg.norm(sys.C, 2) * np.linalg.norm(sys.B, 2) / tau + tol
    hi = max(hi, lo * (1 + 10 * tol) + tol)
    # the bracket bound is heuristic for non-normal A; certify and expand if needed
    for _ in range(60):
        if not _has_imaginary_eigenvalue(sys, hi, atol_imag):
            break
        hi *= 2.0
    else:
        raise UnstableSystemError("hinf_norm bracket expansion failed")
    lo = max(lo, sig_d)
    while hi - lo > tol * max(lo, 1e-300):
        mid = 0.5 * (lo + hi)
        if mid <= sig_d:
            lo = mid
            break
        if _has_imaginary_eigenvalue(sys, mid, atol_imag):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def default_grid(
    center: float = 0.0,
    span: float = 1.0,
    n_points: int = 400,
    decades: float = 6.0,
) -> FrequencyGrid:
    """Verification grid: linear coverage of [center-3*span, center+3*span]
    plus a logarithmic cluster around ``center`` (features concentrate there)."""
    span = abs(span) if span else 1.0
    n_lin = n_points // 2
    n_log = n_points - n_lin
    lin = np.linspace(center - 3 * span, center + 3 * span, n_lin)
    offs = np.logspace(np.log10(span) - decades, np.log10(3 * span), n_log // 2)
    log_pts = np.concatenate([center - offs, center + offs])
    pts = np.unique(np.concatenate([lin, log_pts, [center]]))
    return FrequencyGrid(pts)


def grid_for_systems(systems, n_points: int = 200) -> FrequencyGrid:
    """Log+linear grid spanning the pole frequencies of the given systems."""
    imag_parts, scales = [0.0], [1.0]
    for s in systems:
        if s.n_states:
            eigs = np.linalg.eigvals(s.A)
            imag_parts += list(eigs.imag)
            scales += list(np.abs(eigs))
    center = float(np.median(imag_parts))
    span = float(max(scales))
    return default_grid(center=center, span=span, n_points=n_points)


# --- JSON serialization: complex entries as [re, im], row-major matrices ---


def _matrix_to_lists(M: np.ndarray):
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def _matrix_from_lists(rows, what: str) -> np.ndarray:
    try:
        return np.array(
            [[complex(re, im) for re, im in row] for row in rows], dtype=complex
        ).reshape(len(rows), -1)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"malformed matrix field {what!r}") from exc


def ss_to_dict(sys: StateSpaceModel) -> dict:
    return {
        "A": _matrix_to_lists(sys.A),
        "B": _matrix_to_lists(sys.B),
        "C": _matrix_to_lists(sys.C),
        "D": _matrix_to_lists(sys.D),
    }


def ss_from_dict(d: dict) -> StateSpaceModel:
    mats = {}
    for key in ("A", "B", "C", "D"):
        if key not in d:
            raise ValueError(f"state-space document missing field {key!r}")
        rows = d[key]
        if len(rows) == 0:
            mats[key] = np.zeros((0, 0), dtype=complex)
        else:
            mats[key] = _matrix_from_lists(rows, key)
    n = mats["A"].shape[0]
    if mats["B"].size == 0:
        mats["B"] = mats["B"].reshape(n, -1) if n else np.zeros((0, mats["D"].shape[1]))
    if mats["C"].size == 0:
        mats["C"] = mats["C"].reshape(-1, n) if n else np.zeros((mats["D"].shape[0], 0))
    return StateSpaceModel(mats["A"], mats["B"], mats["C"], mats["D"])


def ss_to_json(sys: StateSpaceModel) -> str:
    return json.dumps(ss_to_dict(sys))


def ss_from_json(text: str) -> StateSpaceModel:
    return ss_from_dict(json.loads(text))
