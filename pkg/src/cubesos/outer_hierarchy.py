"""Sum-of-squares (outer) hierarchy bounds via semidefinite programming.

The order-r lower bound on min f over {0,1}^n is computed in Gram form:

    maximize   lambda = fhat(0) - tr(G)
    subject to sum_{a XOR b = c} G[a,b] = fhat(c)   for 0 != c, |c| <= 2r,
               G >= 0 over characters of weight <= r,

whose dual is the character-moment problem (moment matrix (y_{a XOR b}),
y_0 = 1). Both are solved together by the embedded dense primal-dual
interior-point method with Nesterov-Todd scaling and Mehrotra
predictor-corrector steps.

The constraint map aggregates matrix entries by the XOR of their character
indices, so the interior-point Schur complement is an XOR autocorrelation of
the scaling matrix and is formed with Walsh-Hadamard transforms over 2^{2n}
points instead of one dense product per constraint.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .config import Config, check_cap
from .cube_fourier import (
    CubePolynomial,
    MatrixPolynomial,
    fwht,
    masks_up_to_weight,
    popcount_table,
    value_table,
)

__all__ = [
    "SdpProblem",
    "SdpSolution",
    "SolverOptions",
    "SolverError",
    "OuterBoundResult",
    "solve_sdp",
    "outer_cube",
    "outer_matrix",
    "verify_sos_certificate",
    "SosVerification",
]


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverOptions:
    tol_gap: float = 1e-7
    tol_feas: float = 1e-8
    max_iter: int = 200
    step_damping: float = 0.99
    verbose: bool = False


@dataclass(frozen=True)
class SdpProblem:
    """min <C, X> s.t. <A_i, X> = b_i, X >= 0, with dense symmetric data."""

    C: np.ndarray
    constraints: list
    b: np.ndarray

    def __post_init__(self):
        N = self.C.shape[0]
        mats = [self.C, *self.constraints]
        for M in mats:
            if M.shape != (N, N):
                raise ValueError("matrix size mismatch")
            if np.max(np.abs(M - M.T)) > 1e-14 * max(1.0, np.max(np.abs(M))):
                raise ValueError("matrices must be symmetric")
        if len(self.constraints) != len(self.b):
            raise ValueError("need one right-hand side per constraint")
        if len(self.constraints) > N * (N + 1) // 2:
            raise ValueError("more constraints than degrees of freedom")


@dataclass(frozen=True)
class SdpSolution:
    X: np.ndarray
    y: np.ndarray
    Z: np.ndarray
    primal_obj: float
    dual_obj: float
    gap: float
    rel_gap: float
    primal_res: float
    dual_res: float
    iterations: int
    status: str  # optimal | max_iter | infeasible_detected


# ---------------------------------------------------------------------------
# constraint backends


class _DenseConstraints:
    """Explicit list of symmetric constraint matrices."""

    def __init__(self, mats):
        self.mats = [np.asarray(M, dtype=np.float64) for M in mats]
        self.m = len(self.mats)

    def apply(self, X: np.ndarray) -> np.ndarray:
        return np.array([float(np.tensordot(M, X)) for M in self.mats])

    def adjoint(self, y: np.ndarray) -> np.ndarray:
        N = self.mats[0].shape[0]
        out = np.zeros((N, N))
        for yi, M in zip(y, self.mats):
            if yi != 0.0:
                out += yi * M
        return out

    def schur(self, W: np.ndarray) -> np.ndarray:
        mids = [W @ M @ W for M in self.mats]
        S = np.empty((self.m, self.m))
        for i in range(self.m):
            for j in range(i, self.m):
                S[i, j] = S[j, i] = float(np.tensordot(self.mats[i], mids[j]))
        return S


class _XorConstraints:
    """Constraints <E_c, X> = b_c where E_c is the 0/1 indicator of the
    positions (a, b) with a XOR b = c, over a character basis of masks.

    The Schur complement tr(E_c W E_{c'} W) equals the XOR autocorrelation of
    the zero-padded W on F_2^{2n} at shift (c, c'), computed by two
    Walsh-Hadamard transforms of length 4^n.
    """

    def __init__(self, n: int, masks: np.ndarray, classes: np.ndarray):
        self.n = n
        self.masks = masks
        self.classes = classes
        self.m = classes.size
        self.xor = np.bitwise_xor.outer(masks, masks)
        self._xor_flat = self.xor.ravel()

    def apply(self, X: np.ndarray) -> np.ndarray:
        sums = np.bincount(self._xor_flat, weights=X.ravel(), minlength=1 << self.n)
        return sums[self.classes]

    def adjoint(self, y: np.ndarray) -> np.ndarray:
        full = np.zeros(1 << self.n)
        full[self.classes] = y
        return full[self.xor]

    def schur(self, W: np.ndarray) -> np.ndarray:
        size = 1 << self.n
        pad = np.zeros((size, size))
        pad[np.ix_(self.masks, self.masks)] = W
        F = fwht(pad.ravel())
        del pad
        F *= F
        G = fwht(F)
        del F
        G /= float(size) * size
        G = G.reshape(size, size)
        return np.ascontiguousarray(G[np.ix_(self.classes, self.classes)])


# ---------------------------------------------------------------------------
# interior-point core


def _min_eig(A: np.ndarray) -> float:
    N = A.shape[0]
    if N > 600:
        try:
            from scipy.sparse.linalg import eigsh

            w = eigsh(A, k=1, which="SA", tol=1e-6, maxiter=50 * N,
                      return_eigenvectors=False)
            return float(w[0])
        except Exception:
            pass
    return float(np.linalg.eigvalsh(A)[0])


def _max_step(D_scaled: np.ndarray) -> float:
    """Largest alpha with I + alpha * D_scaled >= 0 (capped at 1e6)."""
    lo = _min_eig(D_scaled)
    if lo >= 0.0:
        return 1e6
    return -1.0 / lo


def _solve_ipm(C, ops, b, options: SolverOptions) -> SdpSolution:
    N = C.shape[0]
    m = b.size
    normb = 1.0 + np.linalg.norm(b)
    normC = 1.0 + np.linalg.norm(C)

    eta = max(1.0, float(np.max(np.abs(b))) if m else 1.0)
    X = eta * np.eye(N)
    Z = max(1.0, float(np.max(np.abs(C)))) * np.eye(N)
    y = np.zeros(m)

    status = "max_iter"
    it = 0
    for it in range(1, options.max_iter + 1):
        rp = b - ops.apply(X)
        Rd = C - Z - ops.adjoint(y)
        pobj = float(np.tensordot(C, X))
        dobj = float(b @ y)
        gap = float(np.tensordot(X, Z))
        rel_gap = gap / (1.0 + abs(pobj) + abs(dobj))
        pres = np.linalg.norm(rp) / normb
        dres = np.linalg.norm(Rd) / normC
        if options.verbose:
            print(f"  it={it:3d} pobj={pobj:+.8e} dobj={dobj:+.8e} "
                  f"gap={rel_gap:.2e} pres={pres:.2e} dres={dres:.2e}")
        if pres <= options.tol_feas and dres <= options.tol_feas and rel_gap <= options.tol_gap:
            status = "optimal"
            break
        if np.linalg.norm(y) > 1e13 * normb or np.trace(X) > 1e13 * N * eta:
            status = "infeasible_detected"
            break

        try:
            Lz = np.linalg.cholesky(Z)
            M = Lz.T @ X @ Lz
            s, Q = np.linalg.eigh(M)
            if s[0] <= 0:
                raise np.linalg.LinAlgError("scaled matrix not PD")
        except np.linalg.LinAlgError:
            break  # numerical boundary; report best status below

        mu = float(s.sum()) / N
        d = np.sqrt(s)
        # R maps the scaled space back: R D R^T = X, R^{-T} D R^{-1} = Z
        Rq = sla.solve_triangular(Lz, Q, trans="T", lower=True) * (s ** 0.25)
        Rinv = (Q * (s ** -0.25)).T @ Lz.T
        W = Rq @ Rq.T
        S = ops.schur(W)
        # tiny ridge for safety at the central-path tail
        ridge = 1e-14 * (np.trace(S) / m if m else 1.0)
        for attempt in range(5):
            try:
                S_fact = sla.cho_factor(S + ridge * np.eye(m), lower=True)
                break
            except np.linalg.LinAlgError:
                ridge = max(ridge * 100.0, 1e-12)
        else:
            break

        A_WRdW = ops.apply(W @ Rd @ W)
        denom = d[:, None] + d[None, :]

        def direction(sigma_mu: float, cc: np.ndarray | None):
            Vh = -np.diag(d * d)
            if sigma_mu:
                Vh += sigma_mu * np.eye(N)
            if cc is not None:
                Vh -= cc
            Vh *= 2.0 / denom
            V = Rq @ Vh @ Rq.T
            rhs = rp - ops.apply(V) + A_WRdW
            dy = sla.cho_solve(S_fact, rhs)
            dZ = Rd - ops.adjoint(dy)
            dX = V - W @ dZ @ W
            return dy, dZ, dX

        # predictor; step lengths live in the scaled space where both X and Z
        # look like diag(d): max alpha with I + alpha D^{-1/2} M D^{-1/2} >= 0
        scale = np.sqrt(np.outer(d, d))
        dy_a, dZ_a, dX_a = direction(0.0, None)
        dXh = Rinv @ dX_a @ Rinv.T
        dZh = Rq.T @ dZ_a @ Rq
        ap = min(1.0, _max_step(dXh / scale))
        ad = min(1.0, _max_step(dZh / scale))
        mu_aff = float(np.tensordot(X + ap * dX_a, Z + ad * dZ_a)) / N
        sigma = min(0.999, max(1e-8, (max(mu_aff, 0.0) / mu) ** 3))

        # corrector
        cc = dXh @ dZh
        cc = 0.5 * (cc + cc.T)
        dy, dZ, dX = direction(sigma * mu, cc)
        dXh = Rinv @ dX @ Rinv.T
        dZh = Rq.T @ dZ @ Rq
        ap = min(1.0, options.step_damping * _max_step(dXh / scale))
        ad = min(1.0, options.step_damping * _max_step(dZh / scale))
        if ap < 1e-10 and ad < 1e-10:
            break  # stalled
        X = X + ap * dX
        y = y + ad * dy
        Z = Z + ad * dZ

    rp = b - ops.apply(X)
    Rd = C - Z - ops.adjoint(y)
    pobj = float(np.tensordot(C, X))
    dobj = float(b @ y)
    gap = float(np.tensordot(X, Z))
    rel_gap = gap / (1.0 + abs(pobj) + abs(dobj))
    pres = float(np.linalg.norm(rp) / normb)
    dres = float(np.linalg.norm(Rd) / normC)
    if pres <= options.tol_feas and dres <= options.tol_feas and rel_gap <= options.tol_gap:
        status = "optimal"
    return SdpSolution(X, y, Z, pobj, dobj, gap, rel_gap, pres, dres, it, status)


def solve_sdp(problem: SdpProblem, tol: float | None = None,
              max_iter: int | None = None, verbose: bool = False) -> SdpSolution:
    """Solve a dense standard-form SDP with the embedded interior-point method.

    Returns the solution with an explicit status; an unconverged iterate is
    never labeled optimal.
    """
    opts = SolverOptions(
        tol_gap=tol if tol is not None else SolverOptions.tol_gap,
        tol_feas=min(tol, SolverOptions.tol_feas) if tol is not None else SolverOptions.tol_feas,
        max_iter=max_iter if max_iter is not None else SolverOptions.max_iter,
        verbose=verbose,
    )
    cfg = Config.from_env()
    N = problem.C.shape[0]
    if N > cfg.sdp_max_size or len(problem.constraints) > cfg.sdp_max_constraints:
        raise SolverError(
            f"SDP size N={N}, m={len(problem.constraints)} exceeds configured caps"
        )
    ops = _DenseConstraints(problem.constraints)
    return _solve_ipm(np.asarray(problem.C, dtype=np.float64), ops,
                      np.asarray(problem.b, dtype=np.float64), opts)


# ---------------------------------------------------------------------------
# hierarchy front ends


@dataclass(frozen=True)
class OuterBoundResult:
    value: float           # certified from the Gram side
    gram: np.ndarray
    order: int
    basis: np.ndarray      # character masks indexing the Gram matrix
    moment_value: float    # dual (moment-side) objective
    moments: np.ndarray | None
    diagnostics: dict = field(default_factory=dict)


def _check_order(n: int, d: int, r: int) -> None:
    if 2 * r < d:
        raise ValueError(f"order r={r} cannot represent degree {d}: need 2r >= d")
    if r > n:
        raise ValueError("r must be <= n")


def outer_cube(f: CubePolynomial, r: int, cap: int | None = None,
               options: SolverOptions | None = None) -> OuterBoundResult:
    """The order-r SOS lower bound on min f over {0,1}^n.

    Monotone nondecreasing in r, equal to the minimum once 2r >= n + deg - 1.
    Raises SolverError if the interior-point method does not converge.
    """
    check_cap(f.n, cap)
    _check_order(f.n, f.degree, r)
    opts = options or SolverOptions()
    n = f.n
    fhat = fwht(value_table(f, cap)) / (1 << n)
    masks = masks_up_to_weight(n, r)
    classes = masks_up_to_weight(n, min(2 * r, n))[1:]  # exclude c = 0
    ops = _XorConstraints(n, masks, classes)
    C = np.eye(masks.size)
    b = fhat[classes]
    sol = _solve_ipm(C, ops, b, opts)
    if sol.status != "optimal":
        raise SolverError(f"SDP did not converge: status={sol.status}, "
                          f"gap={sol.rel_gap:.2e}, pres={sol.primal_res:.2e}")
    moments = np.zeros(1 << n)
    moments[0] = 1.0
    moments[classes] = -sol.y
    return OuterBoundResult(
        value=float(fhat[0] - sol.primal_obj),
        gram=sol.X,
        order=r,
        basis=masks,
        moment_value=float(fhat[0] - sol.dual_obj),
        moments=moments,
        diagnostics={
            "status": sol.status,
            "iterations": sol.iterations,
            "rel_gap": sol.rel_gap,
            "primal_res": sol.primal_res,
            "dual_res": sol.dual_res,
        },
    )


def _matrix_constraints(n: int, k: int, masks: np.ndarray, classes0: np.ndarray):
    """Dense constraint matrices for the block (character, coordinate) Gram."""
    N = masks.size
    xor = np.bitwise_xor.outer(masks, masks)
    mats = []
    index = []  # (c, i, j) or ("diff", i)
    for i in range(k):
        for j in range(i, k):
            for c in classes0:
                if c == 0 and i == j:
                    continue
                pattern = (xor == c).astype(np.float64)
                A = np.zeros((k * N, k * N))
                if i == j:
                    A[i * N:(i + 1) * N, i * N:(i + 1) * N] = pattern
                else:
                    A[i * N:(i + 1) * N, j * N:(j + 1) * N] = 0.5 * pattern
                    A[j * N:(j + 1) * N, i * N:(i + 1) * N] = 0.5 * pattern
                mats.append(A)
                index.append((int(c), i, j))
    for i in range(1, k):
        A = np.zeros((k * N, k * N))
        A[i * N:(i + 1) * N, i * N:(i + 1) * N] = np.eye(N)
        A[:N, :N] -= np.eye(N)
        mats.append(A)
        index.append(("diff", i))
    return mats, index


def outer_matrix(F: MatrixPolynomial, r: int, cap: int | None = None,
                 options: SolverOptions | None = None) -> OuterBoundResult:
    """Order-r SOS lower bound on min_x lambda_min(F(x)) for a symmetric
    matrix polynomial, via the block Gram over (character, coordinate)."""
    check_cap(F.n, cap)
    _check_order(F.n, F.degree, r)
    opts = options or SolverOptions()
    n, k = F.n, F.k
    fhat = {}
    for i in range(k):
        for j in range(i, k):
            entry = F.entry(i, j)
            if entry.terms != F.entry(j, i).terms:
                raise ValueError("matrix polynomial is not symmetric")
            fhat[(i, j)] = fwht(value_table(entry, cap)) / (1 << n)
    masks = masks_up_to_weight(n, r)
    classes0 = masks_up_to_weight(n, min(2 * r, n))
    mats, index = _matrix_constraints(n, k, masks, classes0)
    b = []
    for key in index:
        if key[0] == "diff":
            i = key[1]
            b.append(fhat[(i, i)][0] - fhat[(0, 0)][0])
        else:
            c, i, j = key
            b.append(fhat[(i, j)][c])
    ops = _DenseConstraints(mats)
    C = np.eye(k * masks.size)
    sol = _solve_ipm(C, ops, np.array(b), opts)
    if sol.status != "optimal":
        raise SolverError(f"SDP did not converge: status={sol.status}")
    trace_f0 = sum(fhat[(i, i)][0] for i in range(k))
    value = float((trace_f0 - sol.primal_obj) / k)
    dual_value = float((trace_f0 - sol.dual_obj) / k)
    return OuterBoundResult(
        value=value,
        gram=sol.X,
        order=r,
        basis=masks,
        moment_value=dual_value,
        moments=None,
        diagnostics={
            "status": sol.status,
            "iterations": sol.iterations,
            "rel_gap": sol.rel_gap,
            "primal_res": sol.primal_res,
            "dual_res": sol.dual_res,
            "k": k,
        },
    )


# ---------------------------------------------------------------------------
# certificate verification


@dataclass(frozen=True)
class SosVerification:
    max_residual: float
    gram_min_eigenvalue: float
    psd: bool
    ok: bool


def verify_sos_certificate(result: OuterBoundResult, f: CubePolynomial,
                           cap: int | None = None,
                           residual_tol: float = 1e-6,
                           psd_tol: float = 1e-8) -> SosVerification:
    """Check the Gram reconstruction sum_{a,b} G[a,b] chi_{a XOR b} = f - value
    on every cube point, and positive semidefiniteness of G."""
    check_cap(f.n, cap)
    n = f.n
    coeffs = np.zeros(1 << n)
    xor_flat = np.bitwise_xor.outer(result.basis, result.basis).ravel()
    np.add.at(coeffs, xor_flat, result.gram.ravel())
    recon = fwht(coeffs)
    fvals = value_table(f, cap)
    residual = float(np.max(np.abs(recon - (fvals - result.value))))
    lam_min = float(np.linalg.eigvalsh(result.gram)[0])
    psd = lam_min >= -psd_tol
    return SosVerification(residual, lam_min, psd, psd and residual <= residual_tol)
