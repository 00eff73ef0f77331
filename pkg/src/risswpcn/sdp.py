"""Structured semidefinite programs and iterative rank minimization.

The problem family solved here maximizes ``trace(C * objective)`` over
Hermitian PSD matrices with a fixed constant diagonal and a handful of
trace inequality caps, optionally carrying a rank-pressure block that
penalizes the largest eigenvalue of the compression of C onto the
orthogonal complement of its dominant eigenvector.

The solver is an operator-splitting (ADMM) scheme whose blocks each admit
an exact projection or proximal step:

* diagonal constraint + caps: closed-form projection with a tiny
  nonnegative QP in the cap multipliers;
* PSD cone: eigenvalue clipping;
* rank-pressure term ``eps * max(lambda_max(V^H C V), 0)``: a Moreau
  decomposition against the spectral set {Y >= 0, tr Y <= eps/rho}.

Everything operates directly on complex Hermitian matrices; no real
embedding is needed.  A solve normalizes the diagonal to one internally,
which leaves the rank-pressure weight unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

RANK_ONE_THRESHOLD = 1e-4  # accept lambda_max / trace >= 1 - this as rank one
CAP_TIGHTEN = 3e-4  # relative internal tightening so returned iterates obey caps


@dataclass
class StructuredSdp:
    """Problem data: objective matrix, constant diagonal, caps, optional rank block."""

    objective: np.ndarray
    diag_value: float
    trace_caps: list[tuple[np.ndarray, float]] = field(default_factory=list)
    irm_block: tuple[np.ndarray, float] | None = None

    def __post_init__(self):
        if self.diag_value <= 0:
            raise ValueError("diag_value must be positive")
        n = self.objective.shape[0]
        if self.objective.shape != (n, n):
            raise ValueError("objective must be square")
        for a, tau in self.trace_caps:
            if a.shape != (n, n):
                raise ValueError("cap matrix shape mismatch")
            if tau < 0:
                raise ValueError("cap thresholds must be non-negative")
        if self.irm_block is not None:
            v, eps = self.irm_block
            if v.shape != (n, n - 1):
                raise ValueError("rank block basis must be n x (n-1)")
            if eps <= 0:
                raise ValueError("rank pressure weight must be positive")

    @property
    def n(self) -> int:
        return self.objective.shape[0]


@dataclass
class PsdSolution:
    """Solver output: PSD matrix, objective, rank slack, residuals and status."""

    c_matrix: np.ndarray
    objective_value: float
    r_value: float
    residuals: tuple[float, float]
    status: str
    iterations: int = 0
    r_history: tuple[float, ...] = ()


@dataclass(frozen=True)
class IrmParams:
    """Rank-minimization loop controls; r_tol defaults to 1e-6 * n * diag_value."""

    epsilon_0: float = 4.0
    growth: float = 1.5
    max_iters: int = 20
    r_tol: float | None = None

    def __post_init__(self):
        if self.epsilon_0 <= 0 or self.growth <= 1 or self.max_iters < 1:
            raise ValueError("need epsilon_0 > 0, growth > 1, max_iters >= 1")

    def resolved_r_tol(self, n: int, diag_value: float) -> float:
        return 1e-6 * n * diag_value if self.r_tol is None else self.r_tol


def _herm(w: np.ndarray) -> np.ndarray:
    return 0.5 * (w + w.conj().T)


def _inner(a: np.ndarray, b: np.ndarray) -> float:
    # real trace inner product of Hermitian matrices
    return float(np.vdot(a, b).real)


class _AffineCapsBlock:
    """Projection onto {diag(X) = 1, <A_k, X> <= tau_k} plus the linear objective."""

    def __init__(self, objective, caps, n, original_taus=None):
        self.objective = objective
        self.n = n
        self.caps = caps
        self.m = len(caps)
        self.original_taus = (
            np.array(original_taus) if original_taus is not None else np.array([t for _, t in caps])
        )
        if self.m:
            self.a_bar = [a - np.diag(np.diag(a)) for a, _ in caps]
            self.taus = np.array([tau for _, tau in caps])
            self.diag_sums = np.array([np.trace(a).real for a, _ in caps])
            h = np.empty((self.m, self.m))
            for i in range(self.m):
                for j in range(i, self.m):
                    h[i, j] = h[j, i] = _inner(self.a_bar[i], self.a_bar[j])
            self.h = h
            self.h_top = float(np.linalg.eigvalsh(h)[-1]) if self.m else 0.0
            self.mu = np.zeros(self.m)
            # caps whose off-diagonal part vanishes are decided by the diagonal alone
            self.degenerate = np.array([np.linalg.norm(ab) < 1e-12 * n for ab in self.a_bar])

    def check_consistency(self) -> bool:
        """False when a diagonal-determined cap is violated by diag(X) = 1."""
        if not self.m:
            return True
        bad = self.degenerate & (self.diag_sums > self.taus + 1e-9 * self.n)
        return not bool(bad.any())

    def _solve_multipliers(self, c: np.ndarray) -> np.ndarray:
        """Nonnegative multipliers of the halfspace projection (small NCP)."""
        live = ~self.degenerate
        mu = np.where(live, np.maximum(self.mu, 0.0), 0.0)
        scale = max(1.0, float(np.abs(c).max()))
        h = self.h
        # near-parallel caps make h ill-conditioned; a small ridge keeps the
        # active-set solves bounded at negligible projection error
        ridge = 1e-9 * max(np.trace(h) / max(self.m, 1), 1.0)
        for _ in range(4):
            g = c - h @ mu
            active = live & ((mu > 1e-14) | (g > 1e-13 * scale))
            if not active.any():
                mu[:] = 0.0
                break
            idx = np.nonzero(active)[0]
            sub = h[np.ix_(idx, idx)] + ridge * np.eye(len(idx))
            sol = np.linalg.solve(sub, c[idx])
            mu_new = np.zeros_like(mu)
            mu_new[idx] = np.maximum(sol, 0.0)
            if np.max(np.abs(mu_new - mu)) <= 1e-12 * (1.0 + mu_new.max()):
                mu = mu_new
                break
            mu = 0.5 * (mu + mu_new) if np.any(sol < 0) else mu_new
        # projected-gradient cleanup (step below 1/lambda_max is contractive)
        step = 1.0 / (self.h_top + 1e-30)
        for _ in range(40):
            g = c - h @ mu
            if np.all((g <= 1e-11 * scale) | ~live) and np.all(
                (mu <= 0) | (np.abs(g) <= 1e-10 * scale) | ~live
            ):
                break
            mu = np.where(live, np.maximum(mu + step * g, 0.0), 0.0)
        return mu

    def prox(self, w: np.ndarray, step: float) -> np.ndarray:
        x = w + step * self.objective
        np.fill_diagonal(x, 1.0)
        if not self.m:
            return x
        c = np.array([_inner(a, x) for a, _ in self.caps]) - self.taus
        if np.all(c <= 1e-14 * self.n) and np.all(self.mu == 0):
            return x
        mu = self._solve_multipliers(c)
        self.mu = mu
        for k in range(self.m):
            if mu[k] > 0.0:
                x = x - mu[k] * self.a_bar[k]
        np.fill_diagonal(x, 1.0)
        return x

    def violation(self, x: np.ndarray) -> float:
        """Worst cap excess of x relative to the caller's (untightened) thresholds."""
        if not self.m:
            return 0.0
        vals = np.array([_inner(a, x) for a, _ in self.caps])
        scale = np.maximum(self.original_taus, 1e-9 * self.n)
        return float(np.max((vals - self.original_taus) / scale))


def _psd_project(w: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(_herm(w))
    neg = vals < 0
    if not neg.any():
        return _herm(w)
    vn = vecs[:, neg]
    return _herm(w) - (vn * vals[neg]) @ vn.conj().T


class _RankPressureBlock:
    """Prox of ``eps * max(lambda_max(V^H X V), 0)`` via its support-function form."""

    def __init__(self, v_basis: np.ndarray, eps: float):
        n = v_basis.shape[0]
        residual = np.eye(n) - v_basis @ v_basis.conj().T
        j = int(np.argmax(np.diag(residual).real))
        v1 = residual[:, j]
        nrm = np.linalg.norm(v1)
        if nrm < 1e-10:
            raise ValueError("rank block basis spans the whole space")
        self.v1 = v1 / nrm
        self.eps = eps

    def compress(self, w: np.ndarray) -> np.ndarray:
        v1 = self.v1
        wv = w @ v1
        vw = v1.conj() @ w
        m = w - np.outer(v1, vw) - np.outer(wv, v1.conj())
        m += np.outer(v1, v1.conj()) * (v1.conj() @ wv)
        return _herm(m)

    def slack(self, w: np.ndarray) -> float:
        m = self.compress(w)
        return max(0.0, float(np.linalg.eigvalsh(m)[-1]))

    def prox(self, w: np.ndarray, step: float) -> np.ndarray:
        budget = step * self.eps
        m = self.compress(w)
        vals, vecs = np.linalg.eigh(m)
        pos = np.maximum(vals, 0.0)
        total = pos.sum()
        if total <= budget:
            x = pos
        else:
            # water level t with sum(max(vals - t, 0)) = budget
            desc = np.sort(vals)[::-1]
            cums = np.cumsum(desc)
            ks = np.arange(1, len(desc) + 1)
            levels = (cums - budget) / ks
            valid = levels >= np.concatenate([desc[1:], [-np.inf]])
            k = int(np.argmax(valid))
            x = np.maximum(vals - levels[k], 0.0)
        active = x > 0
        if not active.any():
            return w
        va = vecs[:, active]
        return w - (va * x[active]) @ va.conj().T


def solve_sdr(
    problem: StructuredSdp,
    tol: float = 1e-6,
    max_iterations: int = 30_000,
    warm_state: dict | None = None,
) -> PsdSolution:
    """Solve the relaxed problem to the requested relative residual.

    Maximizes ``trace(C * objective)`` (minus the rank-pressure term when the
    rank block is present) subject to the constant diagonal, the trace caps
    and positive semidefiniteness.  Returns the PSD iterate together with
    the final primal/dual residuals; status is ``optimal``, ``max_iters`` or
    ``infeasible``.
    """
    n = problem.n
    dv = problem.diag_value
    a_d = _herm(problem.objective)
    caps = [(_herm(a), tau / dv * (1.0 - CAP_TIGHTEN)) for a, tau in problem.trace_caps]
    original = [tau / dv for _, tau in problem.trace_caps]
    aff = _AffineCapsBlock(a_d, caps, n, original_taus=original)
    if not aff.check_consistency():
        return PsdSolution(
            c_matrix=np.eye(n) * dv,
            objective_value=float("nan"),
            r_value=float("nan"),
            residuals=(np.inf, np.inf),
            status="infeasible",
        )
    rank_block = None
    if problem.irm_block is not None:
        rank_block = _RankPressureBlock(problem.irm_block[0], problem.irm_block[1])

    scale = max(1.0, float(n))
    state = warm_state or {}
    z = state.get("z")
    if z is None:
        z = np.eye(n, dtype=complex)
    rho = state.get("rho", max(1.0, np.linalg.norm(a_d) / scale))
    if rank_block is not None and rho < rank_block.eps / scale:
        # keep the rank-pressure prox budget eps/rho at the scale of the
        # spectrum, else its dual needs O(eps) iterations to equilibrate;
        # held duals are scaled duals, so they shrink with growing rho
        ratio = rho / (rank_block.eps / scale)
        rho = rank_block.eps / scale
        if "u" in state:
            state["u"] = state["u"] * ratio
        if "us" in state:
            state["us"] = [u * ratio for u in state["us"]]

    def finalize(w: np.ndarray) -> tuple[np.ndarray, float]:
        """PSD candidate with an exact unit diagonal via congruence scaling."""
        cand = _psd_project(w)
        d = np.diag(cand).real
        if d.min() > 0.5:
            s = 1.0 / np.sqrt(d)
            cand = cand * np.outer(s, s)
            np.fill_diagonal(cand, 1.0)
        return cand, aff.violation(cand)

    feas_every = 100
    c_norm = None
    cap_excess = np.inf
    primal = dual = np.inf
    it = 0
    if rank_block is None:
        u = state.get("u")
        if u is None or u.shape != z.shape:
            u = np.zeros_like(z)
        alpha = 1.6
        for it in range(1, max_iterations + 1):
            x = aff.prox(z - u, 1.0 / rho)
            x_hat = alpha * x + (1 - alpha) * z
            z_new = _psd_project(x_hat + u)
            u = u + x_hat - z_new
            if it % 25 == 0 or it == max_iterations:
                primal = np.linalg.norm(x - z_new) / scale
                dual = rho * np.linalg.norm(z_new - z) / scale
                z = z_new
                if primal < tol and dual < tol and (it % feas_every == 0 or it == max_iterations):
                    c_norm, cap_excess = finalize(z)
                    if cap_excess <= 1e-12 * n:
                        break
                if primal > 10 * dual and rho < 1e6:
                    rho *= 1.6
                    u /= 1.6
                elif dual > 10 * primal and rho > 1e-6:
                    rho /= 1.6
                    u *= 1.6
            else:
                z = z_new
        state.update(z=z, u=u, rho=rho)
        r_val = 0.0
        if c_norm is None:
            c_norm, cap_excess = finalize(z)
    else:
        blocks = [aff.prox, lambda w, t: _psd_project(w), rank_block.prox]
        us = state.get("us")
        if us is None or len(us) != 3:
            us = [np.zeros_like(z) for _ in range(3)]
        for it in range(1, max_iterations + 1):
            xs = [blk(z - us[i], 1.0 / rho) for i, blk in enumerate(blocks)]
            z_new = _herm(sum(x + u for x, u in zip(xs, us)) / 3.0)
            for i in range(3):
                us[i] = us[i] + xs[i] - z_new
            if it % 25 == 0 or it == max_iterations:
                primal = max(np.linalg.norm(x - z_new) for x in xs) / scale
                dual = rho * np.linalg.norm(z_new - z) * np.sqrt(3.0) / scale
                z = z_new
                if primal < tol and dual < tol and (it % feas_every == 0 or it == max_iterations):
                    c_norm, cap_excess = finalize(z)
                    if cap_excess <= 1e-12 * n:
                        break
                if primal > 10 * dual and rho < 1e6:
                    rho *= 1.6
                    for i in range(3):
                        us[i] /= 1.6
                elif dual > 10 * primal and rho > 1e-6:
                    rho /= 1.6
                    for i in range(3):
                        us[i] *= 1.6
            else:
                z = z_new
        state.update(z=z, us=us, rho=rho)
        if c_norm is None:
            c_norm, cap_excess = finalize(z)
        r_val = rank_block.slack(c_norm) * dv

    converged = primal < tol and dual < tol
    diag_dev = float(np.max(np.abs(np.diag(c_norm).real - 1.0)))
    feasible = diag_dev <= 1e-6 and cap_excess <= 1e-12 * n
    status = "optimal" if (converged and feasible) else "max_iters"
    c = c_norm * dv
    return PsdSolution(
        c_matrix=c,
        objective_value=_inner(a_d, c),
        r_value=r_val,
        residuals=(float(primal), float(dual)),
        status=status,
        iterations=it,
    )


def principal_component(c_matrix: np.ndarray) -> tuple[float, np.ndarray]:
    """Largest eigenpair of a Hermitian matrix, unit-norm eigenvector.

    Among (numerically) tied top eigenvalues the lowest-index one wins; the
    eigenvector phase is fixed by making its largest-magnitude entry real
    positive.
    """
    vals, vecs = np.linalg.eigh(_herm(np.asarray(c_matrix, dtype=complex)))
    top = vals[-1]
    tied = np.nonzero(vals >= top - 1e-12 * max(abs(top), 1.0))[0]
    idx = int(tied[0])
    vec = vecs[:, idx]
    k = int(np.argmax(np.abs(vec)))
    phase = vec[k] / abs(vec[k]) if abs(vec[k]) > 0 else 1.0
    vec = vec / phase
    return float(vals[idx]), vec


def rank_one_defect(c_matrix: np.ndarray) -> float:
    """1 - lambda_max / trace; zero for exact rank-one PSD matrices."""
    vals = np.linalg.eigvalsh(_herm(c_matrix))
    tr = vals.sum()
    if tr <= 0:
        return 1.0
    return float(1.0 - vals[-1] / tr)


def irm_refine(
    problem: StructuredSdp,
    initial: PsdSolution,
    params: IrmParams = IrmParams(),
    tol: float = 1e-6,
    max_iterations: int = 30_000,
    total_iterations: int | None = None,
) -> PsdSolution:
    """Drive the relaxed solution to rank one by growing rank pressure.

    Each round eigendecomposes the current matrix, aims the pressure block at
    the orthogonal complement of its dominant eigenvector and re-solves with
    the current weight; the weight grows as ``eps <- eps**growth``.  Stops
    when the rank slack drops below tolerance or the round budget runs out;
    ``total_iterations`` additionally caps the summed inner iterations.
    A rank-one initial solution returns unchanged.
    """
    if problem.irm_block is not None:
        raise ValueError("problem must come without a rank block")
    n = problem.n
    dv = problem.diag_value
    r_tol = params.resolved_r_tol(n, dv)
    if rank_one_defect(initial.c_matrix) <= RANK_ONE_THRESHOLD:
        return initial

    eps = params.epsilon_0
    best = None
    current = initial
    state: dict = {"z": initial.c_matrix / dv}
    history: list[float] = []
    no_improve = 0
    spent = 0
    for _ in range(params.max_iters):
        if total_iterations is not None and spent >= total_iterations:
            break
        round_budget = max_iterations
        if total_iterations is not None:
            round_budget = min(max_iterations, max(200, total_iterations - spent))
        vals, vecs = np.linalg.eigh(_herm(current.c_matrix))
        v_basis = vecs[:, :-1]  # eigenvectors of the n-1 smallest eigenvalues
        sub = replace(problem, irm_block=(v_basis, eps))
        current = solve_sdr(sub, tol=tol, max_iterations=round_budget, warm_state=state)
        spent += current.iterations
        if current.status == "infeasible":
            return current
        if history and current.r_value > history[-1] * (1 + 1e-6) + 1e-12:
            # pressure stopped helping (degenerate face); keep the best round
            break
        no_improve = no_improve + 1 if history and current.r_value > 0.999 * history[-1] else 0
        history.append(current.r_value)
        if best is None or current.r_value < best.r_value:
            best = current
        if current.r_value <= r_tol or no_improve >= 2:
            break
        # geometric super-growth overflows float64 after ~15 rounds; by then the
        # pressure term already dominates any achievable objective
        eps = min(eps**params.growth, 1e16)

    current = best if best is not None else current
    defect = rank_one_defect(current.c_matrix)
    reached = bool(history) and history[-1] <= r_tol and defect <= RANK_ONE_THRESHOLD
    status = "optimal" if (reached and current.status == "optimal") else "max_iters"
    return replace(current, status=status, r_history=tuple(history))
