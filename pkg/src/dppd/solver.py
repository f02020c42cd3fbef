"""Synchronous distributed proximal primal-dual solver.

Each round mixes primal and dual iterates through the round's doubly
stochastic matrix, takes a proximal step on the local Lagrangian over the
shared feasible set, then a projected dual step using the fresh primal
point.  A vectorized engine handles scalar problems whose agent functions
all reduce to quadratic-plus-weighted-log composites; everything else runs
through the generic per-agent prox ladder.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .functions import Box, NonnegBall, Scaled, Sum, interval_of
from .graphs import mix
from .proxops import ProxQuery, flatten_composite, neglog_prox_root, prox_solve

__all__ = [
    "StepsizeSchedule",
    "SwarmState",
    "RunTrace",
    "DppdConfig",
    "dppd_round",
    "run",
    "running_eval_error",
    "rate_fit",
]


@dataclass(frozen=True)
class StepsizeSchedule:
    """Nonincreasing, vanishing, non-summable stepsizes.

    inv-sqrt: alpha_k = 1/sqrt(k); inv-pow: alpha_k = 1/k**power with
    power in (0, 1] (keeps the sum divergent); custom: explicit table.
    alpha_0 is a free finite constant (the decay rules start at k = 1).
    """

    rule: str = "inv-sqrt"
    power: float = 0.5
    table: tuple = ()
    alpha0: float = 1.0

    def __post_init__(self):
        if self.rule not in ("inv-sqrt", "inv-pow", "custom"):
            raise ValueError(f"unknown stepsize rule: {self.rule!r}")
        if self.rule == "inv-pow" and not 0.0 < self.power <= 1.0:
            raise ValueError("inv-pow exponent must lie in (0, 1]")
        if self.rule == "custom":
            t = tuple(float(a) for a in self.table)
            if not t or any(a <= 0 for a in t) or any(
                t[i + 1] > t[i] for i in range(len(t) - 1)
            ):
                raise ValueError("custom table must be positive and nonincreasing")
            object.__setattr__(self, "table", t)
        if self.alpha0 <= 0:
            raise ValueError("alpha0 must be positive")

    def alpha(self, k):
        if k <= 0:
            return self.alpha0
        if self.rule == "inv-sqrt":
            return 1.0 / np.sqrt(k)
        if self.rule == "inv-pow":
            return float(k) ** (-self.power)
        return self.table[min(k, len(self.table) - 1)]


@dataclass(frozen=True)
class SwarmState:
    """Per-agent primal/dual iterates after round k."""

    k: int
    x: np.ndarray  # (N, n)
    mu: np.ndarray  # (N, m)


@dataclass
class RunTrace:
    """Sampled per-round records.

    Row at index k (k >= 1) is written after round k completes: it carries
    the round-(k+1) iterates, the stepsize alpha_k, the Lagrangian at the
    new averages, and the k-term running evaluation error.
    """

    k: np.ndarray
    alpha: np.ndarray
    xbar: np.ndarray  # (rows, n)
    mubar: np.ndarray  # (rows, m)
    cons_x: np.ndarray
    cons_mu: np.ndarray
    lagrangian: np.ndarray
    run_eval_err: np.ndarray
    constr_viol: np.ndarray
    run_mean: np.ndarray  # running average of the Lagrangian (in-memory only)
    stride: int
    f_star: float = None
    final_state: SwarmState = None


@dataclass(frozen=True)
class DppdConfig:
    K: int
    U0: float
    stepsize: StepsizeSchedule = StepsizeSchedule()
    stride: int = 10
    seed: int = 0
    init: str = "origin"
    f_star: float = None

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("K must be at least 1")
        if self.U0 <= 0:
            raise ValueError("dual radius must be positive")
        if self.stride < 1:
            raise ValueError("stride must be positive")


def initial_state(p, U0, init="origin"):
    if init == "origin":
        x_start = np.zeros(p.n)
    elif init == "center":
        # box midpoint when available, otherwise the origin projection
        if isinstance(p.X0, Box):
            x_start = 0.5 * (p.X0.lo + p.X0.hi)
        else:
            x_start = np.zeros(p.n)
    else:
        raise ValueError(f"unknown initializer: {init!r}")
    x0 = np.tile(p.X0.project(x_start), (p.N, 1))
    mu0 = np.zeros((p.N, p.m))
    return SwarmState(0, x0, mu0)


def dppd_round(p, A, state, alpha, U0):
    """One synchronous round: mix all, then all primal prox steps, then all
    dual projected steps (duals see the new primal points)."""
    if alpha <= 0:
        raise ValueError("stepsize must be positive")
    U = NonnegBall(U0, dim_=p.m)
    xhat = mix(A, state.x)
    muhat = mix(A, state.mu)
    x_new = np.empty_like(state.x)
    mu_new = np.empty_like(state.mu)
    for i in range(p.N):
        terms = (p.f[i],) + tuple(
            Scaled(comp, float(muhat[i, l]))
            for l, comp in enumerate(p.g[i].components)
        )
        try:
            x_new[i] = prox_solve(ProxQuery(Sum(terms), xhat[i], alpha, p.X0))
        except Exception as exc:
            raise RuntimeError(f"primal prox failed for agent {i}") from exc
        mu_new[i] = U.project(muhat[i] + alpha * p.g[i].value(x_new[i]))
    return SwarmState(state.k + 1, x_new, mu_new)


# ----------------------------------------------------------------------
# vectorized engine for scalar quadratic/log-composite problems


def _wlog(w, x):
    """w * log1p(x) with zero-weight terms forced to zero, so that purely
    quadratic agents stay valid at x = -1 (where log1p diverges)."""
    if np.all(w == 0.0):
        return np.zeros(np.broadcast_shapes(np.shape(w), np.shape(x)))
    return w * np.log1p(x)


@dataclass(frozen=True)
class _ScalarStructure:
    # per-agent coefficients of f_i = pf*x^2/2 + qf*x - wf*log(1+x) + rf,
    # and of each constraint component g_il likewise
    pf: np.ndarray  # (N,)
    qf: np.ndarray
    wf: np.ndarray
    rf: np.ndarray
    pg: np.ndarray  # (N, m)
    qg: np.ndarray
    wg: np.ndarray
    rg: np.ndarray
    lo: float
    hi: float

    def g_values(self, x):
        """g_il(x_i) for per-agent scalars x (N,) -> (N, m)."""
        xx = x[:, None]
        return (
            0.5 * self.pg * xx * xx + self.qg * xx - _wlog(self.wg, xx) + self.rg
        )

    def f_total(self, x):
        return float(
            0.5 * self.pf.sum() * x * x
            + self.qf.sum() * x
            - _wlog(self.wf.sum(), x)
            + self.rf.sum()
        )

    def g_total(self, x):
        return (
            0.5 * self.pg.sum(axis=0) * x * x
            + self.qg.sum(axis=0) * x
            - _wlog(self.wg.sum(axis=0), x)
            + self.rg.sum(axis=0)
        )

    def lagrangian(self, x, mu):
        return self.f_total(x) + float(mu @ self.g_total(x))


def extract_scalar_structure(p):
    """Coefficient arrays for the vectorized engine, or None if any agent
    function falls outside the quadratic/log registry or the set is not an
    interval."""
    iv = interval_of(p.X0)
    if p.n != 1 or iv is None:
        return None
    N, m = p.N, p.m
    pf = np.zeros(N)
    qf = np.zeros(N)
    wf = np.zeros(N)
    rf = np.zeros(N)
    pg = np.zeros((N, m))
    qg = np.zeros((N, m))
    wg = np.zeros((N, m))
    rg = np.zeros((N, m))
    for i in range(N):
        flat = flatten_composite(p.f[i])
        if flat is None:
            return None
        pf[i], qf[i], rf[i], wf[i] = flat[0][0, 0], flat[1][0], flat[2], flat[3]
        for l, comp in enumerate(p.g[i].components):
            flat = flatten_composite(comp)
            if flat is None:
                return None
            pg[i, l], qg[i, l], rg[i, l], wg[i, l] = (
                flat[0][0, 0],
                flat[1][0],
                flat[2],
                flat[3],
            )
    if iv[0] <= -1.0 and (np.any(wf != 0) or np.any(wg != 0)):
        return None
    return _ScalarStructure(pf, qf, wf, rf, pg, qg, wg, rg, iv[0], iv[1])


def _vectorized_round(st, A, x, mu, alpha, U0):
    """Same update as dppd_round, expressed as array operations over agents."""
    xhat = A @ x
    muhat = A @ mu
    p = st.pf + (muhat * st.pg).sum(axis=1)
    q = st.qf + (muhat * st.qg).sum(axis=1)
    w = st.wf + (muhat * st.wg).sum(axis=1)
    x_new = np.empty_like(x)
    quad = w == 0.0
    if np.any(quad):
        x_new[quad] = (xhat[quad] - alpha * q[quad]) / (1.0 + alpha * p[quad])
    logm = (~quad) & (p == 0.0)
    if np.any(logm):
        x_new[logm] = neglog_prox_root(q[logm], w[logm], xhat[logm], alpha)
    hard = (~quad) & (p != 0.0)
    for i in np.nonzero(hard)[0]:
        # mixed quadratic+log: scalar bisection on the monotone derivative
        from .proxops import _bisect_scalar

        def h(xv, i=i):
            return (
                p[i] * xv
                + q[i]
                - w[i] / (1.0 + xv)
                + (xv - xhat[i]) / alpha
            )

        x_new[i] = _bisect_scalar(h, st.lo, st.hi, 1e-12)
    np.clip(x_new, st.lo, st.hi, out=x_new)
    gv = st.g_values(x_new)
    mu_new = np.maximum(muhat + alpha * gv, 0.0)
    nrm = np.linalg.norm(mu_new, axis=1)
    over = nrm > U0
    if np.any(over):
        mu_new[over] *= (U0 / nrm[over])[:, None]
    return x_new, mu_new


# ----------------------------------------------------------------------


class _TraceBuilder:
    def __init__(self, n, stride, f_star):
        self.rows = []
        self.n = n
        self.stride = stride
        self.f_star = f_star
        self.lag_sum = 0.0

    def observe(self, k, alpha, x, mu, lag_value, g_total, record):
        # called after round k completes with the round-(k+1) iterates
        self.lag_sum += lag_value
        if not record:
            return
        xbar = x.mean(axis=0)
        mubar = mu.mean(axis=0)
        cons_x = float(np.linalg.norm(x - xbar, axis=1).max())
        cons_mu = float(np.linalg.norm(mu - mubar, axis=1).max())
        run_mean = self.lag_sum / k
        err = abs(run_mean - self.f_star) if self.f_star is not None else np.nan
        viol = float(np.linalg.norm(np.maximum(g_total, 0.0)))
        self.rows.append(
            (k, alpha, xbar.copy(), mubar.copy(), cons_x, cons_mu, lag_value, err, viol, run_mean)
        )

    def build(self, final_state):
        if self.rows:
            cols = list(zip(*self.rows))
        else:
            cols = [[]] * 10
        m = self.rows[0][3].shape[0] if self.rows else 1
        return RunTrace(
            k=np.array(cols[0], dtype=int),
            alpha=np.array(cols[1], dtype=float),
            xbar=np.array(cols[2], dtype=float).reshape(-1, self.n),
            mubar=np.array(cols[3], dtype=float).reshape(-1, m),
            cons_x=np.array(cols[4], dtype=float),
            cons_mu=np.array(cols[5], dtype=float),
            lagrangian=np.array(cols[6], dtype=float),
            run_eval_err=np.array(cols[7], dtype=float),
            constr_viol=np.array(cols[8], dtype=float),
            run_mean=np.array(cols[9], dtype=float),
            stride=self.stride,
            f_star=self.f_star,
            final_state=final_state,
        )


def run(p, sched, cfg):
    """Execute cfg.K rounds of the primal-dual update and record a trace.

    Deterministic for a fixed problem, schedule, and config.
    """
    if sched.N != p.N:
        raise ValueError("schedule size does not match agent count")
    state = initial_state(p, cfg.U0, cfg.init)
    st = extract_scalar_structure(p)
    tb = _TraceBuilder(p.n, cfg.stride, cfg.f_star)
    x, mu = state.x.copy(), state.mu.copy()
    if st is not None:
        xs = x[:, 0].copy()
        for k in range(cfg.K):
            A = sched.matrix(k)
            alpha = cfg.stepsize.alpha(k)
            xs, mu = _vectorized_round(st, A, xs, mu, alpha, cfg.U0)
            if k >= 1:
                xbar = float(xs.mean())
                mubar = mu.mean(axis=0)
                lag = st.lagrangian(xbar, mubar)
                record = (k % cfg.stride == 0) or (k == cfg.K - 1)
                tb.observe(k, alpha, xs[:, None], mu, lag, st.g_total(xbar), record)
        final = SwarmState(cfg.K, xs[:, None].copy(), mu.copy())
    else:
        cur = state
        for k in range(cfg.K):
            A = sched.matrix(k)
            alpha = cfg.stepsize.alpha(k)
            cur = dppd_round(p, A, cur, alpha, cfg.U0)
            if k >= 1:
                xbar = cur.x.mean(axis=0)
                mubar = cur.mu.mean(axis=0)
                g_tot = p.constraint(xbar)
                lag = p.objective(xbar) + float(mubar @ g_tot)
                record = (k % cfg.stride == 0) or (k == cfg.K - 1)
                tb.observe(k, alpha, cur.x, cur.mu, lag, g_tot, record)
        final = cur
    return tb.build(final)


def running_eval_error(trace, f_star):
    """(k, |running Lagrangian average - f_star|) for every recorded row."""
    if trace.run_mean.size == 0:
        raise ValueError("trace carries no Lagrangian records")
    return trace.k.copy(), np.abs(trace.run_mean - f_star)


def rate_fit(ks, errs, k_min, k_max):
    """Least-squares slope of log(error) against log(k) on [k_min, k_max].

    Returns (slope, r_squared).
    """
    ks = np.asarray(ks, dtype=float)
    errs = np.asarray(errs, dtype=float)
    sel = (ks >= k_min) & (ks <= k_max) & (errs > 0)
    if sel.sum() < 10:
        raise ValueError("need at least 10 positive-error points in the window")
    res = stats.linregress(np.log(ks[sel]), np.log(errs[sel]))
    return float(res.slope), float(res.rvalue**2)
