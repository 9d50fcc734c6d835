"""Evolution strategies and a simplex direct search over metered problem handles.

:func:`run_es` is a (mu/mu_w, lambda) or (mu + lambda) evolution strategy with
cumulative step-size adaptation and five switchable modules (covariance
adaptation, elitism, boundary saturation, lambda, mu). :func:`run_one_plus_one`
and :func:`run_simplex_local` are the local searchers used for basin analysis.
"""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass

import numpy as np

from .problem import BudgetExhausted
from .runlog import Recorder, RunLog

LAMBDAS = (5, 10, 20, 100, 200)
MUS = (5, 10, 20, 50, 100)
BOUNDARY_RULES = ("off", "saturate")


@dataclass(frozen=True)
class OptimizerConfig:
    covariance_adaptation: bool = True
    elitism: bool = False
    boundary_correction: str = "off"
    lambda_: int = 10
    mu: int = 5
    sigma0: float = 0.2

    def __post_init__(self):
        if self.boundary_correction not in BOUNDARY_RULES:
            raise ValueError(f"boundary_correction must be one of {BOUNDARY_RULES}")
        if self.mu < 1 or self.lambda_ < self.mu:
            raise ValueError(f"need 1 <= mu <= lambda, got mu={self.mu}, lambda={self.lambda_}")
        if self.sigma0 <= 0:
            raise ValueError("sigma0 must be positive")

    @property
    def config_id(self) -> str:
        return (f"C{int(self.covariance_adaptation)}-E{int(self.elitism)}-"
                f"B{int(self.boundary_correction == 'saturate')}-"
                f"L{self.lambda_:03d}-M{self.mu:03d}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["config_id"] = self.config_id
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "OptimizerConfig":
        return cls(bool(d["covariance_adaptation"]), bool(d["elitism"]), d["boundary_correction"],
                   int(d["lambda_"]), int(d["mu"]), float(d.get("sigma0", 0.2)))

    @classmethod
    def from_id(cls, config_id: str, sigma0: float = 0.2) -> "OptimizerConfig":
        try:
            c, e, b, lam, mu = config_id.split("-")
            return cls(c == "C1", e == "E1", "saturate" if b == "B1" else "off",
                       int(lam[1:]), int(mu[1:]), sigma0)
        except ValueError:
            raise ValueError(f"malformed config id {config_id!r}") from None


DEFAULT_CONFIG = OptimizerConfig()


def enumerate_configs(sigma0: float = 0.2) -> list[OptimizerConfig]:
    """All valid module combinations (128), ordered by config id."""
    out = [
        OptimizerConfig(cov, eli, bnd, lam, mu, sigma0)
        for cov, eli, bnd, lam, mu in itertools.product(
            (False, True), (False, True), BOUNDARY_RULES, LAMBDAS, MUS)
        if mu <= lam
    ]
    return sorted(out, key=lambda c: c.config_id)


def _weights(mu: int) -> np.ndarray:
    w = np.log(mu + 0.5) - np.log(np.arange(1, mu + 1))
    return w / w.sum()


def run_es(handle, config: OptimizerConfig, budget: int | None = None, seed: int = 0,
           on_generation=None, run_log: RunLog | None = None) -> RunLog:
    """Run one evolution strategy until ``budget`` evaluations are spent.

    The initial mean is uniform in [0, 1]^m and every generation draws a full
    ``lambda x m`` block of standard normals, so runs that share ``seed`` and
    ``lambda`` evaluate identical first-generation samples whatever the other
    modules are. A final partial generation uses up any remainder of the
    budget without updating the strategy.

    ``on_generation``, if given, is called after each update with a dict of
    the internal state (``generation``, ``mean``, ``sigma``, ``C``,
    ``incumbent``).
    """
    budget = handle.remaining if budget is None else int(budget)
    if budget < config.lambda_:
        raise ValueError(f"budget {budget} is smaller than lambda={config.lambda_}")
    if budget > handle.remaining:
        raise ValueError(f"budget {budget} exceeds the handle's remaining {handle.remaining}")
    n = handle.dimension
    lam, mu = config.lambda_, config.mu
    rng = np.random.default_rng(seed)
    log = run_log or RunLog(handle.problem_id, config.config_id, seed=seed)
    log.seed, log.budget = seed, budget
    rec = Recorder(handle, log)
    stop_at = handle.evaluations + budget

    w = _weights(mu)
    mueff = 1.0 / np.sum(w ** 2)
    cs = (mueff + 2) / (n + mueff + 5)
    ds = 1 + 2 * max(0.0, np.sqrt((mueff - 1) / (n + 1)) - 1) + cs
    cc = (4 + mueff / n) / (n + 4 + 2 * mueff / n)
    c1 = 2 / ((n + 1.3) ** 2 + mueff)
    cmu = min(1 - c1, 2 * (mueff - 2 + 1 / mueff) / ((n + 2) ** 2 + mueff))
    chi_n = np.sqrt(n) * (1 - 1 / (4 * n) + 1 / (21 * n ** 2))

    mean = rng.uniform(0.0, 1.0, n)
    sigma = config.sigma0
    C = np.eye(n)
    B = np.eye(n)
    D = np.ones(n)
    ps = np.zeros(n)
    pc = np.zeros(n)
    parents_x = np.empty((0, n))
    parents_f = np.empty(0)
    gen = 0
    saturate = config.boundary_correction == "saturate"

    while handle.evaluations < stop_at:
        z = rng.standard_normal((lam, n))
        x = mean + sigma * (z * D) @ B.T
        if saturate:
            np.clip(x, 0.0, 1.0, out=x)
        count = min(lam, stop_at - handle.evaluations)
        f = handle.evaluate_batch(x[:count])
        rec.batch(x[:count], f)
        rec.boundary()
        if count < lam:
            break

        if config.elitism:
            pool_x = np.vstack([x, parents_x])
            pool_f = np.concatenate([f, parents_f])
        else:
            pool_x, pool_f = x, f
        order = np.argsort(pool_f, kind="stable")[:mu]
        sel_x, sel_f = pool_x[order], pool_f[order]
        steps = (sel_x - mean) / sigma
        y_w = w @ steps
        mean = mean + sigma * y_w

        c_inv_sqrt_y = B @ ((B.T @ y_w) / D)
        ps = (1 - cs) * ps + np.sqrt(cs * (2 - cs) * mueff) * c_inv_sqrt_y
        ps_norm = np.linalg.norm(ps)
        hsig = ps_norm / np.sqrt(1 - (1 - cs) ** (2 * (gen + 1))) / chi_n < 1.4 + 2 / (n + 1)
        if config.covariance_adaptation:
            pc = (1 - cc) * pc + hsig * np.sqrt(cc * (2 - cc) * mueff) * y_w
            rank_mu = (steps * w[:, None]).T @ steps
            C = ((1 - c1 - cmu) * C
                 + c1 * (np.outer(pc, pc) + (1 - hsig) * cc * (2 - cc) * C)
                 + cmu * rank_mu)
            C = (C + C.T) / 2
            eigval, B = np.linalg.eigh(C)
            D = np.sqrt(np.maximum(eigval, 1e-30))
        # Capped as in reference CMA-ES code; elitist parents far from the mean can inflate ps.
        sigma *= np.exp(min(1.0, (cs / ds) * (ps_norm / chi_n - 1)))
        sigma = float(np.clip(sigma, 1e-300, 1e6))

        if config.elitism:
            parents_x, parents_f = sel_x, sel_f
        gen += 1
        if on_generation is not None:
            on_generation({"generation": gen, "mean": mean.copy(), "sigma": sigma,
                           "C": C.copy(), "incumbent": float(sel_f[0]) if config.elitism
                           else rec.best_f})
    return rec.finish()


def _check_start(handle, start) -> np.ndarray:
    start = np.asarray(start, dtype=float)
    if start.shape != (handle.dimension,) or not np.all(np.isfinite(start)):
        raise ValueError(f"start must be a finite vector of length {handle.dimension}")
    return start


def run_one_plus_one(handle, start, sigma0: float = 0.1, budget: int | None = None, seed: int = 0,
                     adapt_covariance: bool = False) -> RunLog:
    """(1+1)-ES with smoothed success-rule step-size control.

    Isotropic mutations by default; ``adapt_covariance=True`` adds the
    rank-one covariance update of the (1+1)-CMA-ES. Equal
    values are accepted, which lets the search drift across flat regions.
    """
    start = _check_start(handle, start)
    if np.any(start < 0) or np.any(start > 1):
        raise ValueError("start must lie in the unit box")
    budget = handle.remaining if budget is None else int(budget)
    n = handle.dimension
    rng = np.random.default_rng(seed)
    log = RunLog(handle.problem_id, "one_plus_one", seed=seed, budget=budget)
    rec = Recorder(handle, log)
    stop_at = handle.evaluations + budget

    d = 1 + n / 2
    p_target, c_p = 2 / 11, 1 / 12
    cc, ccov, p_thresh = 2 / (n + 2), 2 / (n ** 2 + 6), 0.44
    p_succ = p_target
    sigma = sigma0
    C = np.eye(n)
    A = np.eye(n)
    pc = np.zeros(n)

    x = start.copy()
    fx = handle.evaluate(x)
    rec.one(x, fx)
    while handle.evaluations < stop_at:
        step = A @ rng.standard_normal(n)
        cand = x + sigma * step
        fc = handle.evaluate(cand)
        rec.one(cand, fc)
        success = fc <= fx
        p_succ = (1 - c_p) * p_succ + c_p * success
        sigma *= np.exp((p_succ - p_target) / (d * (1 - p_target)))
        sigma = float(np.clip(sigma, 1e-300, 1e6))
        if success:
            x, fx = cand, fc
            if adapt_covariance:
                if p_succ < p_thresh:
                    pc = (1 - cc) * pc + np.sqrt(cc * (2 - cc)) * step
                    C = (1 - ccov) * C + ccov * np.outer(pc, pc)
                else:
                    pc = (1 - cc) * pc
                    C = (1 - ccov) * C + ccov * (np.outer(pc, pc) + cc * (2 - cc) * C)
                A = np.linalg.cholesky(C)
    return rec.finish()


def run_simplex_local(handle, start, budget: int | None = None, seed: int = 0,
                      initial_step: float = 0.1, xtol: float = 1e-9) -> RunLog:
    """Nelder-Mead with coefficients 1, 2, 0.5, 0.5.

    The initial simplex steps ``initial_step`` along each axis, with the sign
    of each step drawn from ``seed``. Stops once the simplex diameter drops
    below ``xtol`` or the budget is spent.
    """
    start = _check_start(handle, start)
    budget = handle.remaining if budget is None else int(budget)
    n = handle.dimension
    rng = np.random.default_rng(seed)
    log = RunLog(handle.problem_id, "simplex", seed=seed, budget=budget)
    rec = Recorder(handle, log)
    stop_at = handle.evaluations + budget
    alpha, gamma, rho, shrink = 1.0, 2.0, 0.5, 0.5

    def f(p):
        if handle.evaluations >= stop_at:
            raise BudgetExhausted("local budget spent")
        v = handle.evaluate(p)
        rec.one(p, v)
        return v

    signs = rng.choice((-1.0, 1.0), size=n)
    sim = np.vstack([start, start + initial_step * np.diag(signs)])
    try:
        fs = np.array([f(p) for p in sim])
        while True:
            order = np.argsort(fs, kind="stable")
            sim, fs = sim[order], fs[order]
            diam = np.max(np.linalg.norm(sim[:, None, :] - sim[None, :, :], axis=2))
            if diam < xtol:
                break
            centroid = sim[:-1].mean(axis=0)
            xr = centroid + alpha * (centroid - sim[-1])
            fr = f(xr)
            if fr < fs[0]:
                xe = centroid + gamma * (xr - centroid)
                fe = f(xe)
                sim[-1], fs[-1] = (xe, fe) if fe < fr else (xr, fr)
                continue
            if fr < fs[-2]:
                sim[-1], fs[-1] = xr, fr
                continue
            if fr < fs[-1]:
                xc = centroid + rho * (xr - centroid)
                fc = f(xc)
                if fc <= fr:
                    sim[-1], fs[-1] = xc, fc
                    continue
            else:
                xc = centroid + rho * (sim[-1] - centroid)
                fc = f(xc)
                if fc < fs[-1]:
                    sim[-1], fs[-1] = xc, fc
                    continue
            for i in range(1, n + 1):
                sim[i] = sim[0] + shrink * (sim[i] - sim[0])
                fs[i] = f(sim[i])
    except BudgetExhausted:
        pass
    return rec.finish()
