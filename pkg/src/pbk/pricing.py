"""Option prices from the kernels, plus Monte Carlo and Black-Scholes oracles.

The kernel price is a Gauss-Legendre integral of kernel times payoff over the
model domain, split at the strike kink. The Monte Carlo oracle simulates GBM
log-paths with exact Gaussian increments, knocks out on the barriers (with a
Brownian-bridge crossing correction for what happens between monitoring
dates), and reduces path blocks in a fixed order so a given seed produces
bit-identical results no matter how many worker threads run.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from .barrier import BarrierParams
from .harmonic import HarmonicParams
from .kernels import (
    DEFAULT_N_TRUNC,
    barrier_spectral_values,
    harmonic_spectral_values,
)
from .quadrature import legendre_rule

PAYOFF_KINDS = ("call", "put", "digital_call")
DEFAULT_NODES = 240
MC_BLOCK_PATHS = 8192
PRICE_WINDOW_SIGMAS = 10.0

ModelParams = Union[HarmonicParams, BarrierParams]


@dataclass(frozen=True)
class Payoff:
    """A payoff on the terminal price, evaluated in log-price coordinates."""

    kind: str
    strike: float

    def __post_init__(self) -> None:
        if self.kind not in PAYOFF_KINDS:
            raise ValueError(f"kind must be one of {PAYOFF_KINDS}, got {self.kind!r}")
        if not self.strike > 0.0:
            raise ValueError(f"strike must be positive, got {self.strike}")

    @classmethod
    def call(cls, strike: float) -> "Payoff":
        return cls("call", strike)

    @classmethod
    def put(cls, strike: float) -> "Payoff":
        return cls("put", strike)

    @classmethod
    def digital_call(cls, strike: float) -> "Payoff":
        return cls("digital_call", strike)

    def as_log(self, x):
        """payoff(e^x), vectorized over log-prices x."""
        s = np.exp(np.asarray(x, dtype=float))
        if self.kind == "call":
            return np.maximum(s - self.strike, 0.0)
        if self.kind == "put":
            return np.maximum(self.strike - s, 0.0)
        return np.where(s > self.strike, 1.0, 0.0)


@dataclass(frozen=True)
class MCConfig:
    """Monte Carlo knobs. Standard errors are only meaningful for paths
    of 1e4 and up; this is documented, not enforced."""

    paths: int = 200_000
    steps: int = 512
    seed: int = 20240901
    bridge_correction: bool = True

    def __post_init__(self) -> None:
        if self.paths < 1:
            raise ValueError(f"paths must be >= 1, got {self.paths}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")


@dataclass(frozen=True)
class PricingResult:
    value: float
    method: str
    stderr: Optional[float] = None
    config_echo: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.stderr is not None and not self.stderr > 0.0:
            raise ValueError(f"stderr must be positive when present, got {self.stderr}")

    def to_dict(self) -> dict:
        out = {"value": self.value, "method": self.method,
               "config_echo": self.config_echo}
        if self.stderr is not None:
            out["stderr"] = self.stderr
        return out

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


# ---------------------------------------------------------------------------
# kernel-integral price


def _panels(lo: float, hi: float, kink: float) -> Tuple[Tuple[float, float], ...]:
    if lo < kink < hi:
        return ((lo, kink), (kink, hi))
    return ((lo, hi),)


def price_spectral(params: ModelParams, which: str, payoff: Payoff, x: float,
                   tau: float, n_trunc: int = DEFAULT_N_TRUNC,
                   nodes: int = DEFAULT_NODES,
                   beta: Optional[float] = None) -> PricingResult:
    """C(x; tau) = integral of the spectral kernel times payoff(e^{x'}).

    Integration runs over (a, b) for the barrier model and over a
    10-standard-deviation window for the whole-line model, with a panel
    break at the strike kink either way.
    """
    if which not in ("p1", "p2"):
        raise ValueError(f"which must be 'p1' or 'p2', got {which!r}")
    if not tau > 0.0:
        raise ValueError(f"tau must be positive, got {tau}")
    s = 1.0 if which == "p1" else -1.0
    b = params.beta if beta is None else float(beta)
    if isinstance(params, BarrierParams):
        if not params.a < x < params.b:
            raise ValueError(f"spot log-price {x} outside barriers "
                             f"({params.a}, {params.b})")
        lo, hi = params.a, params.b

        def kernel_at(xp):
            return barrier_spectral_values(params, x, xp, tau, s, b, n_trunc)

    else:
        half = PRICE_WINDOW_SIGMAS * params.sigma * max(1.0, math.sqrt(tau))
        lo = min(x, params.center) - half
        hi = max(x, params.center) + half

        def kernel_at(xp):
            return harmonic_spectral_values(params, x, xp, tau, s, b, n_trunc)

    total = 0.0
    for panel_lo, panel_hi in _panels(lo, hi, math.log(payoff.strike)):
        rule = legendre_rule(nodes, panel_lo, panel_hi)
        values, _ = kernel_at(rule.nodes)
        total += float(np.dot(rule.weights, values * payoff.as_log(rule.nodes)))
    echo = {"model": "barrier" if isinstance(params, BarrierParams) else "harmonic",
            "which": which, "payoff": payoff.kind, "strike": payoff.strike,
            "x": x, "tau": tau, "n_trunc": n_trunc, "nodes": nodes}
    if beta is not None:
        echo["beta_override"] = float(beta)
    return PricingResult(total, f"spectral-{which}", config_echo=echo)


# ---------------------------------------------------------------------------
# Monte Carlo oracle


def _worker_count() -> int:
    raw = os.environ.get("PBK_THREADS", "")
    if not raw:
        return 1
    count = int(raw)
    if count < 1:
        raise ValueError(f"PBK_THREADS must be a positive integer, got {raw!r}")
    return count


def _block_sizes(paths: int) -> list:
    full, rem = divmod(paths, MC_BLOCK_PATHS)
    return [MC_BLOCK_PATHS] * full + ([rem] if rem else [])


def _simulate_block(block_index: int, size: int, x0: float, log_lo: float,
                    log_hi: float, sigma: float, r: float, tau: float,
                    cfg: MCConfig, payoff: Payoff) -> Tuple[float, float]:
    """Sum and sum-of-squares of surviving weighted payoffs for one block.

    The per-block generator is keyed by (seed, block_index), so the stream
    is independent of how blocks are scheduled across workers.
    """
    key = np.array([cfg.seed % 2**64, block_index], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    dt = tau / cfg.steps
    increments = (r - 0.5 * sigma * sigma) * dt + sigma * math.sqrt(
        dt
    ) * rng.standard_normal((size, cfg.steps))
    x = np.empty((size, cfg.steps + 1))
    x[:, 0] = x0
    x[:, 1:] = x0 + np.cumsum(increments, axis=1)

    d_lo = x - log_lo
    d_hi = log_hi - x
    dead = np.any((d_lo[:, 1:] <= 0.0) | (d_hi[:, 1:] <= 0.0), axis=1)
    if cfg.bridge_correction:
        var_dt = sigma * sigma * dt
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            p_lo = np.exp(-2.0 * d_lo[:, :-1] * d_lo[:, 1:] / var_dt)
            p_hi = np.exp(-2.0 * d_hi[:, :-1] * d_hi[:, 1:] / var_dt)
            log_survival = np.sum(
                np.log1p(-np.minimum(p_lo, 1.0)) + np.log1p(-np.minimum(p_hi, 1.0)),
                axis=1,
            )
        weights = np.where(dead, 0.0, np.exp(log_survival))
    else:
        weights = np.where(dead, 0.0, 1.0)
    values = weights * payoff.as_log(x[:, -1])
    return float(np.sum(values)), float(np.sum(values * values))


def price_mc_barrier(payoff: Payoff, s0: float, barriers: Tuple[float, float],
                     sigma: float, r: float, tau: float,
                     cfg: MCConfig) -> PricingResult:
    """Double-knock-out Monte Carlo price with standard error.

    Barriers are quoted in price units; the spot must start strictly inside.
    """
    lo, hi = barriers
    if not lo < hi:
        raise ValueError(f"degenerate barriers: need lower < upper, got {barriers}")
    if not lo < s0 < hi:
        raise ValueError(f"spot {s0} must start strictly inside {barriers}")
    if not (lo > 0.0 and sigma > 0.0 and tau > 0.0):
        raise ValueError("barriers, sigma and tau must all be positive")
    x0, log_lo, log_hi = math.log(s0), math.log(lo), math.log(hi)
    sizes = _block_sizes(cfg.paths)

    def run(i: int) -> Tuple[float, float]:
        return _simulate_block(i, sizes[i], x0, log_lo, log_hi, sigma, r, tau,
                               cfg, payoff)

    workers = _worker_count()
    if workers == 1:
        partials = [run(i) for i in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(run, range(len(sizes))))
    total = 0.0
    total_sq = 0.0
    for s1, s2 in partials:  # ascending block order: deterministic reduction
        total += s1
        total_sq += s2
    n = cfg.paths
    discount = math.exp(-r * tau)
    mean = total / n
    variance = max(total_sq / n - mean * mean, 0.0)
    if n > 1:
        variance *= n / (n - 1)
    stderr = discount * math.sqrt(variance / n)
    echo = {"s0": s0, "barriers": list(barriers), "sigma": sigma, "r": r,
            "tau": tau, "payoff": payoff.kind, "strike": payoff.strike,
            "paths": cfg.paths, "steps": cfg.steps, "seed": cfg.seed,
            "bridge_correction": cfg.bridge_correction, "rng": "philox4x64",
            "block_paths": MC_BLOCK_PATHS}
    return PricingResult(discount * mean, "mc-brownian-bridge",
                         stderr=stderr if stderr > 0.0 else None,
                         config_echo=echo)


# ---------------------------------------------------------------------------
# Black-Scholes reference


def _norm_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def bs_closed_form(kind: str, s0: float, strike: float, sigma: float, r: float,
                   tau: float) -> float:
    """Vanilla Black-Scholes price via the erf-based normal CDF."""
    if kind not in PAYOFF_KINDS:
        raise ValueError(f"kind must be one of {PAYOFF_KINDS}, got {kind!r}")
    if not (sigma > 0.0 and tau > 0.0):
        raise ValueError("sigma and tau must be positive")
    if not (s0 > 0.0 and strike > 0.0):
        raise ValueError("spot and strike must be positive")
    sqrt_tau = math.sqrt(tau)
    d1 = (math.log(s0 / strike) + (r + 0.5 * sigma * sigma) * tau) / (sigma * sqrt_tau)
    d2 = d1 - sigma * sqrt_tau
    if kind == "call":
        return s0 * _norm_cdf(d1) - strike * math.exp(-r * tau) * _norm_cdf(d2)
    if kind == "put":
        return strike * math.exp(-r * tau) * _norm_cdf(-d2) - s0 * _norm_cdf(-d1)
    return math.exp(-r * tau) * _norm_cdf(d2)
