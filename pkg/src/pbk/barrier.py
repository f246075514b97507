"""Double-knock-out model on (a, b): sine eigenfamilies and spectral ladders.

Between two absorbing log-barriers the tilted generator has the classic
Dirichlet sine eigenfunctions Phi_n = sqrt(2/L) sin(lambda_{n+1}(x-a)) with
lambda_n = n pi / L, and the tilt produces biorthogonal families varphi_n =
e^{beta x} Phi_n, psi_n = e^{-beta x} Phi_n exactly as on the whole line.

Two ladder constructions live here side by side:

* the naive differential factorization (apply_A_naive / apply_B_naive) built
  from the cotangent superpotential. Its product reproduces the Hamiltonian,
  and A annihilates the ground state, but B does NOT map varphi_0 to
  varphi_1; it produces a cosine profile instead. The
  failed_factorization_residual quantifies exactly how far from a ladder it
  is (about 0.53 at beta = 0, never below 0.1);
* the spectral ladder (apply_A_hat / apply_B_hat and their adjoints), defined
  directly on expansion coefficients with the strictly increasing sequence
  rho_n = lambda_{n+1}^2 - lambda_1^2. These are exact coefficient shifts
  and do satisfy every ladder identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .grids import GridFunction
from .market import MarketParams
from .quadrature import legendre_rule

FAMILY_MAX = 200
DEFAULT_TRUNCATION = 128
ANALYSIS_NODES = 1024


@dataclass(frozen=True)
class BarrierParams:
    """Market parameters plus the log-price barriers a < b."""

    market: MarketParams
    a: float
    b: float

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise ValueError(f"barriers must satisfy a < b, got ({self.a}, {self.b})")

    @property
    def sigma(self) -> float:
        return self.market.sigma

    @property
    def r(self) -> float:
        return self.market.r

    @property
    def beta(self) -> float:
        return self.market.beta

    @property
    def gamma(self) -> float:
        return self.market.gamma

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def k_squared(self) -> float:
        """Decay constant sigma^2 pi^2 / (2 L^2) of the kernel's sine series."""
        return self.sigma**2 * math.pi**2 / (2.0 * self.width**2)

    @property
    def delta_prime(self) -> float:
        """Constant gamma + sigma^2 lambda_1^2 / 2 completing the factorized Hamiltonian."""
        return self.gamma + self.sigma**2 * self.wavenumber(1) ** 2 / 2.0

    def wavenumber(self, n: int) -> float:
        """lambda_n = n pi / L; mode n of the family carries lambda_{n+1}."""
        return n * math.pi / self.width


def eigenvalue(params: BarrierParams, n: int) -> float:
    """Energy of mode n: sigma^2 lambda_{n+1}^2 / 2 + gamma."""
    if n < 0:
        raise ValueError(f"mode index must be nonnegative, got {n}")
    return params.sigma**2 * params.wavenumber(n + 1) ** 2 / 2.0 + params.gamma


def rho_coefficient(params: BarrierParams, n: int) -> float:
    """Ladder eigenvalue rho_n = lambda_{n+1}^2 - lambda_1^2 = pi^2 n (n+2) / L^2.

    Strictly increasing with rho_0 = 0; the product form avoids cancellation.
    """
    if n < 0:
        raise ValueError(f"mode index must be nonnegative, got {n}")
    return math.pi**2 * n * (n + 2.0) / params.width**2


def _check_mode(n: int) -> None:
    if not 0 <= n <= FAMILY_MAX:
        raise ValueError(f"mode index must be in 0..{FAMILY_MAX}, got {n}")


def Phi_n(params: BarrierParams, n: int) -> Callable:
    """Orthonormal sine mode sqrt(2/L) sin(lambda_{n+1}(x-a)), zero outside (a, b)."""
    _check_mode(n)
    lam = params.wavenumber(n + 1)
    amp = math.sqrt(2.0 / params.width)
    a, b = params.a, params.b

    def mode(x):
        x = np.asarray(x, dtype=float)
        inside = (x >= a) & (x <= b)
        vals = np.where(inside, amp * np.sin(lam * (x - a)), 0.0)
        return vals if vals.ndim else float(vals)

    return mode


def _tilted_mode(params: BarrierParams, n: int, rate: float) -> Callable:
    base = Phi_n(params, n)

    def mode(x):
        x_arr = np.asarray(x, dtype=float)
        return np.exp(rate * x_arr) * base(x_arr)

    return mode


def varphi_n(params: BarrierParams, n: int) -> Callable:
    """e^{beta x} Phi_n."""
    return _tilted_mode(params, n, params.beta)


def psi_n(params: BarrierParams, n: int) -> Callable:
    """e^{-beta x} Phi_n."""
    return _tilted_mode(params, n, -params.beta)


# ---------------------------------------------------------------------------
# The naive differential factorization (the one that fails to ladder)


def _require_interior_grid(params: BarrierParams, f: GridFunction) -> None:
    slack = 1e-9 * f.dx
    lo = f.x0
    hi = f.x0 + f.dx * (f.n - 1)
    if lo < params.a + 2.0 * f.dx - slack or hi > params.b - 2.0 * f.dx + slack:
        raise ValueError(
            "grid must stay at least 2 steps clear of the cotangent singularities "
            f"at the barriers: got [{lo}, {hi}] inside ({params.a}, {params.b}) "
            f"with step {f.dx}"
        )


def _naive_first_order(params: BarrierParams, f: GridFunction, d_sign: float, beta_sign: float):
    from .grids import derivative

    _require_interior_grid(params, f)
    lam1 = params.wavenumber(1)
    d = derivative(f)
    mid = f.interior(1)
    cot = lam1 / np.tan(lam1 * (d.x - params.a))
    vals = d_sign * d.samples - cot * mid.samples + beta_sign * params.beta * mid.samples
    return d.with_samples(vals)


def apply_A_naive(params: BarrierParams, f: GridFunction) -> GridFunction:
    """A = d/dx - lambda_1 cot(lambda_1 (x-a)) - beta; annihilates varphi_0."""
    return _naive_first_order(params, f, +1.0, -1.0)


def apply_B_naive(params: BarrierParams, f: GridFunction) -> GridFunction:
    """B = -d/dx - lambda_1 cot(lambda_1 (x-a)) + beta.

    Together with A it factorizes the Hamiltonian, but it is not a raising
    operator: B varphi_0 is a tilted cosine, not varphi_1.
    """
    return _naive_first_order(params, f, -1.0, +1.0)


def failed_factorization_residual(params: BarrierParams, n_points: int = 16001) -> float:
    """min over c of ||B varphi_0 - c varphi_1|| / ||B varphi_0|| on an interior grid.

    This is the quantitative form of the no-go observation: were B a genuine
    raising operator the residual would vanish. At beta = 0 it equals
    sqrt(1 - (8/(3 pi))^2) ~ 0.5288, and it stays above 0.1 for every market.
    """
    h = params.width / (n_points + 3)
    x = params.a + 2.0 * h + h * np.arange(n_points)
    grid = GridFunction(params.a + 2.0 * h, h, varphi_n(params, 0)(x))
    raised = apply_B_naive(params, grid)
    target = varphi_n(params, 1)(raised.x)
    num = float(np.sum(raised.samples * target))
    corr_sq = num * num / (
        float(np.sum(raised.samples**2)) * float(np.sum(target**2))
    )
    return math.sqrt(max(0.0, 1.0 - corr_sq))


# ---------------------------------------------------------------------------
# The spectral ladder (the one that works)


@dataclass(frozen=True)
class SpectralVector:
    """Expansion coefficients c_0..c_{n_max} of f = sum c_n varphi_n (or psi_n).

    discarded_tail reports the magnitude a raising operator pushed past the
    truncation cap instead of silently dropping it.
    """

    coeffs: np.ndarray = field(repr=False)
    n_max: int = DEFAULT_TRUNCATION
    discarded_tail: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", np.atleast_1d(np.asarray(self.coeffs)))
        if self.coeffs.size != self.n_max + 1:
            raise ValueError(
                f"need n_max + 1 = {self.n_max + 1} coefficients, got {self.coeffs.size}"
            )


def _mode_matrix(params: BarrierParams, n_max: int, x: np.ndarray) -> np.ndarray:
    """Rows Phi_0(x)..Phi_{n_max}(x)."""
    lam1 = params.wavenumber(1)
    orders = np.arange(1, n_max + 2)
    return math.sqrt(2.0 / params.width) * np.sin(
        np.outer(orders, lam1 * (x - params.a))
    )


def analyze_phi(params: BarrierParams, f: Callable, n_max: int = DEFAULT_TRUNCATION,
                nodes: int = ANALYSIS_NODES) -> SpectralVector:
    """Coefficients c_n = <psi_n, f> of the varphi-expansion of f."""
    rule = legendre_rule(nodes, params.a, params.b)
    modes = _mode_matrix(params, n_max, rule.nodes)
    weighted = rule.weights * np.exp(-params.beta * rule.nodes) * np.asarray(f(rule.nodes))
    return SpectralVector(modes @ weighted, n_max)


def analyze_psi(params: BarrierParams, f: Callable, n_max: int = DEFAULT_TRUNCATION,
                nodes: int = ANALYSIS_NODES) -> SpectralVector:
    """Coefficients d_n = <varphi_n, f> of the psi-expansion of f."""
    rule = legendre_rule(nodes, params.a, params.b)
    modes = _mode_matrix(params, n_max, rule.nodes)
    weighted = rule.weights * np.exp(params.beta * rule.nodes) * np.asarray(f(rule.nodes))
    return SpectralVector(modes @ weighted, n_max)


def synthesize_phi(params: BarrierParams, v: SpectralVector) -> Callable:
    """The function sum_n c_n varphi_n, zero outside (a, b)."""

    def combination(x):
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        inside = (x_arr >= params.a) & (x_arr <= params.b)
        modes = _mode_matrix(params, v.n_max, x_arr)
        vals = np.exp(params.beta * x_arr) * (v.coeffs @ modes)
        vals = np.where(inside, vals, 0.0)
        return vals if np.ndim(x) else float(vals[0])

    return combination


def synthesize_psi(params: BarrierParams, v: SpectralVector) -> Callable:
    """The function sum_n d_n psi_n, zero outside (a, b)."""

    def combination(x):
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        inside = (x_arr >= params.a) & (x_arr <= params.b)
        modes = _mode_matrix(params, v.n_max, x_arr)
        vals = np.exp(-params.beta * x_arr) * (v.coeffs @ modes)
        vals = np.where(inside, vals, 0.0)
        return vals if np.ndim(x) else float(vals[0])

    return combination


def _sqrt_rho(params: BarrierParams, n: np.ndarray) -> np.ndarray:
    return math.pi / params.width * np.sqrt(n * (n + 2.0))


def apply_A_hat(params: BarrierParams, v: SpectralVector) -> SpectralVector:
    """Lowering on the varphi-expansion: out_n = sqrt(rho_{n+1}) c_{n+1}."""
    out = np.zeros_like(v.coeffs)
    n = np.arange(1, v.n_max + 1)
    out[:-1] = _sqrt_rho(params, n) * v.coeffs[1:]
    return SpectralVector(out, v.n_max)


def apply_B_hat(params: BarrierParams, v: SpectralVector) -> SpectralVector:
    """Raising on the varphi-expansion: out_n = sqrt(rho_n) c_{n-1}.

    The contribution that would land on mode n_max + 1 is reported in
    discarded_tail.
    """
    out = np.zeros_like(v.coeffs)
    n = np.arange(1, v.n_max + 1)
    out[1:] = _sqrt_rho(params, n) * v.coeffs[:-1]
    tail = abs(_sqrt_rho(params, np.array([v.n_max + 1]))[0] * v.coeffs[-1])
    return SpectralVector(out, v.n_max, discarded_tail=float(tail))


def apply_A_hat_dag(params: BarrierParams, v: SpectralVector) -> SpectralVector:
    """Raising on the psi-expansion: out_n = sqrt(rho_n) d_{n-1}; reports the tail."""
    out = np.zeros_like(v.coeffs)
    n = np.arange(1, v.n_max + 1)
    out[1:] = _sqrt_rho(params, n) * v.coeffs[:-1]
    tail = abs(_sqrt_rho(params, np.array([v.n_max + 1]))[0] * v.coeffs[-1])
    return SpectralVector(out, v.n_max, discarded_tail=float(tail))


def apply_B_hat_dag(params: BarrierParams, v: SpectralVector) -> SpectralVector:
    """Lowering on the psi-expansion: out_n = sqrt(rho_{n+1}) d_{n+1}."""
    out = np.zeros_like(v.coeffs)
    n = np.arange(1, v.n_max + 1)
    out[:-1] = _sqrt_rho(params, n) * v.coeffs[1:]
    return SpectralVector(out, v.n_max)


def _multiply_exponential(params: BarrierParams, f, rate: float):
    if isinstance(f, GridFunction):
        return f.with_samples(np.exp(rate * f.x) * f.samples)
    if callable(f):
        return lambda x: np.exp(rate * np.asarray(x, dtype=float)) * f(x)
    raise TypeError(f"cannot multiply object of type {type(f).__name__}")


def apply_S_phi(params: BarrierParams, f):
    """Multiply by S_phi = e^{2 beta x}; bounded on (a, b), maps psi_n to varphi_n."""
    return _multiply_exponential(params, f, 2.0 * params.beta)


def apply_S_psi(params: BarrierParams, f):
    """Multiply by S_psi = e^{-2 beta x}; inverse of S_phi, maps varphi_n to psi_n."""
    return _multiply_exponential(params, f, -2.0 * params.beta)
