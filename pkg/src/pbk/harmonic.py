"""Whole-line model: tilted oscillator eigenfamilies and their operators.

Adding a quadratic potential V(x) = (sigma^2/2) W(x)^2 - 1/2 with
W(x) = x/sigma^2 + w to the pricing generator H_BS produces a non-self-adjoint
Hamiltonian H_eff that the exponential tilt rho = e^{-beta x} conjugates to a
shifted harmonic oscillator h_eff. The oscillator's orthonormal eigenfunctions
Phi_n give two biorthogonal families

    varphi_n = e^{+beta x} Phi_n,    psi_n = e^{-beta x} Phi_n,

eigenfunctions of H_eff and of its adjoint with the common spectrum n + delta.

Operators come in two interchangeable realizations:

* on a ``GridFunction``, derivatives are second-order central differences
  (output two samples shorter); the realization is independent of the
  eigenbasis, so eigen-equation residuals genuinely measure the operators;
* on a ``HermiteExpansion`` (a finite combination e^{t x} sum c_k Phi_k),
  d/dx and multiplication by x are exact coefficient recurrences, so ladder
  and eigen identities can be checked to rounding error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

import math

import numpy as np

from .grids import GridFunction, GridSpec, derivative, second_derivative
from .market import MarketParams
from .specialfn import hermite_function_sequence

FAMILY_MAX = 60

DEFAULT_GRID_POINTS = 8001
DEFAULT_GRID_HALF_WIDTH = 8.0  # in units of sigma


@dataclass(frozen=True)
class HarmonicParams:
    """Market parameters plus the free shift constant w of the potential."""

    market: MarketParams
    w: float = 0.0

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
    def delta(self) -> float:
        """Ground-state energy sigma^2 beta^2 / 2 + r; equals gamma identically."""
        return self.sigma**2 * self.beta**2 / 2.0 + self.r

    @property
    def center(self) -> float:
        """Center -sigma^2 w of the oscillator eigenfunctions."""
        return -self.sigma**2 * self.w

    def scaled_argument(self, x):
        """The oscillator variable u = x/sigma + sigma w."""
        return np.asarray(x, dtype=float) / self.sigma + self.sigma * self.w


def superpotential(params: HarmonicParams, x):
    """The linear factor W(x) = x/sigma^2 + w shared by all factorized operators."""
    return np.asarray(x, dtype=float) / params.sigma**2 + params.w


def quadratic_potential(params: HarmonicParams, x):
    """V(x) = (sigma^2/2) W(x)^2 - 1/2."""
    w_val = superpotential(params, x)
    return params.sigma**2 / 2.0 * w_val**2 - 0.5


def default_grid(
    params: HarmonicParams,
    n: int = DEFAULT_GRID_POINTS,
    half_width: float = DEFAULT_GRID_HALF_WIDTH,
) -> GridSpec:
    """Grid covering the eigenfunction envelope: center +- half_width * sigma."""
    c = params.center
    return GridSpec.over(c - half_width * params.sigma, c + half_width * params.sigma, n)


# ---------------------------------------------------------------------------
# Exact function representation


def _pad(c: np.ndarray, n: int) -> np.ndarray:
    if len(c) >= n:
        return c
    out = np.zeros(n, dtype=c.dtype)
    out[: len(c)] = c
    return out


def _d_du(c: np.ndarray) -> np.ndarray:
    """Coefficients of d/du applied to sum c_k psi_k (psi normalized Hermite)."""
    n = len(c)
    out = np.zeros(n + 1, dtype=np.result_type(c, float))
    j = np.arange(n - 1)
    out[: n - 1] += np.sqrt((j + 1) / 2.0) * c[1:]
    j = np.arange(1, n + 1)
    out[1 : n + 1] -= np.sqrt(j / 2.0) * c
    return out


def _times_u(c: np.ndarray) -> np.ndarray:
    """Coefficients of u * sum c_k psi_k."""
    n = len(c)
    out = np.zeros(n + 1, dtype=np.result_type(c, float))
    j = np.arange(n - 1)
    out[: n - 1] += np.sqrt((j + 1) / 2.0) * c[1:]
    j = np.arange(1, n + 1)
    out[1 : n + 1] += np.sqrt(j / 2.0) * c
    return out


@dataclass(frozen=True)
class HermiteExpansion:
    """Exact representation e^{tilt * x} * sum_k coeffs[k] Phi_k(x).

    Phi_k is the orthonormal oscillator eigenfunction for the params' sigma
    and w. The class is closed under d/dx, multiplication by x, and
    multiplication by exponentials, each implemented as an exact coefficient
    recurrence, which is what makes operator identities checkable to rounding
    error rather than finite-difference error.
    """

    params: HarmonicParams
    tilt: float
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", np.atleast_1d(np.asarray(self.coeffs)))

    @property
    def gaussian_decay_rate(self) -> float:
        """Envelope rate a with |f(x)| ~ e^{-a x^2}; used to pick quadrature scales."""
        return 1.0 / (2.0 * self.params.sigma**2)

    def __call__(self, x):
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        u = self.params.scaled_argument(x_arr)
        table = hermite_function_sequence(len(self.coeffs) - 1, u)
        vals = (self.coeffs @ table.reshape(len(self.coeffs), -1)).reshape(u.shape)
        vals = vals / math.sqrt(self.params.sigma) * np.exp(self.tilt * x_arr)
        return vals if np.ndim(x) else complex(vals[0]) if np.iscomplexobj(vals) else float(vals[0])

    def deriv_coeffs(self) -> np.ndarray:
        """Coefficients of d/dx, same tilt: tilt * c + (1/sigma) * d/du c."""
        base = _pad(self.coeffs, len(self.coeffs) + 1)
        return self.tilt * base + _d_du(self.coeffs) / self.params.sigma

    def times_u(self) -> "HermiteExpansion":
        return HermiteExpansion(self.params, self.tilt, _times_u(self.coeffs))

    def deriv(self) -> "HermiteExpansion":
        return HermiteExpansion(self.params, self.tilt, self.deriv_coeffs())

    def tilted(self, extra_tilt: float) -> "HermiteExpansion":
        """Multiply by e^{extra_tilt * x}."""
        return HermiteExpansion(self.params, self.tilt + extra_tilt, self.coeffs)

    def scaled(self, factor: complex) -> "HermiteExpansion":
        return HermiteExpansion(self.params, self.tilt, factor * self.coeffs)

    def plus(self, other: "HermiteExpansion") -> "HermiteExpansion":
        if other.params != self.params or other.tilt != self.tilt:
            raise ValueError("can only add expansions with identical params and tilt")
        n = max(len(self.coeffs), len(other.coeffs))
        return HermiteExpansion(
            self.params, self.tilt, _pad(self.coeffs, n) + _pad(other.coeffs, n)
        )


def _unit_expansion(params: HarmonicParams, n: int, tilt: float) -> HermiteExpansion:
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    return HermiteExpansion(params, tilt, coeffs)


def _check_family_index(n: int) -> None:
    if not 0 <= n <= FAMILY_MAX:
        raise ValueError(f"family index must be in 0..{FAMILY_MAX}, got {n}")


def phi_n(params: HarmonicParams, n: int) -> HermiteExpansion:
    """Orthonormal oscillator eigenfunction Phi_n (callable, exactly represented)."""
    _check_family_index(n)
    return _unit_expansion(params, n, 0.0)


def varphi_n(params: HarmonicParams, n: int) -> HermiteExpansion:
    """Eigenfunction e^{beta x} Phi_n of the non-self-adjoint Hamiltonian."""
    _check_family_index(n)
    return _unit_expansion(params, n, params.beta)


def psi_n(params: HarmonicParams, n: int) -> HermiteExpansion:
    """Adjoint-family member e^{-beta x} Phi_n; varphi_n with beta negated."""
    _check_family_index(n)
    return _unit_expansion(params, n, -params.beta)


# ---------------------------------------------------------------------------
# Operators

Applicable = Union[GridFunction, HermiteExpansion]

_MIN_OPERATOR_SAMPLES = 11  # output must itself be a valid GridFunction


def _require_operator_grid(f: GridFunction) -> None:
    if f.n < _MIN_OPERATOR_SAMPLES:
        raise ValueError(
            f"grid too short for a central difference: need >= {_MIN_OPERATOR_SAMPLES} "
            f"samples, got {f.n}"
        )


def _first_order(params: HarmonicParams, f: Applicable, d_sign: float, beta_steps: float):
    """(sigma/sqrt 2) * (d_sign * d/dx + W(x) + beta_steps * beta) applied to f."""
    s = params.sigma
    shift = beta_steps * params.beta
    if isinstance(f, HermiteExpansion):
        n = len(f.coeffs) + 1
        coeffs = (s / math.sqrt(2.0)) * (
            d_sign * f.deriv_coeffs()
            + _times_u(f.coeffs) / s
            + shift * _pad(f.coeffs, n)
        )
        return HermiteExpansion(params, f.tilt, coeffs)
    _require_operator_grid(f)
    d = derivative(f)
    mid = f.interior(1)
    factor = superpotential(params, d.x) + shift
    return d.with_samples((s / math.sqrt(2.0)) * (d_sign * d.samples + factor * mid.samples))


def apply_A(params: HarmonicParams, f: Applicable):
    """Lowering operator A = (sigma/sqrt 2)(d/dx + W(x) - beta)."""
    return _first_order(params, f, +1.0, -1.0)


def apply_B(params: HarmonicParams, f: Applicable):
    """Raising operator B = (sigma/sqrt 2)(-d/dx + W(x) + beta)."""
    return _first_order(params, f, -1.0, +1.0)


def apply_A_dag(params: HarmonicParams, f: Applicable):
    """Adjoint of A: (sigma/sqrt 2)(-d/dx + W(x) - beta); raises the psi family."""
    return _first_order(params, f, -1.0, -1.0)


def apply_B_dag(params: HarmonicParams, f: Applicable):
    """Adjoint of B: (sigma/sqrt 2)(d/dx + W(x) + beta); lowers the psi family."""
    return _first_order(params, f, +1.0, +1.0)


def apply_c(params: HarmonicParams, f: Applicable):
    """Self-adjoint-pair lowering operator c = (sigma/sqrt 2)(d/dx + W(x))."""
    return _first_order(params, f, +1.0, 0.0)


def apply_c_dag(params: HarmonicParams, f: Applicable):
    """Raising operator c^dag = (sigma/sqrt 2)(-d/dx + W(x))."""
    return _first_order(params, f, -1.0, 0.0)


def _second_order(
    params: HarmonicParams,
    f: Applicable,
    drift: float,
    with_potential: bool,
    constant: float,
):
    """-(sigma^2/2) f'' + drift f' + (V(x) if requested) f + constant f."""
    s = params.sigma
    if isinstance(f, HermiteExpansion):
        d1 = f.deriv()
        d2 = d1.deriv()
        n = len(d2.coeffs)
        coeffs = -(s**2 / 2.0) * d2.coeffs + drift * _pad(d1.coeffs, n)
        if with_potential:
            # V f = (sigma^2/2) W^2 f - f/2 with W f = (1/sigma) u f
            uuf = _times_u(_times_u(f.coeffs))
            coeffs = coeffs + 0.5 * _pad(uuf, n) - 0.5 * _pad(f.coeffs, n)
        coeffs = coeffs + constant * _pad(f.coeffs, n)
        return HermiteExpansion(params, f.tilt, coeffs)
    _require_operator_grid(f)
    d1 = derivative(f)
    d2 = second_derivative(f)
    mid = f.interior(1)
    vals = -(s**2 / 2.0) * d2.samples + drift * d1.samples + constant * mid.samples
    if with_potential:
        vals = vals + quadratic_potential(params, d1.x) * mid.samples
    return d1.with_samples(vals)


def apply_H_BS(params: HarmonicParams, f: Applicable):
    """Pricing generator -(sigma^2/2) d^2/dx^2 + (sigma^2/2 - r) d/dx + r."""
    return _second_order(params, f, params.sigma**2 / 2.0 - params.r, False, params.r)


def apply_H_eff(params: HarmonicParams, f: Applicable):
    """H_BS plus the quadratic potential V(x)."""
    return _second_order(params, f, params.sigma**2 / 2.0 - params.r, True, params.r)


def apply_H_eff_dag(params: HarmonicParams, f: Applicable):
    """Adjoint of H_eff: the drift term changes sign, everything else is even."""
    return _second_order(params, f, -(params.sigma**2 / 2.0 - params.r), True, params.r)


def apply_h_eff(params: HarmonicParams, f: Applicable):
    """Self-adjoint conjugate rho H_eff rho^{-1}: oscillator plus gamma."""
    return _second_order(params, f, 0.0, True, params.gamma)


def apply_h_BS(params: HarmonicParams, f: Applicable):
    """Self-adjoint conjugate of H_BS: free Laplacian plus gamma."""
    return _second_order(params, f, 0.0, False, params.gamma)


def _multiply_exponential(params: HarmonicParams, f, rate: float):
    """e^{rate * x} f for a callable, GridFunction, or HermiteExpansion."""
    if isinstance(f, HermiteExpansion):
        return f.tilted(rate)
    if isinstance(f, GridFunction):
        return f.with_samples(np.exp(rate * f.x) * f.samples)
    if callable(f):
        return lambda x: np.exp(rate * np.asarray(x, dtype=float)) * f(x)
    raise TypeError(f"cannot multiply object of type {type(f).__name__}")


def apply_rho(params: HarmonicParams, f):
    """Multiply by rho = e^{-beta x}."""
    return _multiply_exponential(params, f, -params.beta)


def apply_rho_inv(params: HarmonicParams, f):
    """Multiply by rho^{-1} = e^{beta x}."""
    return _multiply_exponential(params, f, params.beta)


def apply_Theta(params: HarmonicParams, f):
    """Multiply by the metric Theta = rho^2 = e^{-2 beta x}; maps varphi_n to psi_n."""
    return _multiply_exponential(params, f, -2.0 * params.beta)


def apply_Theta_inv(params: HarmonicParams, f):
    """Multiply by Theta^{-1} = e^{2 beta x}; maps psi_n back to varphi_n."""
    return _multiply_exponential(params, f, 2.0 * params.beta)


def norm_squared_law(params: HarmonicParams, n: int, family: str = "varphi") -> float:
    """Closed form for ||varphi_n||^2 or ||psi_n||^2.

    ||varphi_n||^2 = e^{beta^2 sigma^2 - 2 beta w sigma^2} L_n(-2 beta^2 sigma^2)
    and psi_n carries the opposite sign of the w term. The product
    ||varphi_n|| ||psi_n|| therefore grows like e^{beta^2 sigma^2} L_n, which
    diverges with n whenever beta != 0.
    """
    from .specialfn import laguerre

    b, s, w = params.beta, params.sigma, params.w
    if family == "varphi":
        sign = -1.0
    elif family == "psi":
        sign = 1.0
    else:
        raise ValueError(f"family must be 'varphi' or 'psi', got {family!r}")
    return math.exp(b * b * s * s + sign * 2.0 * b * w * s * s) * laguerre(
        n, 0, -2.0 * b * b * s * s
    )
