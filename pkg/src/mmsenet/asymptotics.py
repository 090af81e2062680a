"""Large-system limits of the normalized MMSE output SIR.

For a receiver with N diversity branches in a disk network whose active
co-channel interferers have limiting density ``rho``, the normalized SIR
``beta_N = N^{-alpha/2} r_T^alpha SIR`` converges to a deterministic value
``beta``.  This module provides:

* the defining fixed-point equation for ``beta`` and a solver built on a
  self-contained Gauss hypergeometric evaluation (``solve_beta_fixed_point``),
* an independent quadrature oracle for the same fixed point that never
  touches the hypergeometric code path (``fixed_point_oracle``),
* the closed-form value of ``beta`` in the many-interferers-per-branch
  limit (``beta_large_c``) and the rate predictions built on it,
* limiting active-interferer densities for every activation model,
* cell-edge rate expressions with and without distance-proportional power
  control, and the reuse factor maximizing reuse-normalized rate,
* the limiting distribution of scaled received powers (``limiting_edf``).

All functions are pure; none hold state.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

__all__ = [
    "NoBracket",
    "AsymptoticParams",
    "AsymptoticSolution",
    "gauss_2f1",
    "lambert_w0",
    "beta_large_c",
    "fixed_point_equation",
    "solve_beta_fixed_point",
    "fixed_point_oracle",
    "rate_approx",
    "cell_edge_rate",
    "optimal_reuse",
    "limiting_density",
    "limiting_edf",
]

# Series truncation: stop once a term falls below this fraction of the sum.
_SERIES_TOL = 1e-16
_MAX_TERMS = 100_000

_BRANCH_POINT = -math.exp(-1.0)  # -1/e, edge of the W0 domain


class NoBracket(RuntimeError):
    """The fixed-point bracket never produced a sign change.

    The limit equation has a positive root only when c * nu > 1 (more
    active interferers than diversity branches); hitting this error
    normally means the parameters violate that regime.
    """


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------

def _hyp_series(a: float, b: float, c: float, z: float) -> float:
    """Direct power series sum_k (a)_k (b)_k / (c)_k z^k / k!.

    Converges usefully for |z| <= 0.5; the callers keep arguments there.
    """
    term = 1.0
    total = 1.0
    for k in range(_MAX_TERMS):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        total += term
        if abs(term) <= _SERIES_TOL * abs(total):
            return total
    raise RuntimeError(
        f"hypergeometric series did not converge for a={a}, b={b}, c={c}, z={z}"
    )


def gauss_2f1(a: float, b: float, c: float, z: float) -> float:
    """Gauss hypergeometric function 2F1(a, b; c; z) for real arguments.

    Evaluation strategy (arguments here are confined to z in (-1, 1]):

    * ``z <= 0.5`` -- direct power series,
    * ``0.5 < z < 1`` -- the 1-z linear connection (DLMF 15.8.4), which
      re-expresses the value through two fast series in ``1 - z``; requires
      ``c - a - b`` non-integer, which holds on the parameter family used
      by the fixed point (c - a - b = 2/alpha in (0, 1)),
    * ``z == 1`` -- the Gauss summation formula, valid for c - a - b > 0.

    Raises ValueError for a nonpositive-integer c, for z outside (-1, 1],
    and for the divergent z = 1 case with c - a - b <= 0.
    """
    if c <= 0 and c == int(c):
        raise ValueError(f"2F1 undefined for nonpositive integer c={c}")
    if z > 1.0 or z <= -1.0:
        raise ValueError(f"2F1 argument z={z} outside the supported range (-1, 1]")

    if z == 1.0:
        s = c - a - b
        if s <= 0:
            raise ValueError(
                f"2F1(a={a}, b={b}; c={c}; 1) diverges: c - a - b = {s} <= 0"
            )
        return (
            math.gamma(c) * math.gamma(s) / (math.gamma(c - a) * math.gamma(c - b))
        )

    if z <= 0.5:
        return _hyp_series(a, b, c, z)

    # 1-z connection.  Both component series run in w = 1 - z in (0, 0.5).
    s = c - a - b
    if abs(s - round(s)) < 1e-12:
        raise ValueError(
            f"1-z connection needs non-integer c - a - b (got {s}); "
            "argument reduction for this parameter set is not implemented"
        )
    w = 1.0 - z
    first = (
        math.gamma(c) * math.gamma(s) / (math.gamma(c - a) * math.gamma(c - b))
    ) * _hyp_series(a, b, a + b - c + 1.0, w)
    second = (
        w ** s
        * math.gamma(c) * math.gamma(-s) / (math.gamma(a) * math.gamma(b))
    ) * _hyp_series(c - a, c - b, s + 1.0, w)
    return first + second


def lambert_w0(z: float) -> float:
    """Principal branch of the Lambert W function, w * exp(w) = z, w >= -1.

    Halley iteration from a piecewise initial guess: the branch-point
    series near -1/e (Corless et al. 1996, eq. 4.22), the Taylor series at
    the origin for small |z|, and log(z) - log(log(z)) for large z.
    Raises ValueError for z < -1/e.
    """
    if math.isnan(z):
        raise ValueError("lambert_w0 is undefined for NaN")
    if z < _BRANCH_POINT:
        if z > _BRANCH_POINT * (1.0 + 1e-12):
            return -1.0  # rounding right below the branch point
        raise ValueError(f"lambert_w0 domain is z >= -1/e; got z={z}")
    if z == 0.0:
        return 0.0
    if abs(z - _BRANCH_POINT) < 1e-16:
        return -1.0

    if z < -0.25:
        p = math.sqrt(2.0 * (math.e * z + 1.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 * p ** 3 / 72.0
    elif z < 1.0:
        w = z * (1.0 - z + 1.5 * z * z)
    else:
        lz = math.log(z)
        w = lz - math.log(lz) if lz > 1.0 else lz

    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - z
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= dw
        if abs(dw) <= 1e-16 * (2.0 + abs(w)):
            break
    return w


# ---------------------------------------------------------------------------
# parameter containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticParams:
    """Inputs of the large-system limit.

    rho_p is the potential-interferer density, nu the limiting activation
    probability (so the active density is rho = nu * rho_p), c the ratio of
    potential interferers to diversity branches, and alpha the path-loss
    exponent.  The limit regime needs c * nu > 1; a warning is emitted
    otherwise and the solvers will raise NoBracket.
    """

    rho_p: float
    c: float
    alpha: float
    nu: float = 1.0

    def __post_init__(self):
        if not self.rho_p > 0:
            raise ValueError(f"rho_p must be positive, got {self.rho_p}")
        if not self.c > 0:
            raise ValueError(f"c must be positive, got {self.c}")
        if not self.alpha > 2:
            raise ValueError(f"alpha must exceed 2, got {self.alpha}")
        if not 0.0 < self.nu <= 1.0:
            raise ValueError(f"nu must lie in (0, 1], got {self.nu}")
        if self.c * self.nu <= 1.0:
            warnings.warn(
                f"c * nu = {self.c * self.nu:.4g} <= 1: fewer active interferers "
                "than diversity branches; the SIR limit does not exist",
                stacklevel=2,
            )

    @property
    def rho(self) -> float:
        """Limiting density of active interferers."""
        return self.nu * self.rho_p

    @property
    def support_point(self) -> float:
        """Least scaled received power of an in-network node, (pi rho_p / c)^(alpha/2)."""
        return (math.pi * self.rho_p / self.c) ** (self.alpha / 2.0)


@dataclass(frozen=True)
class AsymptoticSolution:
    """A solved normalized-SIR limit plus the residual of its defining equation."""

    beta: float
    method: str  # fixed_point | large_c | quadrature_oracle
    residual: float
    params: AsymptoticParams = field(repr=False)

    def rate(self, n_branches: int, r_t: float) -> float:
        """Predicted rate log2(1 + N^{alpha/2} r_T^{-alpha} beta) in bits/symbol."""
        alpha = self.params.alpha
        return math.log2(1.0 + n_branches ** (alpha / 2.0) * r_t ** -alpha * self.beta)


# ---------------------------------------------------------------------------
# fixed point
# ---------------------------------------------------------------------------

def beta_large_c(rho: float, alpha: float) -> float:
    """Normalized-SIR limit when potential interferers vastly outnumber branches.

    beta = [alpha sin(2 pi / alpha) / (2 pi^2 rho)]^(alpha/2); the finite-c
    correction term of the full fixed point vanishes as c grows.
    """
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    if not alpha > 2:
        raise ValueError(f"alpha must exceed 2, got {alpha}")
    return (alpha * math.sin(2.0 * math.pi / alpha) / (2.0 * math.pi ** 2 * rho)) ** (
        alpha / 2.0
    )


def _fixed_point_sides(beta: float, params: AsymptoticParams) -> tuple[float, float]:
    """Left and right side of the fixed-point equation at a candidate beta.

    The equation balances the whole-plane interference integral against the
    finite-network correction:

        (2 pi^2 rho / alpha) csc(2 pi / alpha) beta^(2/alpha)
            = 1 + [2 pi rho x0^(1-2/alpha) beta
                   / ((alpha-2) (1 + x0 beta)^(1-2/alpha))]
                  * 2F1(1-2/alpha, 1-2/alpha; 2-2/alpha; x0 beta / (1 + x0 beta))

    with x0 = (pi rho_p / c)^(alpha/2) the least scaled received power.  The
    correction term is the hypergeometric form of
    beta (2 pi rho / alpha) Int_0^{x0} t^(-2/alpha) / (1 + t beta) dt.
    """
    alpha = params.alpha
    rho = params.rho
    x0 = params.support_point
    lhs = (
        2.0 * math.pi ** 2 * rho * beta ** (2.0 / alpha)
        / (alpha * math.sin(2.0 * math.pi / alpha))
    )
    xb = x0 * beta
    z = xb / (1.0 + xb)
    corr = (
        2.0 * math.pi * rho * x0 ** (1.0 - 2.0 / alpha) * beta
        / ((alpha - 2.0) * (1.0 + xb) ** (1.0 - 2.0 / alpha))
        * gauss_2f1(1.0 - 2.0 / alpha, 1.0 - 2.0 / alpha, 2.0 - 2.0 / alpha, z)
    )
    return lhs, 1.0 + corr


def fixed_point_equation(beta: float, params: AsymptoticParams) -> float:
    """Signed defect of the fixed-point equation; zero at the SIR limit.

    Strictly increasing in beta, negative at 0+, with a single positive root
    whenever c * nu > 1.
    """
    lhs, rhs = _fixed_point_sides(beta, params)
    return lhs - rhs


def _check_regime(params: AsymptoticParams) -> None:
    # the activity integral is bounded by c * nu, so no positive root can
    # exist at or below one; the closed form would only produce spurious
    # sign changes through cancellation at absurd beta
    if params.c * params.nu <= 1.0:
        raise NoBracket(
            f"c * nu = {params.c * params.nu:.4g} <= 1: the fixed point has no "
            "positive solution (fewer active interferers than branches)"
        )


def _bracket_root(func, center: float, max_expand: int = 60) -> tuple[float, float]:
    """Geometrically expand [center/10, 10*center] until func changes sign."""
    lo, hi = center / 10.0, center * 10.0
    flo, fhi = func(lo), func(hi)
    for _ in range(max_expand):
        if flo == 0.0:
            return lo, lo
        if fhi == 0.0:
            return hi, hi
        if flo * fhi < 0.0:
            return lo, hi
        lo /= 10.0
        hi *= 10.0
        flo, fhi = func(lo), func(hi)
    raise NoBracket(
        f"no sign change in [{lo:.3g}, {hi:.3g}] after {max_expand} expansions; "
        "check that c * nu > 1"
    )


def _bisect_log(func, lo: float, hi: float, rel_tol: float = 1e-13) -> float:
    """Bisection on log(beta), followed by a few safeguarded secant steps."""
    if lo == hi:
        return lo
    flo, fhi = func(lo), func(hi)
    llo, lhi = math.log(lo), math.log(hi)
    while lhi - llo > rel_tol:
        lmid = 0.5 * (llo + lhi)
        if lmid <= llo or lmid >= lhi:
            break  # interval below one ulp
        mid = math.exp(lmid)
        fmid = func(mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0.0:
            lhi, fhi = lmid, fmid
        else:
            llo, flo = lmid, fmid
    x = math.exp(0.5 * (llo + lhi))
    # secant polish inside the bracket
    a, b = math.exp(llo), math.exp(lhi)
    fa = func(a)
    for _ in range(4):
        fb = func(x)
        if fb == fa or fb == 0.0:
            break
        step = fb * (x - a) / (fb - fa)
        cand = x - step
        if not (min(a, b) < cand < max(a, b)):
            break
        a, fa = x, fb
        x = cand
    return x


def solve_beta_fixed_point(params: AsymptoticParams) -> AsymptoticSolution:
    """Solve the normalized-SIR fixed point via the hypergeometric closed form.

    Seeded at the large-c value (the exact c -> infinity limit), bracketed by
    geometric expansion, then solved by log-space bisection with a secant
    polish.  The reported residual is |lhs - rhs| / rhs of the defining
    equation; it is required to be below 1e-10.
    """
    _check_regime(params)
    func = lambda b: fixed_point_equation(b, params)
    seed = beta_large_c(params.rho, params.alpha)
    lo, hi = _bracket_root(func, seed)
    beta = _bisect_log(func, lo, hi)
    lhs, rhs = _fixed_point_sides(beta, params)
    residual = abs(lhs - rhs) / abs(rhs)
    if residual > 1e-10:
        raise RuntimeError(f"fixed-point solve stalled: residual {residual:.3g}")
    return AsymptoticSolution(beta=beta, method="fixed_point", residual=residual, params=params)


def _activity_integral(gamma: float, params: AsymptoticParams) -> float:
    """gamma * c * Int tau dH(tau) / (1 + tau gamma) by adaptive quadrature.

    H is the limiting distribution of scaled received powers: an atom of
    mass 1 - nu at zero (which contributes nothing) and density
    (2 pi rho / (alpha c)) tau^(-2/alpha - 1) above the support point.  The
    substitution u = tau^(-2/alpha) compactifies the tail exactly, leaving

        gamma * pi * rho * Int_0^{c/(pi rho_p)} du / (u^(alpha/2) + gamma),

    a smooth, bounded integrand handled piecewise by scipy's adaptive rule.
    This path never calls the hypergeometric code.
    """
    alpha = params.alpha
    u0 = params.c / (math.pi * params.rho_p)
    p = alpha / 2.0

    def integrand(u):
        return 1.0 / (u ** p + gamma)

    # integrate decade by decade so the adaptive rule never sees a span of
    # more than one order of magnitude
    cut = min(1.0, u0)
    edges = [0.0, cut]
    while edges[-1] < u0:
        edges.append(min(edges[-1] * 10.0, u0))
    total = 0.0
    for a, b in zip(edges, edges[1:]):
        if b <= a:
            continue
        val, err = integrate.quad(integrand, a, b, epsabs=0.0, epsrel=1e-12, limit=200)
        if not math.isfinite(val) or val < 0.0 or err > 1e-8 * max(abs(val), 1e-300):
            raise RuntimeError(
                f"quadrature did not converge on [{a:.3g}, {b:.3g}] "
                f"(value {val:.6g}, error estimate {err:.3g})"
            )
        total += val
    return gamma * math.pi * params.rho * total


def fixed_point_oracle(params: AsymptoticParams) -> float:
    """Independent quadrature solution of the normalized-SIR fixed point.

    Solves gamma * c * Int tau dH(tau)/(1 + tau gamma) = 1 directly; the
    integral is strictly increasing in gamma from 0 to c * nu, so a unique
    root exists exactly when c * nu > 1.
    """
    _check_regime(params)
    func = lambda g: _activity_integral(g, params) - 1.0
    seed = beta_large_c(params.rho, params.alpha)
    lo, hi = _bracket_root(func, seed)
    return _bisect_log(func, lo, hi, rel_tol=1e-14)


# ---------------------------------------------------------------------------
# rate predictions and densities
# ---------------------------------------------------------------------------

def rate_approx(n_branches: float, rho: float, alpha: float, r_t: float) -> float:
    """Large-system mean-rate approximation, bits/symbol.

    log2(1 + [N alpha sin(2 pi/alpha) / (2 pi^2 rho r_T^2)]^(alpha/2)); equals
    log2(1 + N^(alpha/2) r_T^(-alpha) beta_large_c(rho, alpha)) identically.
    Depends on the activation model only through the active density rho.
    """
    if min(n_branches, rho, r_t) <= 0:
        raise ValueError("n_branches, rho and r_t must be positive")
    if not alpha > 2:
        raise ValueError(f"alpha must exceed 2, got {alpha}")
    arg = (
        n_branches * alpha * math.sin(2.0 * math.pi / alpha)
        / (2.0 * math.pi ** 2 * rho * r_t ** 2)
    )
    return math.log2(1.0 + arg ** (alpha / 2.0))


def cell_edge_rate(
    n_branches: float,
    kappa: float,
    alpha: float,
    rho_p: float,
    rho_c: float,
    power_control: bool = False,
) -> float:
    """Mean rate of a cell-edge uplink user in a hexagonal reuse-kappa network.

    The link length equals the cell circumradius, so rho_c = 2/(3 sqrt(3) r_T^2).
    Without power control the bracket coefficient is 3 sqrt(3)/4; transmitting
    at r_b^alpha to invert the path loss to the serving base station raises it
    to 9 sqrt(3)/5 (a 12/5 ratio of bracket arguments).
    """
    if min(n_branches, kappa, rho_p, rho_c) <= 0:
        raise ValueError("all parameters must be positive")
    if not alpha > 2:
        raise ValueError(f"alpha must exceed 2, got {alpha}")
    coeff = 9.0 * math.sqrt(3.0) / 5.0 if power_control else 3.0 * math.sqrt(3.0) / 4.0
    arg = (
        coeff * n_branches * kappa * alpha * math.sin(2.0 * math.pi / alpha)
        / (math.pi ** 2 * (1.0 - math.exp(-rho_p / rho_c)))
    )
    return math.log2(1.0 + arg ** (alpha / 2.0))


def optimal_reuse(alpha: float, n_branches: float, rho_p: float, rho_c: float) -> float:
    """Reuse factor (relaxed to the reals) maximizing reuse-normalized rate.

    Stationarity of (1/kappa) log2(1 + (A kappa)^(alpha/2)) gives kappa* in
    terms of the principal Lambert W branch at -(alpha/2) e^(-alpha/2), which
    stays above -1/e for every alpha > 2.  Monotonically decreasing in both
    alpha and N.
    """
    if min(n_branches, rho_p, rho_c) <= 0:
        raise ValueError("all parameters must be positive")
    if not alpha > 2:
        raise ValueError(f"alpha must exceed 2, got {alpha}")
    w = lambert_w0(-(alpha / 2.0) * math.exp(-alpha / 2.0))
    return (
        (-(w + alpha) / w) ** (2.0 / alpha)
        * 5.0 * math.pi ** 2 * (1.0 - math.exp(-rho_p / rho_c))
        / (9.0 * math.sqrt(3.0) * n_branches * alpha * math.sin(2.0 * math.pi / alpha))
    )


def limiting_density(
    model: str,
    *,
    rho_p: float,
    h: float | None = None,
    rho_b: float | None = None,
    rho_c: float | None = None,
    kappa: float | None = None,
) -> float:
    """Limiting density of active interferers for each activation model.

    independent: rho_p
    hc1:         rho_p exp(-pi rho_p h^2)          (all conflicting nodes mute)
    hc2:         (1 - exp(-pi rho_p h^2))/(pi h^2) (lowest mark survives)
    cellular:    rho_c (1 - exp(-rho_p/rho_c))/kappa
    boolean:     rho_p (1 - exp(-pi rho_b h^2))    (coverage of the cluster disks)
    """
    if not rho_p > 0:
        raise ValueError(f"rho_p must be positive, got {rho_p}")
    if model == "independent":
        return rho_p
    if model == "hc1":
        _require(h is not None and h >= 0, "hc1 needs h >= 0")
        return rho_p * math.exp(-math.pi * rho_p * h * h)
    if model == "hc2":
        _require(h is not None and h >= 0, "hc2 needs h >= 0")
        if h == 0:
            return rho_p
        return (1.0 - math.exp(-math.pi * rho_p * h * h)) / (math.pi * h * h)
    if model == "cellular":
        _require(rho_c is not None and rho_c > 0, "cellular needs rho_c > 0")
        _require(kappa is not None and kappa >= 1, "cellular needs kappa >= 1")
        return rho_c * (1.0 - math.exp(-rho_p / rho_c)) / kappa
    if model == "boolean":
        _require(h is not None and h >= 0, "boolean needs h >= 0")
        _require(rho_b is not None and rho_b > 0, "boolean needs rho_b > 0")
        return rho_p * (1.0 - math.exp(-math.pi * rho_b * h * h))
    raise ValueError(f"unknown model {model!r}")


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


def limiting_edf(x, params: AsymptoticParams):
    """Limiting distribution H(x) of the scaled received powers.

    An atom of mass 1 - nu at zero (silenced nodes), constant up to the
    support point x0 = (pi rho_p / c)^(alpha/2), then the Pareto-type tail
    1 - (pi rho / c) x^(-2/alpha).  Continuous at x0 and tending to 1.
    """
    x_arr = np.asarray(x, dtype=float)
    x0 = params.support_point
    out = np.full(x_arr.shape, 1.0 - params.nu)
    out[x_arr < 0] = 0.0
    tail = x_arr > x0
    out[tail] = 1.0 - (math.pi * params.rho / params.c) * x_arr[tail] ** (
        -2.0 / params.alpha
    )
    if np.isscalar(x) or x_arr.ndim == 0:
        return float(out)
    return out
