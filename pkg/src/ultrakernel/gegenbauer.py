"""Bochner-normalised ultraspherical polynomials and related special functions.

Notation
--------
``W_n^lam(x) = C_n^lam(x) / C_n^lam(1)`` where ``C_n^lam`` is the classical
Gegenbauer polynomial. With this normalisation ``W_n^lam(1) = 1`` and
``|W_n^lam(x)| <= 1`` on ``[-1, 1]``.

The polynomials are orthogonal with respect to the probability measure
``G_nu`` (see :mod:`ultrakernel.quadrature`), with

    int W_m^nu W_n^nu dG_nu = delta_mn / omega_n^nu.

``omega_n^nu`` is returned by :func:`weight_omega`.
"""

from __future__ import annotations

import enum
import math

import numpy as np
from scipy import special

from .errors import AccuracyError, DomainError, RangeError

__all__ = [
    "Index",
    "INDEX_INFINITY",
    "eval_W",
    "eval_W_all",
    "eval_W_infinity",
    "weight_omega",
    "weights_omega",
    "eval_Lambda",
]


class Index(enum.Enum):
    """Distinguished index values that are not ordinary reals."""

    INFINITY = "infinity"

    def __repr__(self):
        return "INDEX_INFINITY"


#: The limiting index for which ``W_n(x) = x**n``.
INDEX_INFINITY = Index.INFINITY

_LOG_MAX = math.log(np.finfo(float).max)


def index_value(index) -> float:
    """Return ``index`` as a float, mapping ``INDEX_INFINITY`` to ``math.inf``."""
    if index is INDEX_INFINITY:
        return math.inf
    return float(index)


def _check_degree(n):
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 0:
        raise DomainError(f"degree must be a nonnegative integer, got {n!r}")
    return int(n)


def _check_index(lam, name="index"):
    if lam is INDEX_INFINITY:
        raise DomainError(
            f"{name}=INDEX_INFINITY is only handled by eval_W_infinity"
        )
    lam = float(lam)
    if not lam > 0.0 or not math.isfinite(lam):
        raise DomainError(f"{name} must be a finite real > 0, got {lam!r}")
    return lam


def _check_argument(x):
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(np.abs(arr) > 1.0):
        raise DomainError("argument must lie in [-1, 1]")
    return arr


def _as_output(arr, like):
    if np.ndim(like) == 0:
        return float(arr)
    return arr


def eval_W(n, lam, x):
    """Evaluate the Bochner-normalised ultraspherical polynomial ``W_n^lam(x)``.

    Uses the three-term recurrence divided through by ``C_n^lam(1)``, so
    every intermediate value stays bounded by one in magnitude:

        W_n = 2(n+lam-1)/(n+2lam-1) * x * W_{n-1} - (n-1)/(n+2lam-1) * W_{n-2}

    Parameters
    ----------
    n : int
        Degree, ``n >= 0``.
    lam : float
        Index, ``lam > 0``.
    x : float or array_like
        Argument(s) in ``[-1, 1]``.

    Returns
    -------
    float or ndarray
        Same shape as ``x``.
    """
    n = _check_degree(n)
    lam = _check_index(lam)
    xa = _check_argument(x)
    w_prev = np.ones_like(xa)
    if n == 0:
        return _as_output(w_prev, x)
    w = xa.copy()
    for k in range(2, n + 1):
        denom = k + 2.0 * lam - 1.0
        w, w_prev = (2.0 * (k + lam - 1.0) / denom) * xa * w - ((k - 1.0) / denom) * w_prev, w
    # the recurrence drifts by a few ulp at the endpoints; W_n(+-1) = (+-1)^n exactly
    edge = np.abs(xa) == 1.0
    if np.any(edge):
        w = np.where(edge, xa**n, w)
    return _as_output(w, x)


def eval_W_all(nmax, lam, x):
    """Return ``W_0^lam(x), ..., W_nmax^lam(x)`` stacked along axis 0.

    ``lam`` may be ``INDEX_INFINITY``, in which case the rows are powers of x.
    """
    nmax = _check_degree(nmax)
    xa = _check_argument(x)
    out = np.empty((nmax + 1,) + xa.shape)
    out[0] = 1.0
    if nmax == 0:
        return out
    out[1] = xa
    if lam is INDEX_INFINITY:
        for k in range(2, nmax + 1):
            out[k] = out[k - 1] * xa
        return out
    lam = _check_index(lam)
    for k in range(2, nmax + 1):
        denom = k + 2.0 * lam - 1.0
        out[k] = (2.0 * (k + lam - 1.0) / denom) * xa * out[k - 1] - ((k - 1.0) / denom) * out[k - 2]
    edge = np.abs(xa) == 1.0
    if np.any(edge):
        out[:, edge] = xa[edge] ** np.arange(nmax + 1)[:, None]
    return out


def eval_W_infinity(n, x):
    """The ``lam -> infinity`` limit of ``W_n^lam(x)``, namely ``x**n``."""
    n = _check_degree(n)
    xa = _check_argument(x)
    return _as_output(xa**n, x)


def _log_omega(n, nu):
    return (
        math.log((n + nu) / nu)
        + math.lgamma(n + 2.0 * nu)
        - math.lgamma(n + 1.0)
        - math.lgamma(2.0 * nu)
    )


def weight_omega(n, nu):
    """Orthogonality weight ``omega_n^nu = (n+nu)/nu * Gamma(n+2nu) / (n! Gamma(2nu))``.

    Evaluated as a difference of log-Gamma values and exponentiated once.

    Raises
    ------
    RangeError
        If the value overflows a double.
    """
    n = _check_degree(n)
    nu = _check_index(nu, "nu")
    log_w = _log_omega(n, nu)
    if log_w >= _LOG_MAX:
        raise RangeError(f"omega_{n}^{nu} overflows (log value {log_w:.1f})")
    return math.exp(log_w)


def weights_omega(nmax, nu):
    """Vector of ``omega_0^nu, ..., omega_nmax^nu``."""
    nmax = _check_degree(nmax)
    nu = _check_index(nu, "nu")
    n = np.arange(nmax + 1, dtype=float)
    log_w = (
        np.log((n + nu) / nu)
        + special.gammaln(n + 2.0 * nu)
        - special.gammaln(n + 1.0)
        - special.gammaln(2.0 * nu)
    )
    if log_w.max() >= _LOG_MAX:
        raise RangeError(f"omega_n^{nu} overflows for some n <= {nmax}")
    return np.exp(log_w)


# Series results with an estimated absolute error above this are refused.
_SERIES_MAX_ERROR = 1e-8
# In "auto" mode the series is only trusted while the cancellation estimate
# stays below this.
_SERIES_AUTO_ERROR = 1e-14


def _lambda_series(mu, t):
    """Ascending series and a cancellation-based absolute error estimate."""
    z = -0.25 * t * t
    term = np.ones_like(t)
    total = np.ones_like(t)
    abs_total = np.ones_like(t)
    k = 0
    while True:
        k += 1
        term = term * z / (k * (mu + k))
        total = total + term
        abs_total = abs_total + np.abs(term)
        past_peak = k * (k + mu) > np.abs(z).max()
        if past_peak and np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
            break
        if k > 10_000:
            break
    err = abs_total * (k + 1) * np.finfo(float).eps
    return total, err


def eval_Lambda(mu, t, method="auto"):
    """Normalised Bessel function ``Gamma(mu+1) J_mu(t) (t/2)**(-mu)``.

    ``Lambda_mu(0) = 1`` and ``|Lambda_mu(t)| <= 1`` for ``mu >= -1/2``.

    Parameters
    ----------
    mu : float
        Order, ``mu >= -1/2``.
    t : float or array_like
        Nonnegative argument(s).
    method : {"auto", "series"}
        ``"series"`` sums the ascending power series with a multiplicative
        term recursion and raises :class:`AccuracyError` once cancellation
        makes the result unreliable. ``"auto"`` uses the series where it is
        accurate to roundoff and falls back to :func:`scipy.special.jv`
        elsewhere.
    """
    mu = float(mu)
    if not mu >= -0.5:
        raise DomainError(f"order must be >= -1/2, got {mu!r}")
    ta = np.asarray(t, dtype=float)
    if np.any(np.isnan(ta)) or np.any(ta < 0.0):
        raise DomainError("argument must be >= 0")
    if method not in ("auto", "series"):
        raise ValueError(f"unknown method {method!r}")

    flat = ta.reshape(-1)
    out = np.empty_like(flat)
    total, err = _lambda_series(mu, flat) if flat.size else (flat, flat)
    if method == "series":
        bad = err > _SERIES_MAX_ERROR
        if np.any(bad):
            worst = flat[bad].min()
            raise AccuracyError(
                f"ascending series for Lambda_{mu} loses too many digits at "
                f"t={worst:g} (estimated error {err[bad].max():.2e})"
            )
        out[:] = total
    else:
        ok = err <= _SERIES_AUTO_ERROR
        out[ok] = total[ok]
        far = flat[~ok]
        if far.size:
            out[~ok] = (
                math.gamma(mu + 1.0) * special.jv(mu, far) * np.power(0.5 * far, -mu)
            )
    out = out.reshape(ta.shape)
    return _as_output(out, t)
