"""The Askey-Fitch projection kernel and its double-integral representation.

For ``0 < nu < lam`` the kernel

    m(x; y) = sum_n omega_n^nu r^n W_n^lam(x) W_n^nu(y)

is the density, with respect to ``G_nu(dy)``, of the probability measure
``M(x; dy)`` that expresses ``W_n^lam(x)`` as an average of ``W_n^nu``.
Summing the series through the Poisson kernel gives

    m(x; y) = int H_nu^lam(du) int G_{nu-1/2}(dv) (1 - r^2 s) / D^(nu+1)

with ``s = x^2 + u^2 (1 - x^2)``, ``B = x y + u v sqrt(1-x^2) sqrt(1-y^2)``
and ``D = 1 - 2 r B + r^2 s``. At ``r = 1`` the identity holds provided
``lam > nu + 1``; for ``nu < lam <= nu + 1`` the kernel is infinite on the
diagonal ``x = y``.
"""

from __future__ import annotations

import functools
import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    DiracCaseError,
    DomainError,
    SingularConfigurationError,
)
from .gegenbauer import INDEX_INFINITY, eval_W, eval_W_all, weights_omega
from .quadrature import (
    MAX_NODES,
    _g_constant,
    g_rule,
    graded_g_rule,
    graded_h_rule,
    graded_jacobi_rule,
    h_rule,
)

__all__ = [
    "KernelParams",
    "KernelEvaluation",
    "poisson_closed_form",
    "poisson_printed_form",
    "kernel_series",
    "kernel_integral",
    "kernel_integral_values",
    "kernel_mass",
    "project",
    "project_function",
]

DEFAULT_NODES = 64
GRADED_NODES = 16
MAX_LEVELS = 40
ADAPTIVE_TOL = 1e-9
PROJECTION_LEVELS = 24
PROJECTION_Y_LEVELS = 12
ROUNDOFF_FLOOR = 64 * np.finfo(float).eps


@dataclass(frozen=True)
class KernelParams:
    """Parameters ``(lam, nu, r, x, y)`` of one kernel evaluation.

    Raises
    ------
    DiracCaseError
        ``lam == nu`` or ``|x| == 1``: the measure is a point mass.
    SingularConfigurationError
        ``|r| == 1``, ``nu < lam <= nu + 1`` and ``y == r x``: the kernel is
        ``+inf`` there.
    """

    lam: float
    nu: float
    r: float
    x: float
    y: float

    def __post_init__(self):
        for name in ("lam", "nu", "r", "x", "y"):
            value = getattr(self, name)
            if value is INDEX_INFINITY:
                raise DomainError(f"{name} must be a finite real")
            value = float(value)
            if math.isnan(value):
                raise DomainError(f"{name} is NaN")
            object.__setattr__(self, name, value)
        lam, nu, r, x, y = self.lam, self.nu, self.r, self.x, self.y
        if not nu > 0.0:
            raise DomainError(f"nu must be > 0, got {nu}")
        if lam == nu:
            raise DiracCaseError("lam == nu: M(x; .) is the point mass at x")
        if not (lam > nu and math.isfinite(lam)):
            raise DomainError(f"need finite lam > nu, got lam={lam}, nu={nu}")
        if abs(x) == 1.0:
            raise DiracCaseError(f"x = {x:+g}: M(x; .) is the point mass at {x:+g}")
        if not abs(x) < 1.0:
            raise DomainError(f"x must lie in (-1, 1), got {x}")
        if not abs(y) < 1.0:
            raise DomainError(f"y must lie in (-1, 1), got {y}")
        if not abs(r) <= 1.0:
            raise DomainError(f"r must lie in [-1, 1], got {r}")
        if self.singular_range and abs(r) == 1.0 and y == r * x:
            raise SingularConfigurationError(
                f"kernel is infinite at r={r:+g}, y={y:g} = r*x when "
                f"nu < lam <= nu + 1 (lam={lam}, nu={nu})"
            )

    @property
    def singular_range(self):
        """True when ``nu < lam <= nu + 1`` (kernel unbounded at ``|r| = 1``)."""
        return self.lam <= self.nu + 1.0


@dataclass(frozen=True)
class KernelEvaluation:
    value: float
    method: str
    truncation_or_nodes: tuple
    est_error: float


def poisson_closed_form(nu, r, x):
    """``sum_n omega_n^nu r^n W_n^nu(x) = (1 - r^2) / (1 - 2 r x + r^2)^(nu + 1)``."""
    nu, r = float(nu), float(r)
    if not nu > 0.0:
        raise DomainError(f"nu must be > 0, got {nu}")
    if not abs(r) < 1.0:
        raise DomainError(f"|r| must be < 1, got {r}")
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) > 1.0):
        raise DomainError("x must lie in [-1, 1]")
    val = (1.0 - r * r) / (1.0 - 2.0 * r * xa + r * r) ** (nu + 1.0)
    return float(val) if np.ndim(x) == 0 else val


def poisson_printed_form(nu, r, x):
    """The misprinted variant ``(1 - r^2) / (1 - 2 r x + x^2)^(nu + 1)``.

    Kept only so the discrepancy with :func:`poisson_closed_form` can be
    demonstrated; it is not a generating function.
    """
    xa = np.asarray(x, dtype=float)
    val = (1.0 - r * r) / (1.0 - 2.0 * r * xa + xa * xa) ** (nu + 1.0)
    return float(val) if np.ndim(x) == 0 else val


def _omega_tail(nu, r_abs, n_from):
    """Upper bound for ``sum_{n >= n_from} omega_n^nu |r|^n`` (``|r| < 1``)."""
    if r_abs == 0.0:
        return 0.0
    total = 0.0
    chunk = 2048
    start = n_from
    log_r = math.log(r_abs)
    while True:
        n = np.arange(start, start + chunk, dtype=float)
        log_terms = (
            np.log((n + nu) / nu)
            + np.vectorize(math.lgamma)(n + 2.0 * nu)
            - np.vectorize(math.lgamma)(n + 1.0)
            - math.lgamma(2.0 * nu)
            + n * log_r
        )
        terms = np.exp(log_terms)
        total += math.fsum(terms)
        last = terms[-1]
        ratio = r_abs * (n[-1] + 1.0 + nu) * (n[-1] + 2.0 * nu) / ((n[-1] + nu) * (n[-1] + 1.0))
        if ratio < 1.0 and last * ratio / (1.0 - ratio) <= 1e-17 * max(total, 1e-300):
            return total + last * ratio / (1.0 - ratio)
        if start > 10_000_000:
            return math.inf
        start += chunk


def kernel_series(p: KernelParams, N: int) -> KernelEvaluation:
    """Truncated Askey-Fitch series ``sum_{n=0}^N omega_n r^n W_n^lam(x) W_n^nu(y)``.

    For ``|r| < 1`` the reported error bounds the tail using ``|W| <= 1``.
    At ``|r| = 1`` (allowed only for ``lam > nu + 1``) it is the Cauchy
    difference ``|S_N - S_{N//2}|``, an estimate rather than a bound.
    """
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)) or N < 1:
        raise DomainError(f"truncation N must be a positive integer, got {N!r}")
    N = int(N)
    boundary = abs(p.r) == 1.0
    if boundary and p.singular_range:
        raise ConvergenceError(
            f"the series is not absolutely summable at |r| = 1 when "
            f"nu < lam <= nu + 1 (lam={p.lam}, nu={p.nu})"
        )
    n = np.arange(N + 1, dtype=float)
    terms = (
        weights_omega(N, p.nu)
        * np.power(p.r, n)
        * eval_W_all(N, p.lam, p.x)
        * eval_W_all(N, p.nu, p.y)
    )
    value = math.fsum(terms)
    if boundary:
        est = abs(value - math.fsum(terms[: N // 2 + 1]))
    else:
        est = _omega_tail(p.nu, abs(p.r), N + 1)
    return KernelEvaluation(value, "series", (N,), est)


def _reflect(r, x, y):
    # sum omega r^n W(x) W(y) is invariant under (r, x) -> (-r, -x)
    if r < 0.0:
        return -r, -x, y
    return r, x, y


def _integrand_sum(r, x, y, nu, hu, gv, form):
    """Tensor quadrature of the double integral for each entry of ``y``.

    ``hu``/``gv`` are the u- and v-rules (with accurate ``gaps``). Returns an
    array shaped like ``y``. Requires ``r >= 0``.
    """
    u, wu, one_m_u = hu.nodes, hu.weights, hu.gaps
    v, wv, one_m_v = gv.nodes, gv.weights, gv.gaps
    y = np.asarray(y, dtype=float)
    cx = math.sqrt(1.0 - x * x)
    cy = np.sqrt(1.0 - y * y)
    one_m_u2 = one_m_u * (1.0 + u)
    s = x * x + u * u * (cx * cx)
    uv = u[:, None] * v[None, :]
    # 1 - uv = (1 - u) + u (1 - v)
    one_m_uv = one_m_u[:, None] + u[:, None] * one_m_v[None, :]
    c = (cx * cy)[:, None, None]
    if form == "derived":
        # D = (1 - rB)^2 + r^2 (s - B^2); with x = cos(a), y = cos(b)
        #   1 - B          = 2 sin^2((a - b)/2) + cx cy (1 - uv)
        #   s - B^2        = (x cy - uv cx y)^2 + u^2 cx^2 (1 - v^2)
        #   x cy - uv cx y = sin(b - a) + y cx (1 - uv)
        a = math.acos(x)
        b = np.arccos(y)
        one_m_cos = (2.0 * np.sin(0.5 * (a - b)) ** 2)[:, None, None]
        sin_ba = np.sin(b - a)[:, None, None]
        one_m_B = one_m_cos + c * one_m_uv[None]
        one_m_rB = (1.0 - r) + r * one_m_B
        lin = sin_ba + y[:, None, None] * cx * one_m_uv[None]
        one_m_v2 = one_m_v * (1.0 + v)
        quad = (u * u * cx * cx)[:, None] * one_m_v2[None, :]
        D = one_m_rB * one_m_rB + r * r * (lin * lin + quad[None])
        num = (1.0 - r * r) + r * r * cx * cx * one_m_u2
        f = num[None, :, None] / D ** (nu + 1.0)
    elif form == "printed":
        B = x * y[:, None, None] + uv[None] * c
        sq = np.sqrt(s)[None, :, None]
        I = 1.0 - 2.0 * r * B / sq + B * B / (sq * sq)
        num = 1.0 - r * r * s
        f = num[None, :, None] / I ** (nu + 1.0)
    else:
        raise ValueError(f"unknown form {form!r}")
    return (f @ wv) @ wu


def _check_nodes(q, name):
    if isinstance(q, bool) or not isinstance(q, (int, np.integer)) or not 2 <= q <= MAX_NODES:
        raise DomainError(f"{name} must be an integer in [2, {MAX_NODES}], got {q!r}")
    return int(q)


def _check_integral_admissible(lam, nu, r):
    if abs(r) == 1.0 and lam <= nu + 1.0:
        raise SingularConfigurationError(
            f"the double integral at |r| = 1 needs lam > nu + 1; "
            f"nu < lam <= nu + 1 is the excluded range (lam={lam}, nu={nu})"
        )


def kernel_integral_values(lam, nu, r, x, y, q_u, q_v, form="derived", levels=None):
    """Vectorised double-integral kernel at fixed ``(lam, nu, r, x)`` over an array ``y``.

    No adaptivity and no error estimate; validation of ``y`` is left to the
    caller (entries must lie in ``(-1, 1)``).

    With ``levels`` set, the u- and v-rules are composite rules graded
    geometrically toward ``u = 1`` and ``v = 1`` (``q_u``/``q_v`` nodes per
    piece). This resolves the near-singular corner that appears at
    ``r = 1`` when ``y`` is close to ``x``.
    """
    _check_integral_admissible(lam, nu, r)
    r, x, yy = _reflect(r, x, np.asarray(y, dtype=float))
    if r == 0.0 and form == "derived":
        # integrand is identically 1 against probability measures
        return np.ones_like(yy)
    if levels is None:
        hu = h_rule(lam, nu, q_u)
        gv = g_rule(nu - 0.5, q_v)
    else:
        hu = graded_h_rule(lam, nu, q_u, levels)
        gv = graded_g_rule(nu - 0.5, q_v, levels)
    flat = yy.reshape(-1)
    out = np.empty_like(flat)
    # bound temporary arrays to a few million entries
    step = max(1, 4_000_000 // (len(hu) * len(gv)))
    for i in range(0, flat.size, step):
        out[i : i + step] = _integrand_sum(r, x, flat[i : i + step], nu, hu, gv, form)
    return out.reshape(yy.shape)


def kernel_integral(p: KernelParams, q_u=None, q_v=None, form="derived", levels=None) -> KernelEvaluation:
    """Evaluate the kernel through the double integral.

    Parameters
    ----------
    p : KernelParams
    q_u, q_v : int, optional
        Nodes of the u- and v-rules (per piece when ``levels`` is given).
        With explicit sizes the error estimate compares against a rule with
        half the nodes.
    form : {"derived", "printed"}
        ``"printed"`` swaps the denominator for the uncorrected variant
        ``1 - 2 r B / sqrt(s) + B^2 / s``. Diagnostic only.
    levels : int, optional
        Use composite rules graded toward the corner ``u = v = 1``.

    Notes
    -----
    With nothing but ``p`` given the evaluation is adaptive. For ``|r| < 1``
    the tensor Gauss-Jacobi rule starts at 64 x 64 nodes and doubles until
    two successive values agree to 1e-9 or 512 nodes are reached. At
    ``|r| = 1`` plain tensor rules converge only algebraically (the
    integrand has a corner singularity when ``y`` is near ``x``), so graded
    rules with 16 nodes per piece are refined by four levels at a time up
    to 40 levels. ``est_error`` is the last difference in either case.
    """
    _check_integral_admissible(p.lam, p.nu, p.r)

    def estimate(value, other):
        # differences can cancel to zero; never claim better than summation roundoff
        return float(max(abs(value - other), ROUNDOFF_FLOOR * abs(value)))

    def at(qu, qv, lev):
        vals = kernel_integral_values(p.lam, p.nu, p.r, p.x, np.array([p.y]), qu, qv, form, lev)
        return float(vals[0])

    if q_u is None and q_v is None and levels is None:
        if abs(p.r) < 1.0:
            q = DEFAULT_NODES
            prev = at(q, q, None)
            while True:
                q = min(2 * q, MAX_NODES)
                cur = at(q, q, None)
                diff = estimate(cur, prev)
                if diff < ADAPTIVE_TOL or q >= MAX_NODES:
                    return KernelEvaluation(cur, "integral", (q, q), diff)
                prev = cur
        q = GRADED_NODES
        lev = 8
        prev = at(q, q, lev)
        while True:
            lev += 4
            cur = at(q, q, lev)
            diff = estimate(cur, prev)
            if diff < ADAPTIVE_TOL or lev >= MAX_LEVELS:
                return KernelEvaluation(cur, "integral", (q, q, lev), diff)
            prev = cur

    q_u = _check_nodes(DEFAULT_NODES if q_u is None else q_u, "q_u")
    q_v = _check_nodes(DEFAULT_NODES if q_v is None else q_v, "q_v")
    value = at(q_u, q_v, levels)
    coarse = at(q_u // 2, q_v // 2, levels) if levels is None else at(q_u, q_v, max(levels - 4, 1))
    nodes = (q_u, q_v) if levels is None else (q_u, q_v, levels)
    return KernelEvaluation(value, "integral", nodes, estimate(value, coarse))


def _y_rules(nu, x, q_y, levels):
    """Rule for ``G_nu(dy)`` split at ``y = x`` and graded toward ``x`` from both sides.

    The kernel at ``r = 1`` has a kink at ``y = x``. On ``[x, 1]`` the
    factor ``(1 - y)^(nu - 1/2)`` is carried by the Jacobi weight and the
    smooth ``(1 + y)^(nu - 1/2)`` is folded into the weights; ``[-1, x]``
    is the mirror image.
    """
    base = graded_jacobi_rule(0.0, nu - 0.5, q_y, levels)
    t, w = base.nodes, base.weights
    const = _g_constant(nu)
    # right piece: y = x + (1 - x)(1 - t)/2, so t -> 1 is y -> x
    half = 0.5 * (1.0 - x)
    y_r = x + half * base.gaps
    w_r = const * w * half ** (nu + 0.5) * (1.0 + y_r) ** (nu - 0.5)
    # left piece: y = x - (1 + x)(1 - t)/2
    half = 0.5 * (1.0 + x)
    y_l = x - half * base.gaps
    w_l = const * w * half ** (nu + 0.5) * (1.0 - y_l) ** (nu - 0.5)
    return np.concatenate([y_l, y_r]), np.concatenate([w_l, w_r])


def _check_projection(lam, nu, x):
    KernelParams(lam, nu, 1.0, x, 0.0 if x != 0.0 else 0.5)
    if lam <= nu + 1.0:
        raise SingularConfigurationError(
            f"direct projection quadrature needs lam > nu + 1 (lam={lam}, nu={nu}); "
            "use the Feldheim-Vilenkin route in ultrakernel.identities instead"
        )


@functools.lru_cache(maxsize=64)
def _weighted_kernel_on_y(lam, nu, x, q, levels, y_levels):
    y, wy = _y_rules(nu, x, q, y_levels)
    m = kernel_integral_values(lam, nu, 1.0, x, y, q, q, levels=levels)
    wm = wy * m
    y.flags.writeable = False
    wm.flags.writeable = False
    return y, wm


def project_function(f, lam, nu, x, q=GRADED_NODES, levels=PROJECTION_LEVELS, y_levels=PROJECTION_Y_LEVELS):
    """``int f(y) m(x; y) G_nu(dy)`` at ``r = 1`` by graded tensor quadrature.

    ``f`` must accept an array of points in ``(-1, 1)``. The y-, u- and
    v-rules are all composite Gauss-Jacobi rules with ``q`` nodes per piece.
    The u- and v-rules take ``levels`` geometric refinements toward the
    corner ``(u, v) = (1, 1)``, the y-rule ``y_levels`` toward ``y = x``
    from both sides. The corner needs the deeper grading, most of all for
    ``x`` near +-1 or ``lam - nu`` near 1. Kernel values are cached per
    parameter set, so projecting many functions at one ``x`` costs one
    kernel sweep.
    """
    _check_projection(lam, nu, x)
    y, wm = _weighted_kernel_on_y(float(lam), float(nu), float(x), int(q), int(levels), int(y_levels))
    return math.fsum(wm * np.asarray(f(y), dtype=float))


def kernel_mass(lam, nu, x, q=GRADED_NODES, levels=PROJECTION_LEVELS, y_levels=PROJECTION_Y_LEVELS):
    """Total mass ``int m(x; y) G_nu(dy)`` at ``r = 1``; equals one."""
    return project_function(np.ones_like, lam, nu, x, q, levels, y_levels)


def project(n, lam, nu, x, q=GRADED_NODES, levels=PROJECTION_LEVELS, y_levels=PROJECTION_Y_LEVELS):
    """``int W_n^nu(y) M(x; dy)``, which reproduces ``W_n^lam(x)``."""
    return project_function(lambda y: eval_W(n, nu, y), lam, nu, x, q, levels, y_levels)


def timed(fn, *args, **kwargs):
    """Call ``fn`` and return ``(result, seconds)``."""
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0
