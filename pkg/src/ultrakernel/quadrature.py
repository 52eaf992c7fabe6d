"""Probability measures G_nu, H_nu^lam and Gauss-Jacobi rules against them.

``G_nu`` lives on ``[-1, 1]`` with density proportional to
``(1 - y**2)**(nu - 1/2)``. ``H_nu^lam`` is the Beta-type law on ``[0, 1]``
with density

    2 Gamma(lam + 1/2) / (Gamma(nu + 1/2) Gamma(lam - nu))
        * u**(2 nu) * (1 - u**2)**(lam - nu - 1).

Rules are produced by the Golub-Welsch eigenvalue method on the Jacobi
recurrence coefficients, followed by Newton polishing of the nodes and
re-evaluation of the weights from the orthonormal polynomials (which is
more accurate than squaring eigenvector components).
"""

from __future__ import annotations

import csv
import functools
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy import linalg, special

from .errors import DomainError, UltrakernelError

__all__ = [
    "QuadratureRule",
    "density_G",
    "density_H",
    "gauss_jacobi_rule",
    "g_rule",
    "h_rule",
    "graded_jacobi_rule",
    "graded_g_rule",
    "graded_h_rule",
]

MAX_NODES = 512


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and positive weights of a Gauss rule.

    ``nodes`` and ``weights`` are read-only arrays; ``exactness_degree`` is
    ``2 Q - 1`` for a ``Q``-point rule, with respect to the rule's own
    weight function (and polynomial in the rule's own variable).
    ``gaps`` holds ``support[1] - nodes`` computed without cancellation where
    the construction allows it; integrands that are singular at the right
    endpoint should use it instead of subtracting.
    """

    nodes: np.ndarray
    weights: np.ndarray
    exactness_degree: int
    support: tuple[float, float] = (-1.0, 1.0)
    gaps: np.ndarray | None = None

    def __post_init__(self):
        if self.gaps is None:
            object.__setattr__(self, "gaps", self.support[1] - self.nodes)
        for arr in (self.nodes, self.weights, self.gaps):
            arr.flags.writeable = False

    def __len__(self):
        return self.nodes.size

    def integrate(self, f):
        """Apply the rule to a callable accepting an array of nodes."""
        return float(np.dot(self.weights, f(self.nodes)))

    def to_csv(self) -> str:
        """Serialise as ``node,weight`` lines (with a header), nodes ascending."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["node", "weight"])
        for x, w in zip(self.nodes, self.weights):
            writer.writerow([f"{x:.17g}", f"{w:.17g}"])
        return buf.getvalue()


def _g_constant(nu):
    return math.exp(math.lgamma(nu + 1.0) - math.lgamma(nu + 0.5)) / math.sqrt(math.pi)


def density_G(nu, y):
    """Density of ``G_nu`` at ``y``.

    ``nu = 0`` gives the arcsine density ``1 / (pi sqrt(1 - y**2))``.
    """
    nu = float(nu)
    if not nu >= 0.0:
        raise DomainError(f"nu must be >= 0, got {nu!r}")
    ya = np.asarray(y, dtype=float)
    if np.any(np.abs(ya) > 1.0) or np.any(np.isnan(ya)):
        raise DomainError("y must lie in [-1, 1]")
    if nu < 0.5 and np.any(np.abs(ya) == 1.0):
        raise DomainError(
            f"G_{nu} density is unbounded at y = +-1 (exponent {nu - 0.5:g} < 0)"
        )
    val = _g_constant(nu) * np.power(1.0 - ya * ya, nu - 0.5)
    return float(val) if np.ndim(y) == 0 else val


def _h_log_constant(lam, nu):
    return (
        math.log(2.0)
        + math.lgamma(lam + 0.5)
        - math.lgamma(nu + 0.5)
        - math.lgamma(lam - nu)
    )


def density_H(lam, nu, u):
    """Density of the Sonine law ``H_nu^lam`` at ``u`` in ``(0, 1)``."""
    lam, nu = float(lam), float(nu)
    if not (lam > nu > 0.0):
        raise DomainError(f"need lam > nu > 0, got lam={lam!r}, nu={nu!r}")
    ua = np.asarray(u, dtype=float)
    if np.any(ua <= 0.0) or np.any(ua >= 1.0) or np.any(np.isnan(ua)):
        raise DomainError("u must lie in the open interval (0, 1)")
    val = np.exp(_h_log_constant(lam, nu)) * ua ** (2.0 * nu) * (1.0 - ua * ua) ** (lam - nu - 1.0)
    return float(val) if np.ndim(u) == 0 else val


def _jacobi_recurrence(n, alpha, beta):
    """Monic recurrence coefficients (a_k, b_k) for (1-t)^alpha (1+t)^beta.

    ``b[0]`` holds the total mass of the weight.
    """
    k = np.arange(n, dtype=float)
    ab = alpha + beta
    a = np.empty(n)
    b = np.empty(n)
    a[0] = (beta - alpha) / (ab + 2.0)
    kk = k[1:]
    a[1:] = (beta * beta - alpha * alpha) / ((2.0 * kk + ab) * (2.0 * kk + ab + 2.0))
    b[0] = math.exp((ab + 1.0) * math.log(2.0) + special.betaln(alpha + 1.0, beta + 1.0))
    if n > 1:
        b[1] = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) ** 2 * (3.0 + ab))
    kk = k[2:]
    num = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab)
    den = (2.0 * kk + ab) ** 2 * (2.0 * kk + ab + 1.0) * (2.0 * kk + ab - 1.0)
    b[2:] = num / den
    return a, b


def _orthonormal_values(t, a, b):
    """Orthonormal p_q and p_q' at t, and sum_{k<q} p_k**2.

    ``a`` has length q and ``b`` length q + 1, so the recurrence can be
    closed at degree q.
    """
    q = a.size
    sb = np.sqrt(b)
    p_prev = np.zeros_like(t)
    p = np.full_like(t, 1.0 / sb[0])
    dp_prev = np.zeros_like(t)
    dp = np.zeros_like(t)
    sumsq = np.zeros_like(t)
    for k in range(q):
        sumsq = sumsq + p * p
        back = sb[k] if k > 0 else 0.0
        p_new = ((t - a[k]) * p - back * p_prev) / sb[k + 1]
        dp_new = (p + (t - a[k]) * dp - back * dp_prev) / sb[k + 1]
        p_prev, p = p, p_new
        dp_prev, dp = dp, dp_new
    return p, dp, sumsq


@functools.lru_cache(maxsize=256)
def _rule_cached(alpha, beta, q):
    a, b = _jacobi_recurrence(q + 1, alpha, beta)
    a = a[:q]
    if q == 1:
        t = np.array([a[0]])
    else:
        try:
            t = linalg.eigh_tridiagonal(a, np.sqrt(b[1:q]), eigvals_only=True)
        except linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
            raise UltrakernelError(
                f"tridiagonal eigensolver failed for alpha={alpha}, beta={beta}, Q={q}"
            ) from exc
    t = np.sort(t)
    for _ in range(3):
        p, dp, _unused = _orthonormal_values(t, a, b)
        step = p / dp
        t = t - step
        if np.max(np.abs(step)) < 1e-16:
            break
    t = np.clip(t, np.nextafter(-1.0, 0.0), np.nextafter(1.0, 0.0))
    _p, _dp, sumsq = _orthonormal_values(t, a, b)
    t.flags.writeable = False
    w = 1.0 / sumsq
    w.flags.writeable = False
    return t, w


def gauss_jacobi_rule(alpha, beta, q, normalize=False):
    """Gauss-Jacobi rule for the weight ``(1 - t)**alpha * (1 + t)**beta`` on [-1, 1].

    Parameters
    ----------
    alpha, beta : float
        Jacobi exponents, both ``> -1``.
    q : int
        Number of nodes, ``1 <= q <= 512``.
    normalize : bool
        If true, weights are scaled to sum to one (the weight is treated as
        a probability density).
    """
    alpha, beta = float(alpha), float(beta)
    if not (alpha > -1.0 and beta > -1.0):
        raise DomainError(f"Jacobi exponents must exceed -1, got ({alpha}, {beta})")
    if isinstance(q, bool) or not isinstance(q, (int, np.integer)) or not 1 <= q <= MAX_NODES:
        raise DomainError(f"number of nodes must be an integer in [1, {MAX_NODES}], got {q!r}")
    t, w = _rule_cached(alpha, beta, int(q))
    w = w.copy()
    if normalize:
        w = w / math.fsum(w)
    return QuadratureRule(t.copy(), w, 2 * int(q) - 1)


def g_rule(nu, q):
    """``q``-point Gauss rule for the probability measure ``G_nu`` (``nu > -1/2``).

    The rule is symmetrised so that nodes come in exact ``+-`` pairs with
    equal weights.
    """
    nu = float(nu)
    if not nu > -0.5:
        raise DomainError(f"G_nu rules need nu > -1/2, got {nu!r}")
    base = gauss_jacobi_rule(nu - 0.5, nu - 0.5, q)
    t = 0.5 * (base.nodes - base.nodes[::-1])
    w = 0.5 * (base.weights + base.weights[::-1])
    w = w / math.fsum(w)
    return QuadratureRule(t, w, base.exactness_degree)


def h_rule(lam, nu, q):
    """``q``-point rule for the Sonine law ``H_nu^lam`` on ``(0, 1)``.

    Built by the substitution ``w = u**2`` which turns
    ``u**(2nu) (1-u**2)**(lam-nu-1) du`` into a Jacobi weight with
    ``alpha = lam - nu - 1`` and ``beta = nu - 1/2`` in ``t = 2w - 1``.
    The rule is exact for polynomials of degree ``2q - 1`` in ``u**2``;
    the endpoint singularity for ``lam < nu + 1`` is carried by the weight.
    """
    lam, nu = float(lam), float(nu)
    if not (lam > nu > 0.0):
        raise DomainError(f"need lam > nu > 0, got lam={lam!r}, nu={nu!r}")
    base = gauss_jacobi_rule(lam - nu - 1.0, nu - 0.5, q)
    return _h_from_t(base)


def _h_from_t(base):
    u = np.sqrt(0.5 * (1.0 + base.nodes))
    gap_u = 0.5 * base.gaps / (1.0 + u)
    w = base.weights / math.fsum(base.weights)
    return QuadratureRule(u, w, base.exactness_degree, support=(0.0, 1.0), gaps=gap_u)


def graded_jacobi_rule(alpha, beta, q, levels, ratio=0.25):
    """Composite Gauss rule for ``(1-t)^alpha (1+t)^beta``, graded toward ``t = 1``.

    The interval is cut at ``1 - 2 ratio^k`` for ``k = 1..levels``. The
    first and last pieces use Gauss-Jacobi rules carrying the endpoint
    singularity; the pieces in between use Gauss-Legendre times the weight.
    Each piece gets ``q`` nodes. Integrands with a point singularity or a
    steep layer at ``t = 1`` converge geometrically in ``levels`` instead
    of algebraically in ``q``.
    """
    alpha, beta = float(alpha), float(beta)
    if not (alpha > -1.0 and beta > -1.0):
        raise DomainError(f"Jacobi exponents must exceed -1, got ({alpha}, {beta})")
    if not (isinstance(levels, (int, np.integer)) and levels >= 1):
        raise DomainError(f"levels must be a positive integer, got {levels!r}")
    if not 0.0 < ratio < 0.5:
        raise DomainError(f"ratio must lie in (0, 1/2), got {ratio!r}")
    gap_edges = 2.0 * ratio ** np.arange(levels + 1, dtype=float)  # 2, 2r, 2r^2, ...
    nodes, weights, gaps = [], [], []

    # [-1, 1 - 2 ratio]: (1 + t)^beta via Jacobi(0, beta), (1 - t)^alpha smooth
    first = gauss_jacobi_rule(0.0, beta, q)
    half = 0.5 * (2.0 - gap_edges[1])
    t = -1.0 + half * (1.0 + first.nodes)
    g = 1.0 - t
    nodes.append(t)
    gaps.append(g)
    weights.append(first.weights * half ** (beta + 1.0) * g**alpha)

    leg = gauss_jacobi_rule(0.0, 0.0, q)
    for k in range(1, levels):
        g_hi, g_lo = gap_edges[k], gap_edges[k + 1]
        half = 0.5 * (g_hi - g_lo)
        g = g_lo + half * leg.gaps
        t = 1.0 - g
        nodes.append(t)
        gaps.append(g)
        weights.append(leg.weights * half * g**alpha * (2.0 - g) ** beta)

    # [1 - 2 ratio^levels, 1]: (1 - t)^alpha via Jacobi(alpha, 0)
    last = gauss_jacobi_rule(alpha, 0.0, q)
    half = 0.5 * gap_edges[levels]
    g = half * last.gaps
    nodes.append(1.0 - g)
    gaps.append(g)
    weights.append(last.weights * half ** (alpha + 1.0) * (2.0 - g) ** beta)

    order = np.argsort(np.concatenate(nodes), kind="stable")
    return QuadratureRule(
        np.concatenate(nodes)[order],
        np.concatenate(weights)[order],
        2 * int(q) - 1,
        gaps=np.concatenate(gaps)[order],
    )


def graded_g_rule(nu, q, levels, ratio=0.25):
    """Probability-normalised :func:`graded_jacobi_rule` for ``G_nu``, graded toward +1."""
    nu = float(nu)
    if not nu > -0.5:
        raise DomainError(f"G_nu rules need nu > -1/2, got {nu!r}")
    base = graded_jacobi_rule(nu - 0.5, nu - 0.5, q, levels, ratio)
    w = base.weights / math.fsum(base.weights)
    return QuadratureRule(base.nodes, w, base.exactness_degree, gaps=base.gaps)


def graded_h_rule(lam, nu, q, levels, ratio=0.25):
    """Rule for ``H_nu^lam`` graded toward ``u = 1``."""
    lam, nu = float(lam), float(nu)
    if not (lam > nu > 0.0):
        raise DomainError(f"need lam > nu > 0, got lam={lam!r}, nu={nu!r}")
    return _h_from_t(graded_jacobi_rule(lam - nu - 1.0, nu - 0.5, q, levels, ratio))
