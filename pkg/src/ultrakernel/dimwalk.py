"""Schoenberg mixtures and the dimension walk between index classes.

A function in the class ``P_nu`` is a mixture

    f(x) = sum_n a_n W_n^nu(x),    a_n >= 0,  sum_n a_n = 1,

and for ``nu = (d - 1)/2`` these are exactly the positive-definite
(isotropic) functions on the sphere ``S^d``. Lifting to a higher index
``lam`` keeps the coefficient sequence and swaps the basis; integrating
``f`` against the projection kernel realises the same map, which is what
:func:`verify_lift` checks.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .gegenbauer import INDEX_INFINITY, eval_W_all, index_value, weights_omega
from .identities import ValidationReport
from .kernel import GRADED_NODES, PROJECTION_LEVELS, project_function
from .quadrature import g_rule

__all__ = [
    "SchoenbergSeq",
    "SphereDim",
    "eval_mixture",
    "lift",
    "verify_lift",
    "dim_to_index",
    "index_to_dim",
    "reexpand",
]


def _check_seq_index(index):
    if index is INDEX_INFINITY:
        return index
    if isinstance(index, str) and index.lower() in ("inf", "infinity"):
        return INDEX_INFINITY
    index = float(index)
    if not index > 0.0 or not math.isfinite(index):
        raise DomainError(f"index must be a finite real > 0 or INDEX_INFINITY, got {index!r}")
    return index


@dataclass(frozen=True, eq=False)
class SchoenbergSeq:
    """Truncated angular power spectrum ``a_0..a_N`` tagged with its index.

    ``epsilon`` is the declared bound on the discarded tail mass
    ``sum_{n > N} a_n``; the stored coefficients must sum to one within it.
    """

    coefficients: np.ndarray
    index: object
    epsilon: float = 0.0
    _sum_tol: float = field(default=1e-12, repr=False)

    def __post_init__(self):
        a = np.array(self.coefficients, dtype=float).reshape(-1)
        if a.size == 0:
            raise DomainError("a Schoenberg sequence needs at least one coefficient")
        if np.any(~np.isfinite(a)) or np.any(a < 0.0):
            raise DomainError("coefficients must be finite and nonnegative")
        eps = float(self.epsilon)
        if not eps >= 0.0:
            raise DomainError(f"epsilon must be >= 0, got {eps}")
        total = math.fsum(a)
        if not (1.0 - eps - self._sum_tol <= total <= 1.0 + self._sum_tol):
            raise DomainError(
                f"coefficients sum to {total!r}; need 1 within declared tail mass {eps:g}"
            )
        a.flags.writeable = False
        object.__setattr__(self, "coefficients", a)
        object.__setattr__(self, "index", _check_seq_index(self.index))
        object.__setattr__(self, "epsilon", eps)

    @property
    def truncation(self) -> int:
        return self.coefficients.size - 1

    @property
    def tail_mass(self) -> float:
        """Mass missing from the stored coefficients (at most ``epsilon`` up to roundoff)."""
        return max(0.0, 1.0 - math.fsum(self.coefficients))

    @classmethod
    def delta(cls, k, index):
        """All mass on degree ``k``: ``f = W_k``."""
        a = np.zeros(int(k) + 1)
        a[k] = 1.0
        return cls(a, index, 0.0)

    @classmethod
    def geometric(cls, q, index, epsilon=1e-14):
        """``a_n = (1 - q) q^n`` truncated where the tail ``q^(N+1)`` drops below ``epsilon``."""
        q = float(q)
        if not 0.0 <= q < 1.0:
            raise DomainError(f"q must lie in [0, 1), got {q}")
        if q == 0.0:
            return cls.delta(0, index)
        N = max(0, math.ceil(math.log(epsilon) / math.log(q)) - 1)
        n = np.arange(N + 1)
        return cls((1.0 - q) * q**n, index, q ** (N + 1))

    def to_json(self) -> str:
        index = "infinity" if self.index is INDEX_INFINITY else self.index
        return json.dumps(
            {"coefficients": self.coefficients.tolist(), "index": index, "epsilon": self.epsilon}
        )

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls(np.asarray(data["coefficients"], dtype=float), data["index"], data.get("epsilon", 0.0))


@dataclass(frozen=True)
class SphereDim:
    d: int

    def __post_init__(self):
        if isinstance(self.d, bool) or not isinstance(self.d, (int, np.integer)) or self.d < 1:
            raise DomainError(f"sphere dimension must be a positive integer, got {self.d!r}")


def eval_mixture(seq: SchoenbergSeq, x):
    """``sum_{n <= N} a_n W_n^index(x)``; accurate to within ``seq.tail_mass``.

    Infinite-index sequences are evaluated as a power series by Horner's rule.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) > 1.0) or np.any(np.isnan(xa)):
        raise DomainError("x must lie in [-1, 1]")
    a = seq.coefficients
    if seq.index is INDEX_INFINITY:
        out = np.zeros_like(xa)
        for coef in a[::-1]:
            out = out * xa + coef
    else:
        basis = eval_W_all(seq.truncation, seq.index, xa)
        out = np.tensordot(a, basis, axes=(0, 0))
    return float(out) if np.ndim(x) == 0 else out


def lift(seq: SchoenbergSeq, lam) -> SchoenbergSeq:
    """Walk from ``P_nu`` up to ``P_lam``: same coefficients, higher index."""
    lam = _check_seq_index(lam)
    if not index_value(lam) > index_value(seq.index):
        raise DomainError(
            f"lift needs lam > current index (got lam={lam!r}, index={seq.index!r}); "
            "the classes shrink as the index grows, so there is no downward walk"
        )
    return SchoenbergSeq(seq.coefficients, lam, seq.epsilon)


def verify_lift(seq: SchoenbergSeq, lam, x, q=GRADED_NODES, levels=PROJECTION_LEVELS, tolerance=1e-6) -> ValidationReport:
    """Compare ``lift(seq, lam)`` at ``x`` against ``int f(y) M(x; dy)``.

    Requires a finite ``seq.index = nu`` and ``lam > nu + 1`` so the kernel
    density can be integrated directly.
    """
    if seq.index is INDEX_INFINITY:
        raise DomainError("cannot project from the infinite index")
    nu = seq.index
    lam = float(lam)
    lhs = eval_mixture(lift(seq, lam), x)
    rhs = project_function(lambda y: eval_mixture(seq, y), lam, nu, x, q, levels)
    residual = abs(lhs - rhs)
    params = {"lam": lam, "nu": nu, "x": float(x), "truncation": seq.truncation, "epsilon": seq.epsilon}
    return ValidationReport("dimension_walk", params, lhs, rhs, residual, tolerance, residual <= tolerance)


def reexpand(f, nu, kmax, q=128):
    """Coefficients ``b_k = omega_k^nu int f W_k^nu dG_nu`` for ``k <= kmax``.

    For a mixture ``f`` in ``P_nu`` (or any smaller class) these are the
    Schoenberg coefficients of ``f`` in the ``nu`` basis and must be
    nonnegative.
    """
    rule = g_rule(nu, q)
    basis = eval_W_all(kmax, nu, rule.nodes)
    return weights_omega(kmax, nu) * (basis @ (rule.weights * np.asarray(f(rule.nodes), dtype=float)))


def dim_to_index(s: SphereDim | int) -> float:
    """``nu = (d - 1)/2`` for the sphere ``S^d``."""
    if not isinstance(s, SphereDim):
        s = SphereDim(s)
    return 0.5 * (s.d - 1)


def index_to_dim(nu) -> SphereDim | None:
    """Inverse of :func:`dim_to_index`; ``None`` when ``2 nu + 1`` is not an integer."""
    nu = float(nu)
    if not nu > 0.0:
        raise DomainError(f"nu must be > 0, got {nu}")
    d = 2.0 * nu + 1.0
    if d != round(d):
        return None
    return SphereDim(int(round(d)))
