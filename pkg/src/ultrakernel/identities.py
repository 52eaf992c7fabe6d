"""Numerical certifiers for the classical integral identities behind the kernel.

* Gegenbauer's multiplication theorem
      W_n(x) W_n(y) = int W_n(xy + s sqrt(1-x^2) sqrt(1-y^2)) G_{nu-1/2}(ds)
* the Feldheim-Vilenkin integral, which lowers the index lam -> nu
* Sonine's first finite integral for the normalised Bessel function
      Lambda_{lam-1/2}(t) = int Lambda_{nu-1/2}(u t) H_nu^lam(du)

Each check returns a :class:`ValidationReport`; :func:`run_sweep` draws
random parameter tuples from a seeded generator and checks all three.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError
from .gegenbauer import eval_Lambda, eval_W
from .quadrature import g_rule, h_rule

__all__ = [
    "ValidationReport",
    "check_multiplication",
    "feldheim_vilenkin",
    "sonine",
    "run_sweep",
    "reports_to_json",
]

DEFAULT_TOLERANCE = 1e-8


@dataclass(frozen=True)
class ValidationReport:
    identity: str
    params: dict
    lhs: float
    rhs: float
    residual: float
    tolerance: float
    passed: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=False, allow_nan=True)


def _report(identity, params, lhs, rhs, tolerance):
    lhs, rhs = float(lhs), float(rhs)
    residual = abs(lhs - rhs)
    return ValidationReport(identity, params, lhs, rhs, residual, tolerance, residual <= tolerance)


def _check_unit(name, value):
    value = float(value)
    if not abs(value) <= 1.0:
        raise DomainError(f"{name} must lie in [-1, 1], got {value}")
    return value


def check_multiplication(nu, n, x, y, q_sigma=64, tolerance=DEFAULT_TOLERANCE):
    """Certify the product formula ``W_n^nu(x) W_n^nu(y)`` at one point."""
    x, y = _check_unit("x", x), _check_unit("y", y)
    nu = float(nu)
    if not nu > 0.0:
        raise DomainError(f"nu must be > 0, got {nu}")
    lhs = eval_W(n, nu, x) * eval_W(n, nu, y)
    rule = g_rule(nu - 0.5, q_sigma)
    arg = x * y + rule.nodes * (math.sqrt(1.0 - x * x) * math.sqrt(1.0 - y * y))
    # Cauchy-Schwarz keeps arg in [-1, 1] up to roundoff
    arg = np.clip(arg, -1.0, 1.0)
    rhs = math.fsum(rule.weights * eval_W(n, nu, arg))
    params = {"nu": nu, "n": int(n), "x": x, "y": y, "q_sigma": int(q_sigma)}
    return _report("multiplication", params, lhs, rhs, tolerance)


def _fv_integrand(n, nu, x, u):
    s = x * x + u * u * (1.0 - x * x)
    root = np.sqrt(s)
    z = x / root
    # one guarded clamp for roundoff spill past +-1
    spill = np.abs(z) - 1.0
    if np.any(spill > 1e-14):
        raise AssertionError("x / sqrt(s) left [-1, 1] by more than roundoff")
    z = np.clip(z, -1.0, 1.0)
    return root**n * eval_W(n, nu, z)


def feldheim_vilenkin(lam, nu, n, x, q_u=64, tolerance=DEFAULT_TOLERANCE):
    """Certify ``W_n^lam(x) = int s^(n/2) W_n^nu(x / sqrt(s)) H_nu^lam(du)``.

    Here ``s = x^2 + u^2 (1 - x^2)``. The integrand is a polynomial of
    degree ``n/2`` in ``u^2``, so the H-rule integrates it exactly once
    ``q_u > n/4``.
    """
    lam, nu = float(lam), float(nu)
    if not (lam > nu > 0.0):
        raise DomainError(f"need lam > nu > 0, got lam={lam}, nu={nu}")
    x = _check_unit("x", x)
    lhs = eval_W(n, lam, x)
    rule = h_rule(lam, nu, q_u)
    rhs = math.fsum(rule.weights * _fv_integrand(n, nu, x, rule.nodes))
    params = {"lam": lam, "nu": nu, "n": int(n), "x": x, "q_u": int(q_u)}
    return _report("feldheim_vilenkin", params, lhs, rhs, tolerance)


def sonine(lam, nu, t, q_u=64, tolerance=DEFAULT_TOLERANCE):
    """Certify ``Lambda_{lam-1/2}(t) = int Lambda_{nu-1/2}(u t) H_nu^lam(du)``."""
    lam, nu, t = float(lam), float(nu), float(t)
    if not (lam > nu > 0.0):
        raise DomainError(f"need lam > nu > 0, got lam={lam}, nu={nu}")
    if not t >= 0.0:
        raise DomainError(f"t must be >= 0, got {t}")
    lhs = eval_Lambda(lam - 0.5, t)
    rule = h_rule(lam, nu, q_u)
    rhs = math.fsum(rule.weights * eval_Lambda(nu - 0.5, rule.nodes * t))
    params = {"lam": lam, "nu": nu, "t": t, "q_u": int(q_u)}
    return _report("sonine", params, lhs, rhs, tolerance)


def run_sweep(seed=0, count=200, tolerance=DEFAULT_TOLERANCE):
    """Check every identity on ``count`` random tuples each.

    Tuples are drawn with ``nu`` in (0, 4], ``lam`` in (nu, nu + 5],
    ``n <= 20``, ``x, y`` in (-1, 1) and ``t`` in [0, 20]. Reports come
    back in generation order: all multiplication checks, then
    Feldheim-Vilenkin, then Sonine.
    """
    rng = np.random.default_rng(seed)

    def draw():
        nu = 4.0 * (1.0 - rng.random())  # (0, 4]
        lam = nu + 5.0 * (1.0 - rng.random())  # (nu, nu + 5]
        n = int(rng.integers(0, 21))
        x, y = rng.uniform(-1.0, 1.0, size=2)
        t = 20.0 * rng.random()
        return nu, lam, n, float(x), float(y), t

    tuples = [draw() for _ in range(count)]
    reports = [check_multiplication(nu, n, x, y, tolerance=tolerance) for nu, _, n, x, y, _ in tuples]
    reports += [feldheim_vilenkin(lam, nu, n, x, tolerance=tolerance) for nu, lam, n, x, _, _ in tuples]
    reports += [sonine(lam, nu, t, tolerance=tolerance) for nu, lam, _, _, _, t in tuples]
    return reports


def reports_to_json(reports) -> str:
    """One JSON object per line, in report order."""
    return "".join(r.to_json() + "\n" for r in reports)
