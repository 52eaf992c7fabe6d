"""
Gauss rules for the measures G_nu and H_nu^lam
==============================================

Golub-Welsch Gauss-Jacobi rules, and composite rules graded toward an
endpoint for integrands with a corner singularity.
"""

import math

import numpy as np

from ultrakernel import g_rule, gauss_jacobi_rule, h_rule
from ultrakernel.quadrature import graded_jacobi_rule

# plain Gauss-Jacobi: exact up to degree 2q - 1
rule = gauss_jacobi_rule(0.5, -0.25, 8)
print("nodes:", np.round(rule.nodes, 6))
print("exact through degree", rule.exactness_degree)

# G_nu is symmetric, H_nu^lam lives on (0, 1); both carry unit mass
g, h = g_rule(1.0, 20), h_rule(3.0, 1.0, 20)
print("\nG mass, odd moment:", math.fsum(g.weights), math.fsum(g.weights * g.nodes**3))
# E[u^2] = (nu + 1/2) / (lam + 1/2) under H_nu^lam
print("H mass, E[u^2]:    ", math.fsum(h.weights), math.fsum(h.weights * h.nodes**2), 1.5 / 3.5)

# an endpoint singularity the weight does not carry: f(t) = (1 - t)^0.3
f = lambda gap: gap**0.3
exact = 2**1.3 / 1.3
for q in (8, 32, 128):
    plain = gauss_jacobi_rule(0.0, 0.0, q)
    print(f"plain q={q:<4}  error {abs(plain.integrate(lambda t: f(1 - t)) - exact):.1e}")
# 16 nodes per piece; the total node count is 16 * (levels + 1)
for levels in (4, 8, 16):
    graded = graded_jacobi_rule(0.0, 0.0, 16, levels)
    # use the stored gaps 1 - t, which stay accurate near the endpoint
    val = math.fsum(graded.weights * f(graded.gaps))
    print(f"graded 16 x {levels:<3} error {abs(val - exact):.1e}")
