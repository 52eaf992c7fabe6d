"""
Normalised ultraspherical polynomials
=====================================

W_n^lam(x) = C_n^lam(x) / C_n^lam(1) stays inside [-1, 1] and equals 1
at x = 1. As lam grows the polynomials flatten toward x**n.
"""

import numpy as np

from ultrakernel import INDEX_INFINITY, eval_W, eval_W_all, g_rule, weights_omega

x = np.linspace(-1, 1, 9)

# one degree, several indices: the lam -> infinity limit is x**n
for lam in (0.5, 2.0, 20.0, 200.0):
    print(f"W_4^{lam:<5}", np.round(eval_W(4, lam, x), 4))
print("x**4      ", np.round(eval_W_all(4, INDEX_INFINITY, x)[4], 4))

# orthogonality under G_nu; the squared norms are 1/omega_n
nu = 1.5
rule = g_rule(nu, 32)
basis = eval_W_all(6, nu, rule.nodes)
gram = (basis * rule.weights) @ basis.T
print("\ndiag(Gram) * omega:", np.round(np.diag(gram) * weights_omega(6, nu), 14))
print("largest off-diagonal entry:", np.max(np.abs(gram - np.diag(np.diag(gram)))))

# high degree is harmless: the recurrence never leaves [-1, 1]
print("\nmax |W_2000^0.7| on a fine grid:", np.max(np.abs(eval_W(2000, 0.7, np.linspace(-1, 1, 5001)))))
