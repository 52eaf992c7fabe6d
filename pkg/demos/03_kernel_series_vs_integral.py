"""
The projection kernel two ways
==============================

The kernel m(x; y) is a series of products of high-degree polynomials.
Summing it in closed form turns it into a smooth double integral over
u and v, which is cheap and stable even at r = 1.
"""

import numpy as np

from ultrakernel import KernelParams, kernel_integral, kernel_series
from ultrakernel.kernel import timed

p = KernelParams(lam=3.0, nu=0.5, r=0.9, x=0.2, y=-0.4)
for N in (50, 150, 600):
    ev, sec = timed(kernel_series, p, N)
    print(f"series   N={N:<4} {ev.value:.15f}  tail bound {ev.est_error:.1e}  {sec * 1e3:.1f} ms")
for q in (16, 32, 96):
    ev, sec = timed(kernel_integral, p, q, q)
    print(f"integral Q={q:<4} {ev.value:.15f}  est error  {ev.est_error:.1e}  {sec * 1e3:.1f} ms")

# at r = 1 the series converges only algebraically ...
p1 = KernelParams(3.0, 0.5, 1.0, 0.5, 0.5)
print()
for N in (100, 1000, 10000):
    print(f"series   N={N:<6} {kernel_series(p1, N).value:.10f}")
# ... while graded integration settles quickly
ev = kernel_integral(p1)
print(f"integral        {ev.value:.10f}  nodes {ev.truncation_or_nodes}  est error {ev.est_error:.1e}")

# inside nu < lam <= nu + 1 the kernel blows up on the diagonal at r = 1
try:
    KernelParams(1.4, 0.5, 1.0, 0.3, 0.3)
except Exception as exc:
    print("\nrefused:", exc)

# a slice of the surface
ys = np.linspace(-0.9, 0.9, 7)
vals = [kernel_integral(KernelParams(3.0, 0.5, 1.0, 0.3, y)).value for y in ys]
print("\nm(0.3; y):", np.round(vals, 5))
