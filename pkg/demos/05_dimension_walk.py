"""
Walking between sphere dimensions
=================================

A positive-definite function on S^d is a mixture of W_n^nu with
nu = (d - 1)/2. Keeping the coefficients and raising the index moves it
to a smaller class; integrating against the kernel does the same thing.
"""

import numpy as np

from ultrakernel import SchoenbergSeq, dim_to_index, eval_mixture, lift, verify_lift
from ultrakernel.dimwalk import reexpand

nu = dim_to_index(2)  # the 2-sphere
seq = SchoenbergSeq.geometric(0.6, nu)
print(f"S^2 -> nu={nu}; {seq.truncation + 1} coefficients, tail mass {seq.tail_mass:.1e}")

up = lift(seq, 3.0)
x = np.linspace(-1, 1, 5)
print("f in P_0.5:", np.round(eval_mixture(seq, x), 6))
print("f in P_3  :", np.round(eval_mixture(up, x), 6))

# the walk agrees with integrating f against the kernel
rep = verify_lift(seq, 3.0, 0.3)
print(f"\nlift vs kernel integral at x=0.3: residual {rep.residual:.1e}")

# two steps or one: same coefficients
two = lift(lift(seq, 1.0), 3.0)
print("semigroup, coefficients equal:", np.array_equal(two.coefficients, up.coefficients))

# the lifted function re-expanded in the original basis has nonnegative coefficients
b = reexpand(lambda y: eval_mixture(up, y), nu, 12)
print("re-expanded coefficients:", np.round(b, 5))
