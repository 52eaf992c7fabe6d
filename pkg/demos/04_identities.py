"""
Certifying the classical identities
===================================

Product formula, index-lowering integral and Sonine's Bessel integral,
each checked by quadrature and reported as a ValidationReport.
"""

from ultrakernel import check_multiplication, feldheim_vilenkin, run_sweep, sonine

for rep in (
    check_multiplication(nu=1.5, n=6, x=0.7, y=-0.2),
    feldheim_vilenkin(lam=3.5, nu=1.0, n=9, x=-0.6, q_u=96),
    sonine(lam=3.0, nu=1.0, t=10.0, q_u=128),
):
    print(f"{rep.identity:<18} lhs={rep.lhs:+.15f} residual={rep.residual:.1e} passed={rep.passed}")

reports = run_sweep(seed=1, count=200)
worst = max(reports, key=lambda r: r.residual)
print(f"\nsweep: {sum(r.passed for r in reports)}/{len(reports)} passed, worst residual {worst.residual:.1e}")
print(worst.to_json())
