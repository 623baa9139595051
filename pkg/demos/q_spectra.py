"""Termination detection and accessory-parameter spectra.

A family's series cuts off after N + 1 terms only when two things line up:
a parameter combination sits at a nonpositive integer (the condition kind),
and q is a root of the degree N + 1 polynomial a_{N+1}(q) = 0. This walks
the detection step, prints a few spectra with their verification flags, and
runs the explicit polynomial certificate where the finite sum really is a
polynomial in z.
"""

from heunkummer import (
    CheParams,
    Family,
    enumerate_termination_conditions,
    polynomial_certificate,
    q_spectrum,
    terminated_solution,
)
from heunkummer.termination import (
    KIND_ALPHA_OVER_EPS,
    KIND_DELTA_INT,
    KIND_GAMMA_DELTA_ALPHA,
    TerminationCondition,
)

# delta = -1 and alpha/eps = -2 are admissible at once; detection reports both
p = CheParams(2.5, -1, 1.1, -2.2, 0)
print("conditions detected for (2.5, -1, 1.1, -2.2):")
for cond in enumerate_termination_conditions(p, Family.A2_ThreeTerm):
    print(f"  kind = {cond.kind:16s} N = {cond.N}")


def show_spectrum(label, params, family, cond, choice=None):
    spec = q_spectrum(params, family, cond, alpha0_choice=choice)
    print(f"\n{label}")
    for root, ok in zip(spec.roots, spec.verified):
        print(f"  q = {root:.15g}   verified: {ok}")
    return spec


show_spectrum("a2, delta integer, N = 1 at (2.5, -1, 1, 1):",
              CheParams(2.5, -1, 1, 1, 0), Family.A2_ThreeTerm,
              TerminationCondition(Family.A2_ThreeTerm, KIND_DELTA_INT, 1))

show_spectrum("b3, alpha/eps integer, N = 1 at (2.5, 0.3, 1, -1):",
              CheParams(2.5, 0.3, 1, -1, 0), Family.B3_ThreeTerm,
              TerminationCondition(Family.B3_ThreeTerm, KIND_ALPHA_OVER_EPS, 1))

show_spectrum("c, gamma+delta-alpha/eps integer, N = 1 at (1.3, 0.4, 1, 2.7):",
              CheParams(1.3, 0.4, 1, 2.7, 0), Family.C_ThreeTerm,
              TerminationCondition(Family.C_ThreeTerm, KIND_GAMMA_DELTA_ALPHA, 1))

# complex roots come in conjugate pairs for real parameters
show_spectrum("c, delta integer, N = 1 at (1.6, -1, 0.9, 1.1) - complex pair:",
              CheParams(1.6, -1, 0.9, 1.1, 0), Family.C_ThreeTerm,
              TerminationCondition(Family.C_ThreeTerm, KIND_DELTA_INT, 1))

# alpha/eps termination of a2 makes the finite sum a polynomial of degree N;
# the certificate fits one and reports the misfit
base = CheParams(1.4, 0.6, 1.3, -1.3, 0)
cond = TerminationCondition(Family.A2_ThreeTerm, KIND_ALPHA_OVER_EPS, 1)
spec = q_spectrum(base, Family.A2_ThreeTerm, cond)
print("\npolynomial certificate for the a2 alpha/eps case (1.4, 0.6, 1.3, -1.3):")
for root in spec.roots:
    sol = terminated_solution(CheParams(1.4, 0.6, 1.3, -1.3, root),
                              Family.A2_ThreeTerm, cond)
    print(f"  q = {root:.15g}   certificate misfit {polynomial_certificate(sol, 1):.3e}")

# ... and a delta-integer finite sum is NOT a polynomial, so the same
# certificate must refuse it
cond = TerminationCondition(Family.A2_ThreeTerm, KIND_DELTA_INT, 1)
sol = terminated_solution(CheParams(2.5, -1, 1, 1, 1.5), Family.A2_ThreeTerm, cond)
print(f"  delta-integer counterexample misfit {polynomial_certificate(sol, 1):.3e}"
      "  (large on purpose)")
