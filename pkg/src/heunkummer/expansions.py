"""Series solutions of the confluent Heun equation in a Kummer-function basis.

A solution is written u(z) = sum_n a_n 1F1(alpha_n; gamma_n; s0 z) where the
parameter walk (alpha_n, gamma_n) and the step constant s0 depend on the
family:

  A1_TwoTerm    alpha_n = alpha0+n, gamma_n = gamma0+n, s0 = -eps, two-term
  A2_ThreeTerm  alpha_n = alpha0+n, gamma_n = gamma0+n, s0 = -eps, three-term
  B4_FourTerm   alpha_n = alpha0+n, gamma_n = gamma (const), s0 free, four-term
  B3_ThreeTerm  B4 at s0 = -eps, three-term
  C_ThreeTerm   alpha_n = alpha0 (const), gamma_n = gamma0+n, s0 = -eps

Coefficients come from forward recurrences with R_0 = 0 (left-terminated
series only; the doubly infinite variants are not built). All recurrences
are homogeneous, so a_0 = 1 throughout and callers renormalize at a common
point when comparing solutions.

Known numerical limitations, by design left visible rather than patched:
forward recurrence picks the dominant coefficient solution, so families with
algebraically decaying coefficients (A2 and C on generic parameters, B4 on
any s0 != -eps) reach small tails only for terminating parameter choices.
eval_series reports the tail honestly and raises when asked for more than
the series can give.
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass
from typing import Optional

from .che_core import CheParams
from .errors import (
    ApplicabilityError,
    LeadingCoefficientVanishesError,
    TailTooLargeError,
)
from .kummer import INT_TOL, eval_1f1, nonpositive_int, pochhammer

# R_n and the recurrence numerator both scale like n^2; the graceful-zero
# test below uses these to separate terminated resonances from genuine
# degeneracy.
ZERO_TOL = 1e-9


class Family(enum.Enum):
    A1_TwoTerm = "a1"
    A2_ThreeTerm = "a2"
    B4_FourTerm = "b4"
    B3_ThreeTerm = "b3"
    C_ThreeTerm = "c"

    @classmethod
    def from_string(cls, s: str) -> "Family":
        for fam in cls:
            if s.lower() in (fam.value, fam.name.lower()):
                return fam
        raise ValueError(f"unknown family {s!r}; expected one of "
                         f"{[f.value for f in cls]}")


ALPHA_OVER_EPS = "alpha-over-eps"
GAMMA_CHOICE = "gamma"


@dataclass(frozen=True)
class SeriesSolution:
    """A built expansion: parameter walk plus coefficients a_0..a_N.

    terminated=True means the sum is exact (trailing coefficients are
    structural zeros); terminal_index is then the last contributing index.
    descending=True marks the mirror two-term variant whose parameter walk
    runs downward (alpha0-n, gamma0-n); see build_a1_descending.
    """

    params: CheParams
    family: Family
    alpha0: complex
    gamma0: complex
    s0: complex
    coefficients: tuple
    terminated: bool = False
    terminal_index: Optional[int] = None
    descending: bool = False

    def basis_parameters(self, n: int):
        """(alpha_n, gamma_n) of the n-th basis function."""
        if self.descending:
            return self.alpha0 - n, self.gamma0 - n
        if self.family in (Family.B4_FourTerm, Family.B3_ThreeTerm):
            return self.alpha0 + n, self.gamma0
        if self.family is Family.C_ThreeTerm:
            return self.alpha0, self.gamma0 + n
        return self.alpha0 + n, self.gamma0 + n


def _is_nonpositive_integer(v) -> bool:
    return nonpositive_int(v) is not None


def applicability(params: CheParams, family: Family) -> list[str]:
    """Complete list of violated applicability conditions for the family.

    Empty list means the family's series can be built for these parameters.
    """
    g, d, e, al, q = params.gamma, params.delta, params.epsilon, params.alpha, params.q
    out = []
    if e == 0:
        out.append("EpsilonZero")
        return out  # every later test divides by eps
    if family is Family.A1_TwoTerm:
        if abs(q - (al - d * e)) > INT_TOL * max(1.0, abs(al), abs(d * e)):
            out.append("QConstraintViolated")
        # a left-terminated two-term series only solves the equation when
        # the n=0 boundary function vanishes, which pins delta to 0
        if abs(d) > INT_TOL:
            out.append("DeltaNonZero")
    elif family in (Family.A2_ThreeTerm, Family.C_ThreeTerm):
        if _is_nonpositive_integer(g + d):
            out.append("GammaDeltaNonPositiveInt")
        # alpha/eps == gamma+delta collapses every basis function onto
        # exp(s0 z); builds still run, only multi-term structure degenerates
        if family is Family.C_ThreeTerm and al == 0:
            out.append("AlphaZero")
    else:  # B families
        if _is_nonpositive_integer(g):
            out.append("GammaNonPositiveInt")
    return out


def recurrence_coeffs(params: CheParams, family: Family, alpha0, s0, n: int):
    """Recurrence coefficients (R_n, Q_n, P_n, S_n) entering

        R_n a_n + Q_{n-1} a_{n-1} + P_{n-2} a_{n-2} + S_{n-3} a_{n-3} = 0.

    S_n is None for the three-term (and two-term) families. For A1 the
    encoding is R_n = 1, Q_n = -alpha_n/gamma_n, P = 0, so relation n pairs
    R_n with Q_{n-1} = -alpha_{n-1}/gamma_{n-1} and the same relation shape
    drives the two-term build.
    """
    g, d, e, al, q = params.gamma, params.delta, params.epsilon, params.alpha, params.q
    if family is Family.A1_TwoTerm:
        a_n = alpha0 + n
        c_n = (1 + g + d) + n  # gamma0 = 1+alpha0+gamma+delta-alpha/eps at alpha0=alpha/eps
        if c_n == 0:
            raise ZeroDivisionError(f"two-term ratio undefined: gamma_{n} = 0")
        return 1.0 + 0j, -a_n / c_n, 0j, None
    if family is Family.A2_ThreeTerm:
        gd = g + d
        if gd + n == 0:
            raise ZeroDivisionError(f"P_{n} denominator gamma+delta+{n} = 0")
        R = -n * (gd + n - 1)
        Q = n * (gd + n - 1) + (e * n + al) - q
        P = -(d + n) * (e * n + al) / (gd + n)
        return R, Q, P, None
    if family is Family.C_ThreeTerm:
        gd = g + d
        if gd + n == 0:
            raise ZeroDivisionError(f"P_{n} denominator gamma+delta+{n} = 0")
        R = -n * (gd + n - 1)
        Q = n * (gd + n - 1) - e * (d + n) + al - q
        P = (d + n) * (e - al / (gd + n))
        return R, Q, P, None
    an = alpha0 + n
    if family is Family.B3_ThreeTerm:
        ae = al / e
        R = (an - g) * (an - ae)
        Q = (an - ae) * (g - 2 * an) + an * (e - d) - q
        P = an * (an + d - ae)
        return R, Q, P, None
    if family is Family.B4_FourTerm:
        R = (an - g) * (an * e - al)
        Q = (an * e - al) * (g - 2 * an) - s0 * (an * (e - d) - q) \
            + an * (g - 1 - an) * (s0 + e)
        P = an * ((an + d) * e - al
                  + (2 * an + 2 - g - d - e) * (e + s0) + (e + s0) ** 2)
        S = -an * (1 + an) * (s0 + e)
        return R, Q, P, S
    raise ValueError(f"unknown family {family}")


def _resolve_alpha0_gamma0(params: CheParams, family: Family, alpha0_choice):
    g, d, e, al = params.gamma, params.delta, params.epsilon, params.alpha
    if family is Family.A1_TwoTerm:
        return al / e, 1 + g + d
    if family in (Family.A2_ThreeTerm, Family.C_ThreeTerm):
        return al / e, g + d
    # B families: gamma_n is the constant gamma; alpha0 has two branches
    if alpha0_choice in (None, ALPHA_OVER_EPS):
        return al / e, g
    if alpha0_choice == GAMMA_CHOICE:
        return g, g
    raise ValueError(
        f"alpha0_choice must be {ALPHA_OVER_EPS!r} or {GAMMA_CHOICE!r}, "
        f"got {alpha0_choice!r}")


def build_series(params: CheParams, family: Family, N: int,
                 alpha0_choice=None, s0=None) -> SeriesSolution:
    """Run the family's forward recurrence and return a_0..a_N (a_0 = 1).

    For A1 the coefficients are computed both recursively and in Pochhammer
    closed form (alpha0)_n/(gamma0)_n; the two must agree to 1e-12 relative.
    R_n = 0 steps are tolerated only when the accumulated numerator also
    vanishes (a terminated series being extended past its end); otherwise
    LeadingCoefficientVanishesError is raised.
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    violations = applicability(params, family)
    if violations:
        raise ApplicabilityError(
            f"family {family.name} not applicable: {', '.join(violations)}")
    if family is Family.B4_FourTerm:
        if s0 is None:
            raise ValueError("family B4 requires an explicit s0")
        s0 = complex(s0)
    else:
        s0 = -complex(params.epsilon)
    alpha0, gamma0 = _resolve_alpha0_gamma0(params, family, alpha0_choice)

    coeffs = [1.0 + 0j]
    scale = 1.0
    for n in range(1, N + 1):
        R, _, _, _ = recurrence_coeffs(params, family, alpha0, s0, n)
        num = 0j
        _, Q, _, _ = recurrence_coeffs(params, family, alpha0, s0, n - 1)
        num += Q * coeffs[n - 1]
        if n >= 2:
            _, _, P, _ = recurrence_coeffs(params, family, alpha0, s0, n - 2)
            num += P * coeffs[n - 2]
        if n >= 3 and family is Family.B4_FourTerm:
            _, _, _, S = recurrence_coeffs(params, family, alpha0, s0, n - 3)
            num += S * coeffs[n - 3]
        nsq = float((1 + n) ** 2)
        if abs(R) <= ZERO_TOL * nsq:
            if abs(num) <= ZERO_TOL * nsq * scale:
                coeffs.append(0j)  # terminated resonance
                continue
            raise LeadingCoefficientVanishesError(
                f"R_{n} = {R} vanishes with non-negligible numerator "
                f"|{abs(num):.3e}| for family {family.name}")
        a_n = -num / R
        coeffs.append(a_n)
        scale = max(scale, abs(a_n))

    if family is Family.A1_TwoTerm:
        for n in range(N + 1):
            num = pochhammer(alpha0, n)
            den = pochhammer(gamma0, n)
            if not (cmath.isfinite(num) and cmath.isfinite(den)):
                break  # the factorials blow past float range near n ~ 170
            rel = abs(coeffs[n] - num / den) / max(1.0, abs(num / den))
            if rel > 1e-12:
                raise AssertionError(
                    f"two-term coefficient a_{n} disagrees with the "
                    f"Pochhammer closed form: rel={rel:.3e}")

    # A trailing run of exact zeros one shorter than the recurrence order
    # forces every later coefficient to vanish identically, so the sum is a
    # finite one whatever produced the zeros (structural P_N = 0 with q on a
    # spectrum root, or the resonance path above).
    need = {Family.A1_TwoTerm: 1, Family.B4_FourTerm: 3}.get(family, 2)
    run = 0
    for a_n in reversed(coeffs):
        if a_n != 0:
            break
        run += 1
    terminated = run >= need
    return SeriesSolution(params=params, family=family, alpha0=complex(alpha0),
                          gamma0=complex(gamma0), s0=s0,
                          coefficients=tuple(coeffs), terminated=terminated,
                          terminal_index=len(coeffs) - 1 - run if terminated else None)


def build_a1_descending(params: CheParams, n_terms: Optional[int] = None) -> SeriesSolution:
    """The mirror two-term form: coefficients (1-gamma0)_n/n! with basis
    functions 1F1(-n; gamma0-n; -eps z), gamma0 = 1 + gamma + delta - alpha/eps.

    This object is formal. For positive integer gamma0 = M+1 the coefficients
    vanish beyond n = M and the finite sum is returned terminated, but the
    finite sum does NOT solve the equation (its recurrence boundary survives;
    tests pin a counterexample). For non-integer gamma0 with Re gamma0 > 1
    the infinite series converges to the zero function (partial sums scale
    like N^(1-gamma0)). It is exposed for inspection, not for solving.
    """
    g, d, e, al, q = (params.gamma, params.delta, params.epsilon,
                      params.alpha, params.q)
    if e == 0:
        raise ApplicabilityError("mirror two-term form needs eps != 0")
    if abs(q - (al - d * e)) > INT_TOL * max(1.0, abs(al), abs(d * e)):
        raise ApplicabilityError("mirror two-term form needs q = alpha - delta*eps")
    gamma0 = 1 + g + d - al / e
    m = None
    g0_int = round(gamma0.real) if abs(gamma0.imag) <= INT_TOL else None
    if g0_int is not None and g0_int >= 1 and abs(gamma0 - g0_int) <= INT_TOL:
        m = g0_int - 1  # (1-gamma0)_n = 0 for n > m
    if m is None and n_terms is None:
        raise ValueError("n_terms is required when gamma0 is not a positive integer")
    count = m + 1 if m is not None else n_terms
    coeffs = []
    b = 1.0 + 0j
    for n in range(count):
        coeffs.append(b)
        b *= (n + 1 - gamma0) / (n + 1)
    return SeriesSolution(params=params, family=Family.A1_TwoTerm,
                          alpha0=0j, gamma0=complex(gamma0),
                          s0=-complex(e), coefficients=tuple(coeffs),
                          terminated=m is not None, terminal_index=m,
                          descending=True)


def resubstitution_residual(sol: SeriesSolution, n: int) -> float:
    """|R_n a_n + Q_{n-1} a_{n-1} + P_{n-2} a_{n-2} (+ S_{n-3} a_{n-3})|
    relative to the largest participating term. Checks a built solution
    against its own recurrence."""
    if sol.descending:
        raise ValueError("resubstitution applies to ascending builds only")
    a = sol.coefficients
    if not 1 <= n < len(a):
        raise IndexError(f"n={n} out of range for {len(a)} coefficients")
    R, _, _, _ = recurrence_coeffs(sol.params, sol.family, sol.alpha0, sol.s0, n)
    terms = [R * a[n]]
    _, Q, _, _ = recurrence_coeffs(sol.params, sol.family, sol.alpha0, sol.s0, n - 1)
    terms.append(Q * a[n - 1])
    if n >= 2:
        _, _, P, _ = recurrence_coeffs(sol.params, sol.family, sol.alpha0, sol.s0, n - 2)
        terms.append(P * a[n - 2])
    if n >= 3 and sol.family is Family.B4_FourTerm:
        _, _, _, S = recurrence_coeffs(sol.params, sol.family, sol.alpha0, sol.s0, n - 3)
        terms.append(S * a[n - 3])
    big = max(abs(t) for t in terms)
    return abs(sum(terms)) / max(1e-300, big)


def eval_series(sol: SeriesSolution, z, tol: float = 1e-10):
    """(value, tail_estimate) of the expansion at z.

    tail_estimate is |last included nonzero term| / |partial sum|, or exactly
    0 for a terminated solution. Raises TailTooLargeError when the estimate
    exceeds tol on a non-terminated solution.
    """
    value, _, _, tail = _eval_series_impl(sol, z, derivatives=False)
    if not sol.terminated and tail > tol:
        raise TailTooLargeError(
            f"tail estimate {tail:.3e} exceeds tol={tol:.3e}; "
            f"the series is not terminated")
    return value, tail


def eval_series_with_derivatives(sol: SeriesSolution, z):
    """(u, u', u'', tail_estimate) at z, each 1F1 differentiated through its
    parameter-shift rule. No tail gate is applied; callers inspect the tail."""
    return _eval_series_impl(sol, z, derivatives=True)


def _eval_series_impl(sol: SeriesSolution, z, derivatives: bool):
    z = complex(z)
    s0 = sol.s0
    x = s0 * z
    u = u1 = u2 = 0j
    last_nonzero = None
    for n, a_n in enumerate(sol.coefficients):
        if sol.terminated and sol.terminal_index is not None and n > sol.terminal_index:
            break
        if a_n == 0:
            continue
        an, cn = sol.basis_parameters(n)
        term = a_n * eval_1f1(an, cn, x)
        u += term
        last_nonzero = term
        if derivatives:
            u1 += a_n * s0 * (an / cn) * eval_1f1(an + 1, cn + 1, x)
            u2 += a_n * s0 * s0 * (an * (an + 1)) / (cn * (cn + 1)) \
                * eval_1f1(an + 2, cn + 2, x)
    if sol.terminated:
        tail = 0.0
    elif last_nonzero is None:
        tail = 0.0
    else:
        tail = abs(last_nonzero) / max(1e-300, abs(u))
    if derivatives:
        return u, u1, u2, tail
    return u, None, None, tail


def series_ode_residual(sol: SeriesSolution, z) -> float:
    """Relative residual of the full equation for the evaluated series at z."""
    from .che_core import residual

    u, u1, u2, _ = eval_series_with_derivatives(sol, z)
    r = residual(sol.params, u, u1, u2, z)
    return abs(r) / max(1.0, abs(u), abs(u1), abs(u2))
