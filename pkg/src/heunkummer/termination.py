"""Termination of the Kummer-basis expansions and accessory-parameter spectra.

A series right-terminates at index N when P_N = 0 (a parameter coincidence,
detected here as an integer condition) together with a_{N+1} = 0, which is a
polynomial equation of degree N+1 in q. Its roots are the q-spectrum; for
each root the recurrence then keeps every later coefficient at zero.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from .che_core import CheParams
from .errors import IllConditionedRootsError, LeadingCoefficientVanishesError
from .expansions import (
    ALPHA_OVER_EPS,
    GAMMA_CHOICE,
    Family,
    SeriesSolution,
    applicability,
    build_series,
    eval_series,
    recurrence_coeffs,
)
from .errors import ApplicabilityError
from .kummer import nonpositive_int

KIND_ALPHA_OVER_EPS = "AlphaOverEps"
KIND_DELTA_INT = "DeltaInt"
KIND_GAMMA_DELTA_ALPHA = "GammaDeltaAlpha"

VERIFY_TOL = 1e-9          # |a_{N+1}|, |a_{N+2}| relative to max coefficient
POLISH_TOL = 1e-8          # polished root must satisfy the polynomial this well


@dataclass(frozen=True)
class TerminationCondition:
    family: Family
    kind: str
    N: int


@dataclass(frozen=True)
class QSpectrum:
    """Roots of a_{N+1}(q) = 0 with per-root rebuild verification.

    polynomial holds ascending coefficients of a_{N+1}(q); roots are its
    N+1 roots (counted with multiplicity); verified[i] records whether
    rebuilding the series at roots[i] drives a_{N+1} and a_{N+2} below
    1e-9 of the largest coefficient; root_residuals[i] is |a_{N+1}(root)|
    from the rebuilt recurrence.
    """

    condition: TerminationCondition
    polynomial: tuple
    roots: tuple
    verified: tuple
    root_residuals: tuple


def _admissible_kinds(family: Family, alpha0_choice):
    if family is Family.A2_ThreeTerm:
        return [KIND_ALPHA_OVER_EPS, KIND_DELTA_INT]
    if family is Family.B3_ThreeTerm:
        if alpha0_choice == GAMMA_CHOICE:
            return [KIND_GAMMA_DELTA_ALPHA]
        return [KIND_ALPHA_OVER_EPS, KIND_DELTA_INT]
    if family is Family.C_ThreeTerm:
        return [KIND_GAMMA_DELTA_ALPHA, KIND_DELTA_INT]
    raise ValueError(
        f"family {family.name} has no right-termination rules here "
        f"(two-term series terminate through their Pochhammer zeros; "
        f"four-term with free s0 has no known condition)")


def _kind_value(params: CheParams, kind: str):
    if kind == KIND_ALPHA_OVER_EPS:
        return params.alpha / params.epsilon
    if kind == KIND_DELTA_INT:
        return params.delta
    if kind == KIND_GAMMA_DELTA_ALPHA:
        return params.gamma + params.delta - params.alpha / params.epsilon
    raise ValueError(f"unknown termination kind {kind!r}")


def enumerate_termination_conditions(params: CheParams, family: Family,
                                     alpha0_choice=None) -> list[TerminationCondition]:
    """All admissible integer coincidences for the family, smallest N first."""
    found = []
    for kind in _admissible_kinds(family, alpha0_choice):
        m = nonpositive_int(_kind_value(params, kind))
        if m is not None:
            found.append(TerminationCondition(family=family, kind=kind, N=m))
    found.sort(key=lambda c: c.N)
    return found


def detect_termination(params: CheParams, family: Family,
                       alpha0_choice=None) -> Optional[TerminationCondition]:
    """The condition with smallest N, or None.

    Detection only means P_N = 0; actual termination still requires q to be
    a root of the spectrum.
    """
    conditions = enumerate_termination_conditions(params, family, alpha0_choice)
    return conditions[0] if conditions else None


def _coefficient_polynomials(params: CheParams, family: Family,
                             alpha0_choice, upto: int):
    """a_n(q) for n = 0..upto as ascending coefficient arrays.

    Q_n is degree 1 in q with dQ/dq = -1 for every three-term family here;
    R_n and P_n are q-free, so deg a_n = n.
    """
    from .expansions import _resolve_alpha0_gamma0

    p0 = dataclasses.replace(params, q=0)
    alpha0, _ = _resolve_alpha0_gamma0(p0, family, alpha0_choice)
    s0 = -p0.epsilon
    polys = [np.array([1.0 + 0j])]
    for n in range(1, upto + 1):
        R, _, _, _ = recurrence_coeffs(p0, family, alpha0, s0, n)
        if abs(R) <= 1e-12 * (1 + n) ** 2:
            raise LeadingCoefficientVanishesError(
                f"R_{n} = {R} vanishes; spectrum polynomial cannot be built")
        _, Q0, _, _ = recurrence_coeffs(p0, family, alpha0, s0, n - 1)
        num = npoly.polymul(polys[n - 1], np.array([Q0, -1.0 + 0j]))
        if n >= 2:
            _, _, P, _ = recurrence_coeffs(p0, family, alpha0, s0, n - 2)
            num = npoly.polyadd(num, P * polys[n - 2])
        polys.append(-num / R)
    return polys


def _a_next_via_recurrence(params: CheParams, family: Family,
                           alpha0_choice, N: int, q) -> complex:
    """a_{N+1} at a concrete q, by plain forward recurrence (no polynomials)."""
    p = dataclasses.replace(params, q=q)
    sol = build_series(p, family, N + 1, alpha0_choice=alpha0_choice)
    return sol.coefficients[N + 1]


def _companion_roots(coeffs: np.ndarray) -> np.ndarray:
    """Roots of an ascending-coefficient polynomial via its companion matrix."""
    d = len(coeffs) - 1
    if d == 0:
        return np.array([], dtype=complex)
    monic = coeffs / coeffs[-1]
    if d == 1:
        return np.array([-monic[0]], dtype=complex)
    comp = np.zeros((d, d), dtype=complex)
    comp[1:, :-1] = np.eye(d - 1)
    comp[:, -1] = -monic[:-1]
    return np.linalg.eigvals(comp)


def q_spectrum(params: CheParams, family: Family,
               condition: TerminationCondition, alpha0_choice=None) -> QSpectrum:
    """All N+1 accessory-parameter values terminating the series at N.

    The q field of params is ignored. Roots come from the companion matrix
    of a_{N+1}(q), then one Newton step (value from the recurrence,
    derivative from the polynomial), then a rebuild verification per root.
    """
    p0 = dataclasses.replace(params, q=0)
    violations = applicability(p0, family)
    if violations:
        raise ApplicabilityError(
            f"family {family.name} not applicable: {', '.join(violations)}")
    N = condition.N
    polys = _coefficient_polynomials(params, family, alpha0_choice, N + 1)
    target = polys[N + 1]
    if len(target) != N + 2:
        raise AssertionError(
            f"a_{N + 1}(q) has degree {len(target) - 1}, expected {N + 1}")
    roots = _companion_roots(target)
    dpoly = npoly.polyder(target)
    polished = []
    residuals = []
    for r in roots:
        fval = _a_next_via_recurrence(params, family, alpha0_choice, N, r)
        fder = npoly.polyval(r, dpoly)
        if abs(fder) > 1e-12 * max(1.0, abs(fval)):
            r = r - fval / fder  # one Newton step; multiple roots skip it
        fval = _a_next_via_recurrence(params, family, alpha0_choice, N, r)
        scale = max(abs(c) * max(1.0, abs(r)) ** k for k, c in enumerate(target))
        if abs(fval) > POLISH_TOL * scale:
            raise IllConditionedRootsError(
                f"polished root {r} leaves |a_{N + 1}| = {abs(fval):.3e} "
                f"above {POLISH_TOL:.0e} of the polynomial scale {scale:.3e}")
        polished.append(complex(r))
        residuals.append(abs(fval))
    verified = []
    for r in polished:
        sol = build_series(dataclasses.replace(params, q=r), family, N + 2,
                           alpha0_choice=alpha0_choice)
        verified.append(verify_termination(sol, N))
    order = sorted(range(len(polished)),
                   key=lambda i: (polished[i].real, polished[i].imag))
    return QSpectrum(condition=condition,
                     polynomial=tuple(complex(c) for c in target),
                     roots=tuple(polished[i] for i in order),
                     verified=tuple(verified[i] for i in order),
                     root_residuals=tuple(residuals[i] for i in order))


def verify_termination(sol: SeriesSolution, N: int) -> bool:
    """True iff the coefficients beyond index N are negligible.

    Requires at least N+2 built coefficients; checks a_{N+1} and a_{N+2}
    against 1e-9 of the largest coefficient up to N, and spot-checks any
    further built coefficients up to N+5.
    """
    a = sol.coefficients
    if len(a) < N + 3:
        raise ValueError(f"need at least {N + 3} coefficients, have {len(a)}")
    head = max(abs(a[n]) for n in range(N + 1))
    bound = VERIFY_TOL * head
    upto = min(N + 5, len(a) - 1)
    return all(abs(a[n]) <= bound for n in range(N + 1, upto + 1))


def terminated_solution(params: CheParams, family: Family,
                        condition: TerminationCondition,
                        alpha0_choice=None) -> SeriesSolution:
    """Build, verify, and truncate a series that terminates at condition.N.

    params.q must already be a spectrum root; ValueError otherwise.
    """
    N = condition.N
    sol = build_series(params, family, N + 5, alpha0_choice=alpha0_choice)
    if not verify_termination(sol, N):
        raise ValueError(
            f"series does not terminate at N={N} for q={params.q}; "
            f"is q a spectrum root?")
    return dataclasses.replace(sol, coefficients=sol.coefficients[:N + 1],
                               terminated=True, terminal_index=N)


def polynomial_certificate(sol: SeriesSolution, N: int) -> float:
    """Certify eval_series(sol, z) is a polynomial in z of degree <= N.

    Fits a degree-N polynomial through N+1 samples and returns the relative
    mismatch at a further sample point. Values <= 1e-9 certify; larger
    values deny (the solution genuinely is not a polynomial).
    """
    zs = np.linspace(0.05, 0.45, N + 1)
    vals = np.array([eval_series(sol, z)[0] for z in zs], dtype=complex)
    V = np.vander(zs, N + 1, increasing=True).astype(complex)
    coeffs = np.linalg.solve(V, vals)
    z_extra = 0.37 if N == 0 else 0.5 * (zs[0] + zs[1])
    actual = eval_series(sol, z_extra)[0]
    predicted = npoly.polyval(z_extra, coeffs)
    return abs(predicted - actual) / max(1.0, abs(actual))
