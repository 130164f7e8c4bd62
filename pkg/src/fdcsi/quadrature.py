"""Adaptive integration over [0, inf) for exponentially decaying integrands.

The substitution ``x = -s * ln(u)`` maps ``[0, inf)`` onto ``(0, 1]`` and
turns a weight ``exp(-x / s)`` into a constant, so integrands of the form
``g(x) * exp(-x / s)`` with slowly varying ``g`` become smooth on the unit
interval.  The transformed integral is then computed by globally adaptive
bisection with a 15-point Gauss-Legendre panel rule.
"""

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

MAX_EVALUATIONS = 1_000_000

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(15)


@dataclass(frozen=True)
class IntegrationResult:
    value: float
    error_estimate: float
    evaluations: int


def _panel(h, lo, hi):
    half = 0.5 * (hi - lo)
    u = lo + half * (_NODES + 1.0)
    return half * float(np.dot(_WEIGHTS, h(u)))


def _adaptive(h, lo, hi, abs_tol, rel_tol, counter):
    """Globally adaptive bisection of ``int_lo^hi h``.

    ``counter`` is a one-element list tracking integrand evaluations.
    """

    def refine(a, b, coarse):
        # a panel's error is the change between its own single-panel value
        # and the sum over its two halves
        mid = 0.5 * (a + b)
        left, right = _panel(h, a, mid), _panel(h, mid, b)
        fine = left + right
        return (-abs(coarse - fine), a, b, fine, left, right)

    heap = [refine(lo, hi, _panel(h, lo, hi))]
    total, err_total = heap[0][3], -heap[0][0]
    while True:
        if err_total <= max(abs_tol, rel_tol * abs(total)):
            # confirm with exact sums; running sums drift with round-off
            total = math.fsum(item[3] for item in heap)
            err_total = math.fsum(-item[0] for item in heap)
            if err_total <= max(abs_tol, rel_tol * abs(total)):
                break
        if counter[0] >= MAX_EVALUATIONS:
            raise ConvergenceError(
                f"tolerance not reached after {counter[0]} evaluations "
                f"(error estimate {err_total:.3g})",
                best_estimate=total,
            )
        neg_err, a, b, fine, left, right = heapq.heappop(heap)
        total -= fine
        err_total += neg_err
        mid = 0.5 * (a + b)
        for child in (refine(a, mid, left), refine(mid, b, right)):
            heapq.heappush(heap, child)
            total += child[3]
            err_total -= child[0]

    return IntegrationResult(value=total, error_estimate=err_total, evaluations=counter[0])


def _checked(fn, counter, transform):
    def h(u):
        counter[0] += u.size
        vals = transform(u, fn)
        if not np.all(np.isfinite(vals)):
            raise DomainError("integrand returned a non-finite value")
        return vals

    return h


def _check_tolerances(abs_tol, rel_tol):
    if not (abs_tol > 0 and rel_tol > 0):
        raise DomainError("tolerances must be positive")


def integrate_semi_infinite(f, decay_scale, abs_tol=1e-10, rel_tol=1e-8, *, vectorized=True):
    """Integrate ``f`` over ``[0, inf)``.

    ``f`` must decay at least like ``exp(-x / decay_scale)``.  With
    ``vectorized=True`` it is called with 1-D arrays of abscissae.

    Raises ``ConvergenceError`` (carrying the best estimate) if the
    tolerance ``max(abs_tol, rel_tol * |value|)`` is not met within
    ``MAX_EVALUATIONS`` integrand samples, and ``DomainError`` when the
    integrand returns a non-finite value.
    """
    if not decay_scale > 0:
        raise DomainError("decay_scale must be positive")
    _check_tolerances(abs_tol, rel_tol)
    s = float(decay_scale)
    fn = f if vectorized else np.vectorize(f, otypes=[float])
    counter = [0]

    def transform(u, fn):
        return np.asarray(fn(-s * np.log(u)), dtype=float) * (s / u)

    # Gauss nodes are interior, so u = 0 (x = inf) is never sampled.
    return _adaptive(_checked(fn, counter, transform), 0.0, 1.0, abs_tol, rel_tol, counter)


def integrate_interval(f, lo, hi, abs_tol=1e-10, rel_tol=1e-8, *, vectorized=True):
    """Integrate ``f`` over the finite interval ``[lo, hi]``."""
    if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
        raise DomainError("need finite lo <= hi")
    _check_tolerances(abs_tol, rel_tol)
    if lo == hi:
        return IntegrationResult(0.0, 0.0, 1)
    fn = f if vectorized else np.vectorize(f, otypes=[float])
    counter = [0]

    def transform(x, fn):
        return np.asarray(fn(x), dtype=float)

    return _adaptive(_checked(fn, counter, transform), float(lo), float(hi), abs_tol, rel_tol, counter)
