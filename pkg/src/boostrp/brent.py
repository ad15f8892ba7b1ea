"""Bounded scalar minimization (Brent's combined golden-section / parabolic method)."""

import math

from .errors import ConvergenceError

_GOLDEN = 0.5 * (3.0 - math.sqrt(5.0))
_SQRT_EPS = math.sqrt(2.220446049250313e-16)


def brent_minimize(objective, bracket, tol=1e-8, max_iter=100):
    """Minimize ``objective`` on the closed interval ``bracket = (lo, hi)``.

    Interior search follows Brent's ``localmin``; the two endpoints are
    checked at the end so that monotone objectives return the boundary.
    Raises :class:`ConvergenceError` after ``max_iter`` iterations.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not tol > 0:
        raise ValueError("tol must be positive")
    if hi < lo:
        lo, hi = hi, lo
    if hi == lo:
        return lo

    a, b = lo, hi
    x = w = v = a + _GOLDEN * (b - a)
    fx = fw = fv = objective(x)
    d = e = 0.0
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        tol1 = _SQRT_EPS * abs(x) + tol / 3.0
        tol2 = 2.0 * tol1
        if abs(x - m) <= tol2 - 0.5 * (b - a):
            break
        golden = True
        if abs(e) > tol1:
            r = (x - w) * (fx - fv)
            q = (x - v) * (fx - fw)
            p = (x - v) * q - (x - w) * r
            q = 2.0 * (q - r)
            if q > 0.0:
                p = -p
            else:
                q = -q
            r, e = e, d
            if abs(p) < abs(0.5 * q * r) and q * (a - x) < p < q * (b - x):
                d = p / q
                u = x + d
                if u - a < tol2 or b - u < tol2:
                    d = tol1 if x < m else -tol1
                golden = False
        if golden:
            e = (b - x) if x < m else (a - x)
            d = _GOLDEN * e
        u = x + (d if abs(d) >= tol1 else math.copysign(tol1, d))
        fu = objective(u)
        if fu <= fx:
            if u < x:
                b = x
            else:
                a = x
            v, fv, w, fw, x, fx = w, fw, x, fx, u, fu
        else:
            if u < x:
                a = u
            else:
                b = u
            if fu <= fw or w == x:
                v, fv, w, fw = w, fw, u, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu
    else:
        raise ConvergenceError(f"Brent search did not converge in {max_iter} iterations")

    # A tie with the nearer endpoint means the objective is flat all the way
    # there (typically an underflowed tail), so take the boundary.
    best, fbest = x, fx
    near, far = (lo, hi) if x - lo <= hi - x else (hi, lo)
    fe = objective(near)
    if fe <= fbest:
        best, fbest = near, fe
    fe = objective(far)
    if fe < fbest:
        best, fbest = far, fe
    return best
