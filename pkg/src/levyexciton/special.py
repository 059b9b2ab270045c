"""Self-contained special functions for the analytic layer.

Provides the Riemann zeta function (s > 1), the polylogarithm on the unit
circle Li_beta(e^{iq}), the gamma function, the -1 branch of the Lambert W
function, and the Dawson integral at complex argument. Complex values are
plain Python/NumPy ``complex``.

Tolerances are contracts: zeta and gamma to 1e-12, polylog to 1e-10 absolute,
Dawson to 1e-9 inside the documented stability radius. Internal targets aim
one decade tighter.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "riemann_zeta",
    "polylog_circle",
    "gamma_fn",
    "lambert_w_m1",
    "dawson",
    "DAWSON_STABILITY_RADIUS",
]

# Bernoulli numbers B_2..B_26 (even index), exact rationals evaluated in double.
_BERN_EVEN = np.array(
    [
        1.0 / 6,
        -1.0 / 30,
        1.0 / 42,
        -1.0 / 30,
        5.0 / 66,
        -691.0 / 2730,
        7.0 / 6,
        -3617.0 / 510,
        43867.0 / 798,
        -174611.0 / 330,
        854513.0 / 138,
        -236364091.0 / 2730,
        8553103.0 / 6,
    ]
)


def riemann_zeta(s: float) -> float:
    """zeta(s) for s > 1 by Euler-Maclaurin summation.

    The correction series is truncated once the term magnitude certifies an
    absolute error below 1e-13; for s > 55 three series terms already reach
    full double precision.
    """
    s = float(s)
    if s <= 1:
        raise ValueError(f"zeta is summed only for s > 1, got {s}")
    if s > 55:
        return 1.0 + 2.0**-s + 3.0**-s
    n = 24
    k = np.arange(1, n, dtype=float)
    out = float(np.sum(k**-s)) + n ** (1.0 - s) / (s - 1.0) + 0.5 * n**-s
    poch = s
    for i in range(1, len(_BERN_EVEN) + 1):
        term = _BERN_EVEN[i - 1] / math.factorial(2 * i) * poch * n ** (-s - 2 * i + 1)
        out += term
        if abs(term) < 1e-17:
            break
        poch *= (s + 2 * i - 1) * (s + 2 * i)
    return out


def _eta(s: float) -> float:
    """Dirichlet eta for s > 0 via iterated averaging of partial sums."""
    k = np.arange(1, 60, dtype=float)
    partial = np.cumsum((-1.0) ** (k + 1) * k**-s)
    row = partial[-30:]
    for _ in range(29):
        row = 0.5 * (row[:-1] + row[1:])
    return float(row[0])


def _zeta_any(s: float) -> float:
    """zeta on the real line away from s = 1 (internal helper).

    The public contract of :func:`riemann_zeta` stays s > 1; values at and
    below 1 are needed only inside the small-q polylog expansion.
    """
    s = float(s)
    if s > 1:
        return riemann_zeta(s)
    if s == 1:
        raise ValueError("zeta has a pole at s = 1")
    if s == 0:
        return -0.5
    if s > 0:
        return _eta(s) / (1.0 - 2.0 ** (1.0 - s))
    # reflection into the convergent half-plane
    return (
        2.0**s * math.pi ** (s - 1.0) * math.sin(math.pi * s / 2.0) * gamma_fn(1.0 - s) * _zeta_any(1.0 - s)
    )


def gamma_fn(x: float) -> float:
    """Gamma function on the real line away from the poles 0, -1, -2, ..."""
    x = float(x)
    if x <= 0 and x == round(x):
        raise ValueError(f"gamma has a pole at {x}")
    return math.gamma(x)


# -- polylogarithm on the unit circle ------------------------------------------


def _polylog_small_q(beta: float, q: float, n_terms: int = 30) -> complex:
    """Convergent expansion of Li_beta(e^{iq}) about q = 0 (|q| < 2 pi).

    Non-integer beta uses the singular term Gamma(1-beta) (-iq)^(beta-1) plus
    the zeta Taylor series; integer beta replaces the colliding term by the
    harmonic-logarithmic one.
    """
    iq = 1j * q
    nearest = round(beta)
    if abs(beta - nearest) > 1e-9:
        out = gamma_fn(1.0 - beta) * (-iq) ** (beta - 1.0)
        fac = 1.0 + 0.0j
        for j in range(n_terms):
            if j > 0:
                fac *= iq / j
            out += _zeta_any(beta - j) * fac
        return out
    n = int(nearest)
    harm = sum(1.0 / i for i in range(1, n))
    out = iq ** (n - 1) / math.factorial(n - 1) * (harm - np.log(-iq))
    fac = 1.0 + 0.0j
    for j in range(n_terms):
        if j > 0:
            fac *= iq / j
        if j == n - 1:
            continue
        out += _zeta_any(n - j) * fac
    return out


def _polylog_series_abel(beta: float, q: float, tol: float = 1e-12) -> complex:
    """Direct series with an iterated summation-by-parts tail (|q| >= ~0.5).

    The head is summed to K chosen so the certified tail bound
    (beta)_(m-1) K^(1-beta-m) / |1-z|^m drops below ``tol``.
    """
    z = np.exp(1j * q)
    one_minus = 1.0 - z
    az = abs(one_minus)
    m = 12
    poch = 1.0
    for i in range(m - 1):
        poch *= beta + i
    K = int(max(48, (poch / (tol * az**m)) ** (1.0 / (beta + m - 1)))) + 1
    k = np.arange(1, K + 1, dtype=float)
    head = complex(np.sum(np.exp(1j * q * k) * k**-beta))
    c = (K + 1 + np.arange(0, m + 1, dtype=float)) ** -beta
    diffs = [c]
    for _ in range(m - 1):
        prev = diffs[-1]
        diffs.append(prev[:-1] - prev[1:])
    tail = 0.0 + 0.0j
    fac = 1.0 / one_minus
    for j in range(m):
        tail += diffs[j][0] * fac
        fac *= -z / one_minus
    return head + tail * np.exp(1j * q * (K + 1))


def polylog_circle(beta: float, q: float) -> complex:
    """Li_beta(e^{iq}) for q in (-pi, pi].

    At q = 0 the series is zeta(beta) and requires beta > 1; elsewhere any
    beta > 0 is admitted. Absolute accuracy 1e-10 or better.
    """
    beta = float(beta)
    q = float(q)
    if beta <= 0:
        raise ValueError(f"polylog order must be positive, got {beta}")
    q = (q + math.pi) % (2.0 * math.pi) - math.pi
    if q == -math.pi:  # reduction maps the endpoint to -pi; the domain keeps +pi
        q = math.pi
    if q == 0.0:
        if beta <= 1:
            raise ValueError("Li_beta(1) diverges for beta <= 1")
        return complex(riemann_zeta(beta), 0.0)
    if q < 0:
        return polylog_circle(beta, -q).conjugate()
    if q < 0.5:
        return _polylog_small_q(beta, q)
    return _polylog_series_abel(beta, q)


# -- Lambert W, branch -1 -------------------------------------------------------


def lambert_w_m1(y: float) -> float:
    """W_{-1}(y) for y in [-1/e, 0): the w <= -1 root of w e^w = y.

    Residual |w e^w - y| <= 1e-12 (Halley refinement from a branch-point or
    logarithmic initial guess).
    """
    y = float(y)
    ylo = -1.0 / math.e
    if not ylo <= y < 0:
        raise ValueError(f"W_-1 domain is [-1/e, 0), got {y}")
    p2 = 2.0 * (1.0 + math.e * y)
    if p2 <= 0.0:
        return -1.0
    if p2 < 2e-2:
        p = math.sqrt(p2)
        w = -1.0 - p - p2 / 6.0 - 11.0 * p * p2 / 72.0
    else:
        L1 = math.log(-y)
        L2 = math.log(-L1)
        w = L1 - L2 + L2 / L1
    for _ in range(60):
        ew = math.exp(w)
        f = w * ew - y
        if f == 0.0:
            break
        wp1 = w + 1.0
        dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= dw
        if abs(dw) < 1e-15 * max(1.0, abs(w)):
            break
    if abs(w * math.exp(w) - y) > 1e-12:
        raise ArithmeticError(f"Lambert W_-1 failed to converge at y={y}")
    return w


# -- Dawson integral at complex argument ----------------------------------------

DAWSON_STABILITY_RADIUS = 25.0


def _weideman_coeffs(n: int = 64):
    m = 2 * n
    k = np.arange(-m + 1, m)
    L = math.sqrt(n / math.sqrt(2.0))
    t = L * np.tan(k * math.pi / (2 * m))
    f = np.exp(-t * t) * (L * L + t * t)
    f = np.concatenate(([0.0], f))
    a = np.real(np.fft.fft(np.fft.fftshift(f))) / (2 * m)
    return L, a[1 : n + 1][::-1]


_WEIDEMAN_L, _WEIDEMAN_A = _weideman_coeffs()


def _faddeeva_upper(z):
    """w(z) = e^{-z^2} erfc(-iz) for Im z >= 0 (rational approximation)."""
    z = np.asarray(z, dtype=complex)
    iz = 1j * z
    Z = (_WEIDEMAN_L + iz) / (_WEIDEMAN_L - iz)
    p = np.polyval(_WEIDEMAN_A, Z)
    return 2.0 * p / (_WEIDEMAN_L - iz) ** 2 + (1.0 / math.sqrt(math.pi)) / (_WEIDEMAN_L - iz)


def _dawson_taylor(z: complex) -> complex:
    term = z
    total = z
    zz = z * z
    for n in range(1, 200):
        term *= -2.0 * zz / (2 * n + 1)
        total += term
        if abs(term) <= 1e-18 * max(1.0, abs(total)):
            break
    return total


def dawson(z) -> complex:
    """Dawson integral D(z) = e^{-z^2} int_0^z e^{u^2} du.

    Odd in z; accurate to better than 1e-9 (relative for large values) inside
    the stability radius |z| <= 25. Larger arguments are refused: the caller
    is expected to switch to the asymptotic tail instead.
    """
    z = complex(z)
    if abs(z) > DAWSON_STABILITY_RADIUS:
        raise ValueError(
            f"|z| = {abs(z):.3g} outside the Dawson stability radius "
            f"{DAWSON_STABILITY_RADIUS}; use the asymptotic form"
        )
    sign = 1.0
    if z.real < 0:
        z, sign = -z, -sign
    conj = False
    if z.imag < 0:
        z, conj = z.conjugate(), True
    if abs(z) <= 3.0:
        out = _dawson_taylor(z)
    else:
        out = complex(0.5j * math.sqrt(math.pi) * (np.exp(-z * z) - _faddeeva_upper(z)))
    if conj:
        out = out.conjugate()
    return sign * out


# -- incomplete gamma (internal; used by the lattice sums) ----------------------


def _upper_gamma_cf(a: float, x: float, tol: float = 1e-16, itmax: int = 400) -> float:
    """Gamma(a, x) for x > 0 and real a by the Lentz continued fraction."""
    if x <= 0:
        raise ValueError("continued fraction needs x > 0")
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b if b != 0 else 1.0 / tiny
    h = d
    for i in range(1, itmax):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < tol:
            break
    return math.exp(-x + a * math.log(x)) * h
