"""Fresnel integrals C(x) and S(x) with kernel cos/sin(pi t^2 / 2).

Small arguments use the power series of the complex integral
``int_0^x exp(i pi t^2 / 2) dt``.  Large arguments go through the auxiliary
functions, evaluated by a modified-Lentz continued fraction of the
complementary error function; the plain asymptotic series of f and g is
divergent and cannot reach 1e-10 just above the switch point.
"""

from __future__ import annotations

import numpy as np

X_SWITCH = 1.5
_EPS = 1e-16
_TINY = 1e-300
_MAX_TERMS = 200


def _series(x: np.ndarray) -> np.ndarray:
    # sum_k x (i pi x^2 / 2)^k / (k! (2k + 1))
    z = 0.5j * np.pi * x * x
    term = x.astype(complex)
    total = term.copy()
    for k in range(1, _MAX_TERMS):
        term = term * z / k
        inc = term / (2 * k + 1)
        total += inc
        if np.all(np.abs(inc) <= _EPS * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def _continued_fraction(x: np.ndarray) -> np.ndarray:
    pix2 = np.pi * x * x
    b = 1.0 - 1j * pix2
    cc = np.full(x.shape, 1.0 / _TINY, dtype=complex)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    n = -1
    for _ in range(2, 10_000):
        n += 2
        a = -n * (n + 1.0)
        b = b + 4.0
        d = 1.0 / (a * d + b)
        cc = b + a / cc
        delta = cc * d
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1.0) >= _EPS
        if not active.any():
            break
    else:  # pragma: no cover
        raise RuntimeError("Fresnel continued fraction failed to converge")
    h = (x - 1j * x) * h
    phase = np.cos(0.5 * pix2) + 1j * np.sin(0.5 * pix2)
    return (0.5 + 0.5j) * (1.0 - phase * h)


def fresnel_cs(x):
    """Return ``(C(x), S(x))``; scalars in, scalars out."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("Fresnel integrals need finite arguments")
    ax = np.abs(x)
    out = np.empty(x.shape, dtype=complex)
    small = ax <= X_SWITCH
    if small.any():
        out[small] = _series(ax[small])
    if (~small).any():
        out[~small] = _continued_fraction(ax[~small])
    out *= np.sign(x)
    return out.real[()], out.imag[()]


def fresnel_c(x):
    """C(x) = int_0^x cos(pi t^2 / 2) dt."""
    return fresnel_cs(x)[0]


def fresnel_s(x):
    """S(x) = int_0^x sin(pi t^2 / 2) dt."""
    return fresnel_cs(x)[1]
