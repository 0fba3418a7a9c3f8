# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-pixel kernels; each loop mirrors _kernels.pure expression for
expression so the two backends return identical arrays."""
from libc.math cimport fabs, fmax, fmin, sqrt

import numpy as np

NAME = "cython"


cdef inline Py_ssize_t _prev(Py_ssize_t i, Py_ssize_t n, bint periodic) noexcept nogil:
    if i > 0:
        return i - 1
    return n - 1 if periodic else 0


cdef inline Py_ssize_t _next(Py_ssize_t i, Py_ssize_t n, bint periodic) noexcept nogil:
    if i < n - 1:
        return i + 1
    return 0 if periodic else n - 1


def upwind_norm(double[:, ::1] phi, int sign, double dx, double dy, bint periodic):
    cdef Py_ssize_t h = phi.shape[0], w = phi.shape[1]
    out_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, im, ip, jm, jp
    cdef double c, dxp, dxm, dyp, dym, t0, t1, t2, t3, sq
    with nogil:
        for i in range(h):
            im = _prev(i, h, periodic)
            ip = _next(i, h, periodic)
            for j in range(w):
                jm = _prev(j, w, periodic)
                jp = _next(j, w, periodic)
                c = phi[i, j]
                dxp = (phi[i, jp] - c) / dx
                dxm = (c - phi[i, jm]) / dx
                dyp = (phi[ip, j] - c) / dy
                dym = (c - phi[im, j]) / dy
                if sign > 0:
                    t0 = fmax(dxp, 0.0)
                    t1 = fmin(dxm, 0.0)
                    t2 = fmax(dyp, 0.0)
                    t3 = fmin(dym, 0.0)
                else:
                    t0 = fmin(dxp, 0.0)
                    t1 = fmax(dxm, 0.0)
                    t2 = fmin(dyp, 0.0)
                    t3 = fmax(dym, 0.0)
                sq = t0 * t0 + t1 * t1 + t2 * t2 + t3 * t3
                out[i, j] = sqrt(sq)
    return out_arr


def grad_norm(double[:, ::1] phi, double dx, double dy, bint periodic):
    cdef Py_ssize_t h = phi.shape[0], w = phi.shape[1]
    out_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, im, ip, jm, jp
    cdef double fx, fy, tdx = 2.0 * dx, tdy = 2.0 * dy
    with nogil:
        for i in range(h):
            im = _prev(i, h, periodic)
            ip = _next(i, h, periodic)
            for j in range(w):
                jm = _prev(j, w, periodic)
                jp = _next(j, w, periodic)
                fx = (phi[i, jp] - phi[i, jm]) / tdx
                fy = (phi[ip, j] - phi[im, j]) / tdy
                out[i, j] = sqrt(fx * fx + fy * fy)
    return out_arr


def curvature(double[:, ::1] phi, double dx, double dy, double eps,
              double band, bint periodic):
    cdef Py_ssize_t h = phi.shape[0], w = phi.shape[1]
    out_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, im, ip, jm, jp
    cdef double c, fx, fy, fxx, fyy, fxy, g2, denom, num
    cdef double tdx = 2.0 * dx, tdy = 2.0 * dy, dx2 = dx * dx, dy2 = dy * dy
    with nogil:
        for i in range(h):
            im = _prev(i, h, periodic)
            ip = _next(i, h, periodic)
            for j in range(w):
                c = phi[i, j]
                if not fabs(c) < band:
                    out[i, j] = 0.0
                    continue
                jm = _prev(j, w, periodic)
                jp = _next(j, w, periodic)
                fx = (phi[i, jp] - phi[i, jm]) / tdx
                fy = (phi[ip, j] - phi[im, j]) / tdy
                fxx = (phi[i, jp] - 2.0 * c + phi[i, jm]) / dx2
                fyy = (phi[ip, j] - 2.0 * c + phi[im, j]) / dy2
                # y-central difference of the x-central difference
                fxy = ((phi[ip, jp] - phi[ip, jm]) / tdx
                       - (phi[im, jp] - phi[im, jm]) / tdx) / tdy
                g2 = fx * fx + fy * fy
                denom = fmax(g2, eps)
                num = fxx * fy * fy - 2.0 * fx * fy * fxy + fyy * fx * fx
                out[i, j] = -num / (denom * sqrt(denom))
    return out_arr


def sussman_sweep(double[:, ::1] phi, double dt,
                  double dx, double dy, bint periodic):
    cdef Py_ssize_t h = phi.shape[0], w = phi.shape[1]
    out_arr = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, im, ip, jm, jp
    cdef double c, s, dxp, dxm, dyp, dym, t0, t1, t2, t3, norm
    with nogil:
        for i in range(h):
            im = _prev(i, h, periodic)
            ip = _next(i, h, periodic)
            for j in range(w):
                jm = _prev(j, w, periodic)
                jp = _next(j, w, periodic)
                c = phi[i, j]
                s = c / sqrt(c * c + dx * dx)
                dxp = (phi[i, jp] - c) / dx
                dxm = (c - phi[i, jm]) / dx
                dyp = (phi[ip, j] - c) / dy
                dym = (c - phi[im, j]) / dy
                if s >= 0.0:
                    t0 = fmin(dxp, 0.0)
                    t1 = fmax(dxm, 0.0)
                    t2 = fmin(dyp, 0.0)
                    t3 = fmax(dym, 0.0)
                else:
                    t0 = fmax(dxp, 0.0)
                    t1 = fmin(dxm, 0.0)
                    t2 = fmax(dyp, 0.0)
                    t3 = fmin(dym, 0.0)
                norm = sqrt(t0 * t0 + t1 * t1 + t2 * t2 + t3 * t3)
                out[i, j] = c + dt * s * (1.0 - norm)
    return out_arr
