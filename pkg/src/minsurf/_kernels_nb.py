"""Numba builds of the hot evaluation kernels.

Scalar inner loops under @njit, arithmetic mirrored expression-for-
expression from _kernels_np so both backends produce identical values.
"""

import numpy as np
from numba import njit

__all__ = ["surface_points", "surface_jets", "points_and_first", "refine_pairs"]


@njit(cache=True)
def _pq_window_scalar(u, v, n):
    pn1 = 0.0
    qn1 = 0.0
    pn2 = 0.0
    qn2 = 0.0
    pn3 = 0.0
    qn3 = 0.0
    pn4 = 0.0
    qn4 = 0.0
    if n == 3:
        pn3 = 1.0
    elif n == 4:
        pn4 = 1.0
    p = 1.0
    q = 0.0
    for k in range(1, n + 1):
        pk = u * p - v * q
        qk = v * p + u * q
        p = pk
        q = qk
        off = n - k
        if off == 1:
            pn1 = p
            qn1 = q
        elif off == 2:
            pn2 = p
            qn2 = q
        elif off == 3:
            pn3 = p
            qn3 = q
        elif off == 4:
            pn4 = p
            qn4 = q
    return p, q, pn1, qn1, pn2, qn2, pn3, qn3, pn4, qn4


@njit(cache=True)
def surface_points(n, omega, zc, ct, st, u, v):
    m = u.shape[0]
    out = np.empty((m, 3))
    base = st == 0.0 and ct == 1.0
    conj = ct == 0.0 and st == 1.0
    for i in range(m):
        pn, qn, pn1, qn1, pn2, qn2, pn3, qn3, pn4, qn4 = _pq_window_scalar(
            u[i], v[i], n
        )
        x = omega * pn2 - pn
        y = qn + omega * qn2
        z = zc * pn1
        if base:
            out[i, 0] = x
            out[i, 1] = y
            out[i, 2] = z
            continue
        xs = omega * qn2 - qn
        ys = -(pn + omega * pn2)
        zs = zc * qn1
        if conj:
            out[i, 0] = xs
            out[i, 1] = ys
            out[i, 2] = zs
        else:
            out[i, 0] = ct * x + st * xs
            out[i, 1] = ct * y + st * ys
            out[i, 2] = ct * z + st * zs
    return out


@njit(cache=True)
def points_and_first(n, omega, zc, ct, st, u, v):
    m = u.shape[0]
    out = np.empty((m, 9))
    base = st == 0.0 and ct == 1.0
    conj = ct == 0.0 and st == 1.0
    a1 = float(n)
    a2 = omega * (n - 2)
    zc1 = zc * (n - 1)
    for i in range(m):
        pn, qn, pn1, qn1, pn2, qn2, pn3, qn3, pn4, qn4 = _pq_window_scalar(
            u[i], v[i], n
        )
        x = omega * pn2 - pn
        y = qn + omega * qn2
        z = zc * pn1
        xu = a2 * pn3 - a1 * pn1
        yu = a1 * qn1 + a2 * qn3
        zu = zc1 * pn2
        xv = a1 * qn1 - a2 * qn3
        yv = a1 * pn1 + a2 * pn3
        zv = -(zc1 * qn2)
        if base:
            out[i, 0] = x
            out[i, 1] = y
            out[i, 2] = z
            out[i, 3] = xu
            out[i, 4] = yu
            out[i, 5] = zu
            out[i, 6] = xv
            out[i, 7] = yv
            out[i, 8] = zv
            continue
        xs = omega * qn2 - qn
        ys = -(pn + omega * pn2)
        zs = zc * qn1
        xsu = a2 * qn3 - a1 * qn1
        ysu = -(a1 * pn1 + a2 * pn3)
        zsu = zc1 * qn2
        xsv = a2 * pn3 - a1 * pn1
        ysv = a1 * qn1 + a2 * qn3
        zsv = zc1 * pn2
        if conj:
            out[i, 0] = xs
            out[i, 1] = ys
            out[i, 2] = zs
            out[i, 3] = xsu
            out[i, 4] = ysu
            out[i, 5] = zsu
            out[i, 6] = xsv
            out[i, 7] = ysv
            out[i, 8] = zsv
        else:
            out[i, 0] = ct * x + st * xs
            out[i, 1] = ct * y + st * ys
            out[i, 2] = ct * z + st * zs
            out[i, 3] = ct * xu + st * xsu
            out[i, 4] = ct * yu + st * ysu
            out[i, 5] = ct * zu + st * zsu
            out[i, 6] = ct * xv + st * xsv
            out[i, 7] = ct * yv + st * ysv
            out[i, 8] = ct * zv + st * zsv
    return out


@njit(cache=True)
def surface_jets(n, omega, zc, ct, st, u, v):
    m = u.shape[0]
    out = np.empty((m, 18))
    base = st == 0.0 and ct == 1.0
    conj = ct == 0.0 and st == 1.0
    a1 = float(n)
    a2 = omega * (n - 2)
    b1 = float(n * (n - 1))
    b2 = omega * (n - 2) * (n - 3)
    zc1 = zc * (n - 1)
    zc2 = zc * (n - 1) * (n - 2)
    for i in range(m):
        pn, qn, pn1, qn1, pn2, qn2, pn3, qn3, pn4, qn4 = _pq_window_scalar(
            u[i], v[i], n
        )
        x = omega * pn2 - pn
        y = qn + omega * qn2
        z = zc * pn1
        xu = a2 * pn3 - a1 * pn1
        yu = a1 * qn1 + a2 * qn3
        zu = zc1 * pn2
        xv = a1 * qn1 - a2 * qn3
        yv = a1 * pn1 + a2 * pn3
        zv = -(zc1 * qn2)
        xuu = b2 * pn4 - b1 * pn2
        yuu = b1 * qn2 + b2 * qn4
        zuu = zc2 * pn3
        xuv = b1 * qn2 - b2 * qn4
        yuv = b1 * pn2 + b2 * pn4
        zuv = -(zc2 * qn3)
        if base:
            out[i, 0] = x
            out[i, 1] = y
            out[i, 2] = z
            out[i, 3] = xu
            out[i, 4] = yu
            out[i, 5] = zu
            out[i, 6] = xv
            out[i, 7] = yv
            out[i, 8] = zv
            out[i, 9] = xuu
            out[i, 10] = yuu
            out[i, 11] = zuu
            out[i, 12] = xuv
            out[i, 13] = yuv
            out[i, 14] = zuv
            out[i, 15] = -xuu
            out[i, 16] = -yuu
            out[i, 17] = -zuu
            continue
        xs = omega * qn2 - qn
        ys = -(pn + omega * pn2)
        zs = zc * qn1
        xsu = a2 * qn3 - a1 * qn1
        ysu = -(a1 * pn1 + a2 * pn3)
        zsu = zc1 * qn2
        xsv = a2 * pn3 - a1 * pn1
        ysv = a1 * qn1 + a2 * qn3
        zsv = zc1 * pn2
        xsuu = b2 * qn4 - b1 * qn2
        ysuu = -(b1 * pn2 + b2 * pn4)
        zsuu = zc2 * qn3
        xsuv = b2 * pn4 - b1 * pn2
        ysuv = b1 * qn2 + b2 * qn4
        zsuv = zc2 * pn3
        if conj:
            out[i, 0] = xs
            out[i, 1] = ys
            out[i, 2] = zs
            out[i, 3] = xsu
            out[i, 4] = ysu
            out[i, 5] = zsu
            out[i, 6] = xsv
            out[i, 7] = ysv
            out[i, 8] = zsv
            out[i, 9] = xsuu
            out[i, 10] = ysuu
            out[i, 11] = zsuu
            out[i, 12] = xsuv
            out[i, 13] = ysuv
            out[i, 14] = zsuv
            out[i, 15] = -xsuu
            out[i, 16] = -ysuu
            out[i, 17] = -zsuu
        else:
            fuu = ct * xuu + st * xsuu
            guu = ct * yuu + st * ysuu
            huu = ct * zuu + st * zsuu
            out[i, 0] = ct * x + st * xs
            out[i, 1] = ct * y + st * ys
            out[i, 2] = ct * z + st * zs
            out[i, 3] = ct * xu + st * xsu
            out[i, 4] = ct * yu + st * ysu
            out[i, 5] = ct * zu + st * zsu
            out[i, 6] = ct * xv + st * xsv
            out[i, 7] = ct * yv + st * ysv
            out[i, 8] = ct * zv + st * zsv
            out[i, 9] = fuu
            out[i, 10] = guu
            out[i, 11] = huu
            out[i, 12] = ct * xuv + st * xsuv
            out[i, 13] = ct * yuv + st * ysuv
            out[i, 14] = ct * zuv + st * zsuv
            out[i, 15] = -fuu
            out[i, 16] = -guu
            out[i, 17] = -huu
    return out


@njit(cache=True)
def _first_scalar(n, omega, zc, ct, st, u, v):
    """Position and first partials at one point (9 floats)."""
    pn, qn, pn1, qn1, pn2, qn2, pn3, qn3, pn4, qn4 = _pq_window_scalar(u, v, n)
    a1 = float(n)
    a2 = omega * (n - 2)
    zc1 = zc * (n - 1)
    x = omega * pn2 - pn
    y = qn + omega * qn2
    z = zc * pn1
    xu = a2 * pn3 - a1 * pn1
    yu = a1 * qn1 + a2 * qn3
    zu = zc1 * pn2
    xv = a1 * qn1 - a2 * qn3
    yv = a1 * pn1 + a2 * pn3
    zv = -(zc1 * qn2)
    if st == 0.0 and ct == 1.0:
        return x, y, z, xu, yu, zu, xv, yv, zv
    xs = omega * qn2 - qn
    ys = -(pn + omega * pn2)
    zs = zc * qn1
    xsu = a2 * qn3 - a1 * qn1
    ysu = -(a1 * pn1 + a2 * pn3)
    zsu = zc1 * qn2
    xsv = a2 * pn3 - a1 * pn1
    ysv = a1 * qn1 + a2 * qn3
    zsv = zc1 * pn2
    if ct == 0.0 and st == 1.0:
        return xs, ys, zs, xsu, ysu, zsu, xsv, ysv, zsv
    return (
        ct * x + st * xs,
        ct * y + st * ys,
        ct * z + st * zs,
        ct * xu + st * xsu,
        ct * yu + st * ysu,
        ct * zu + st * zsu,
        ct * xv + st * xsv,
        ct * yv + st * ysv,
        ct * zv + st * zsv,
    )


@njit(cache=True)
def refine_pairs(n, omega, zc, ct, st, ua, va, ub, vb,
                 max_iter=50, alpha_floor=1e-8):
    m = ua.shape[0]
    rua = ua.copy()
    rva = va.copy()
    rub = ub.copy()
    rvb = vb.copy()
    sep = np.empty(m)
    for idx in range(m):
        cua = rua[idx]
        cva = rva[idx]
        cub = rub[idx]
        cvb = rvb[idx]
        ax, ay, az, axu, ayu, azu, axv, ayv, azv = _first_scalar(
            n, omega, zc, ct, st, cua, cva
        )
        bx, by, bz, bxu, byu, bzu, bxv, byv, bzv = _first_scalar(
            n, omega, zc, ct, st, cub, cvb
        )
        e0 = ax - bx
        e1 = ay - by
        e2 = az - bz
        f2 = e0 * e0 + e1 * e1 + e2 * e2
        for _ in range(max_iter):
            posmag = max(abs(ax), abs(ay), abs(az), abs(bx), abs(by), abs(bz))
            ctol = 1e-13 * (1.0 + posmag)
            if f2 <= ctol * ctol:
                break
            # J columns: [r_u(a), r_v(a), -r_u(b), -r_v(b)]
            a00 = axu * axu + ayu * ayu + azu * azu
            a10 = axv * axu + ayv * ayu + azv * azu
            a11 = axv * axv + ayv * ayv + azv * azv
            a20 = -(bxu * axu + byu * ayu + bzu * azu)
            a21 = -(bxu * axv + byu * ayv + bzu * azv)
            a22 = bxu * bxu + byu * byu + bzu * bzu
            a30 = -(bxv * axu + byv * ayu + bzv * azu)
            a31 = -(bxv * axv + byv * ayv + bzv * azv)
            a32 = bxv * bxu + byv * byu + bzv * bzu
            a33 = bxv * bxv + byv * byv + bzv * bzv
            g0 = axu * e0 + ayu * e1 + azu * e2
            g1 = axv * e0 + ayv * e1 + azv * e2
            g2 = -(bxu * e0 + byu * e1 + bzu * e2)
            g3 = -(bxv * e0 + byv * e1 + bzv * e2)
            lam = 1e-12 * max(a00, a11, a22, a33)
            if not lam > 0.0:
                lam = 1e-300
            l00 = np.sqrt(a00 + lam)
            l10 = a10 / l00
            l20 = a20 / l00
            l30 = a30 / l00
            l11 = np.sqrt(a11 + lam - l10 * l10)
            l21 = (a21 - l20 * l10) / l11
            l31 = (a31 - l30 * l10) / l11
            l22 = np.sqrt(a22 + lam - l20 * l20 - l21 * l21)
            l32 = (a32 - l30 * l20 - l31 * l21) / l22
            l33 = np.sqrt(a33 + lam - l30 * l30 - l31 * l31 - l32 * l32)
            y0 = -g0 / l00
            y1 = (-g1 - l10 * y0) / l11
            y2 = (-g2 - l20 * y0 - l21 * y1) / l22
            y3 = (-g3 - l30 * y0 - l31 * y1 - l32 * y2) / l33
            d3 = y3 / l33
            d2 = (y2 - l32 * d3) / l22
            d1 = (y1 - l21 * d2 - l31 * d3) / l11
            d0 = (y0 - l10 * d1 - l20 * d2 - l30 * d3) / l00

            alpha = 1.0
            accepted = False
            while alpha >= alpha_floor:
                tua = cua + alpha * d0
                tva = cva + alpha * d1
                tub = cub + alpha * d2
                tvb = cvb + alpha * d3
                tax, tay, taz, taxu, tayu, tazu, taxv, tayv, tazv = _first_scalar(
                    n, omega, zc, ct, st, tua, tva
                )
                tbx, tby, tbz, tbxu, tbyu, tbzu, tbxv, tbyv, tbzv = _first_scalar(
                    n, omega, zc, ct, st, tub, tvb
                )
                te0 = tax - tbx
                te1 = tay - tby
                te2 = taz - tbz
                tf2 = te0 * te0 + te1 * te1 + te2 * te2
                if tf2 < f2:
                    cua, cva, cub, cvb = tua, tva, tub, tvb
                    ax, ay, az = tax, tay, taz
                    axu, ayu, azu = taxu, tayu, tazu
                    axv, ayv, azv = taxv, tayv, tazv
                    bx, by, bz = tbx, tby, tbz
                    bxu, byu, bzu = tbxu, tbyu, tbzu
                    bxv, byv, bzv = tbxv, tbyv, tbzv
                    e0, e1, e2 = te0, te1, te2
                    f2 = tf2
                    accepted = True
                    break
                alpha *= 0.5
            if not accepted:
                break
        rua[idx] = cua
        rva[idx] = cva
        rub[idx] = cub
        rvb[idx] = cvb
        sep[idx] = np.sqrt(f2)
    return rua, rva, rub, rvb, sep
