"""Pure-numpy builds of the hot evaluation kernels.

Same arithmetic, in the same order, as the numba twins in _kernels_nb;
only the loop driving differs. Every kernel takes the degree n, the
shape parameter omega, the cached height coefficient zc, and a phase
blend (ct, st): (1, 0) selects the base surface, (0, 1) its conjugate,
anything else the cos/sin mix of the two.
"""

import numpy as np

__all__ = ["surface_points", "surface_jets", "points_and_first", "refine_pairs"]


def _pq_window(u, v, n):
    """P_k, Q_k at degrees n .. n-4 (absent degrees stay zero arrays)."""
    one = np.ones_like(u)
    zero = np.zeros_like(u)
    wp = [zero, zero, zero, zero, zero]
    wq = [zero, zero, zero, zero, zero]
    if n <= 4:
        wp[n] = one  # the degree-0 seed lands inside the window
    p, q = one, zero
    for k in range(1, n + 1):
        p, q = u * p - v * q, v * p + u * q
        off = n - k
        if off <= 4:
            wp[off] = p
            wq[off] = q
    return wp[0], wq[0], wp[1], wq[1], wp[2], wq[2], wp[3], wq[3], wp[4], wq[4]


def surface_points(n, omega, zc, ct, st, u, v):
    """Positions of the selected surface, shape (m, 3)."""
    pn, qn, pn1, qn1, pn2, qn2, _, _, _, _ = _pq_window(u, v, n)
    x = omega * pn2 - pn
    y = qn + omega * qn2
    z = zc * pn1
    if st == 0.0 and ct == 1.0:
        return np.stack((x, y, z), axis=1)
    xs = omega * qn2 - qn
    ys = -(pn + omega * pn2)
    zs = zc * qn1
    if ct == 0.0 and st == 1.0:
        return np.stack((xs, ys, zs), axis=1)
    return np.stack(
        (ct * x + st * xs, ct * y + st * ys, ct * z + st * zs), axis=1
    )


def points_and_first(n, omega, zc, ct, st, u, v):
    """Position and first partials, columns (x y z | xu yu zu | xv yv zv)."""
    pn, qn, pn1, qn1, pn2, qn2, pn3, qn3, _, _ = _pq_window(u, v, n)
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
        return np.stack((x, y, z, xu, yu, zu, xv, yv, zv), axis=1)

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
        return np.stack((xs, ys, zs, xsu, ysu, zsu, xsv, ysv, zsv), axis=1)

    return np.stack(
        (
            ct * x + st * xs,
            ct * y + st * ys,
            ct * z + st * zs,
            ct * xu + st * xsu,
            ct * yu + st * ysu,
            ct * zu + st * zsu,
            ct * xv + st * xsv,
            ct * yv + st * ysv,
            ct * zv + st * zsv,
        ),
        axis=1,
    )


def surface_jets(n, omega, zc, ct, st, u, v):
    """Full second-order jet, columns
    (x y z | xu yu zu | xv yv zv | xuu yuu zuu | xuv yuv zuv | xvv yvv zvv).
    """
    pn, qn, pn1, qn1, pn2, qn2, pn3, qn3, pn4, qn4 = _pq_window(u, v, n)
    a1 = float(n)
    a2 = omega * (n - 2)
    b1 = float(n * (n - 1))
    b2 = omega * (n - 2) * (n - 3)
    zc1 = zc * (n - 1)
    zc2 = zc * (n - 1) * (n - 2)

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
    if st == 0.0 and ct == 1.0:
        return np.stack(
            (x, y, z, xu, yu, zu, xv, yv, zv,
             xuu, yuu, zuu, xuv, yuv, zuv, -xuu, -yuu, -zuu),
            axis=1,
        )

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
    if ct == 0.0 and st == 1.0:
        return np.stack(
            (xs, ys, zs, xsu, ysu, zsu, xsv, ysv, zsv,
             xsuu, ysuu, zsuu, xsuv, ysuv, zsuv, -xsuu, -ysuu, -zsuu),
            axis=1,
        )

    fuu = ct * xuu + st * xsuu
    guu = ct * yuu + st * ysuu
    huu = ct * zuu + st * zsuu
    return np.stack(
        (
            ct * x + st * xs,
            ct * y + st * ys,
            ct * z + st * zs,
            ct * xu + st * xsu,
            ct * yu + st * ysu,
            ct * zu + st * zsu,
            ct * xv + st * xsv,
            ct * yv + st * ysv,
            ct * zv + st * zsv,
            fuu,
            guu,
            huu,
            ct * xuv + st * xsuv,
            ct * yuv + st * ysuv,
            ct * zuv + st * zsuv,
            -fuu,
            -guu,
            -huu,
        ),
        axis=1,
    )


def _cholesky4_solve(a00, a10, a11, a20, a21, a22, a30, a31, a32, a33,
                     b0, b1, b2, b3):
    """Solve the SPD 4x4 system via an unrolled Cholesky factorization.

    Vectorized over the leading batch axis. Non-SPD rows (only possible on
    non-finite input) produce NaN steps, which the caller's backtracking
    rejects.
    """
    l00 = np.sqrt(a00)
    l10 = a10 / l00
    l20 = a20 / l00
    l30 = a30 / l00
    l11 = np.sqrt(a11 - l10 * l10)
    l21 = (a21 - l20 * l10) / l11
    l31 = (a31 - l30 * l10) / l11
    l22 = np.sqrt(a22 - l20 * l20 - l21 * l21)
    l32 = (a32 - l30 * l20 - l31 * l21) / l22
    l33 = np.sqrt(a33 - l30 * l30 - l31 * l31 - l32 * l32)
    y0 = b0 / l00
    y1 = (b1 - l10 * y0) / l11
    y2 = (b2 - l20 * y0 - l21 * y1) / l22
    y3 = (b3 - l30 * y0 - l31 * y1 - l32 * y2) / l33
    d3 = y3 / l33
    d2 = (y2 - l32 * d3) / l22
    d1 = (y1 - l21 * d2 - l31 * d3) / l11
    d0 = (y0 - l10 * d1 - l20 * d2 - l30 * d3) / l00
    return d0, d1, d2, d3


def refine_pairs(n, omega, zc, ct, st, ua, va, ub, vb,
                 max_iter=50, alpha_floor=1e-8):
    """Damped Gauss-Newton refinement of near-coincident parameter pairs.

    Minimizes |r(a) - r(b)|^2 over (ua, va, ub, vb) for each pair. Steps
    are accepted only when they decrease the separation; the step scale
    halves on rejection down to ``alpha_floor``. Iteration stops on
    machine-level separation, a stagnant line search, or ``max_iter``.

    Returns refined (ua, va, ub, vb, separation) arrays.
    """
    ua = np.array(ua, dtype=np.float64, copy=True)
    va = np.array(va, dtype=np.float64, copy=True)
    ub = np.array(ub, dtype=np.float64, copy=True)
    vb = np.array(vb, dtype=np.float64, copy=True)
    m = ua.shape[0]
    if m == 0:
        return ua, va, ub, vb, np.zeros(0)

    def first(us, vs):
        return points_and_first(n, omega, zc, ct, st, us, vs)

    def dot3(p, q):
        # left-associated component sum, matching the scalar twin bitwise
        return p[:, 0] * q[:, 0] + p[:, 1] * q[:, 1] + p[:, 2] * q[:, 2]

    ja = first(ua, va)
    jb = first(ub, vb)
    e = ja[:, 0:3] - jb[:, 0:3]
    f2 = dot3(e, e)
    active = np.arange(m)

    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        for _ in range(max_iter):
            if active.size == 0:
                break
            posmag = np.maximum(
                np.abs(ja[active, 0:3]).max(axis=1),
                np.abs(jb[active, 0:3]).max(axis=1),
            )
            tol2 = (1e-13 * (1.0 + posmag)) ** 2
            live = f2[active] > tol2
            active = active[live]
            if active.size == 0:
                break

            ea = e[active]
            ru_a = ja[active, 3:6]
            rv_a = ja[active, 6:9]
            ru_b = jb[active, 3:6]
            rv_b = jb[active, 6:9]
            # J columns: [ru_a, rv_a, -ru_b, -rv_b]; build JtJ and Jte.
            a00 = dot3(ru_a, ru_a)
            a10 = dot3(rv_a, ru_a)
            a11 = dot3(rv_a, rv_a)
            a20 = -dot3(ru_b, ru_a)
            a21 = -dot3(ru_b, rv_a)
            a22 = dot3(ru_b, ru_b)
            a30 = -dot3(rv_b, ru_a)
            a31 = -dot3(rv_b, rv_a)
            a32 = dot3(rv_b, ru_b)
            a33 = dot3(rv_b, rv_b)
            g0 = dot3(ru_a, ea)
            g1 = dot3(rv_a, ea)
            g2 = -dot3(ru_b, ea)
            g3 = -dot3(rv_b, ea)
            lam = 1e-12 * np.maximum(np.maximum(a00, a11), np.maximum(a22, a33))
            lam = np.where(lam > 0.0, lam, 1e-300)
            d0, d1, d2, d3 = _cholesky4_solve(
                a00 + lam, a10, a11 + lam, a20, a21, a22 + lam,
                a30, a31, a32, a33 + lam, -g0, -g1, -g2, -g3
            )

            alpha = np.ones(active.size)
            undecided = np.arange(active.size)
            stagnant = np.zeros(active.size, dtype=bool)
            while undecided.size:
                rows = active[undecided]
                au = alpha[undecided]
                tua = ua[rows] + au * d0[undecided]
                tva = va[rows] + au * d1[undecided]
                tub = ub[rows] + au * d2[undecided]
                tvb = vb[rows] + au * d3[undecided]
                tja = first(tua, tva)
                tjb = first(tub, tvb)
                te = tja[:, 0:3] - tjb[:, 0:3]
                tf2 = dot3(te, te)
                better = tf2 < f2[rows]
                good = rows[better]
                ua[good] = tua[better]
                va[good] = tva[better]
                ub[good] = tub[better]
                vb[good] = tvb[better]
                ja[good] = tja[better]
                jb[good] = tjb[better]
                e[good] = te[better]
                f2[good] = tf2[better]
                rest = undecided[~better]
                alpha[rest] = alpha[rest] * 0.5
                dead = alpha[rest] < alpha_floor
                stagnant[rest[dead]] = True
                undecided = rest[~dead]
            active = active[~stagnant]

    return ua, va, ub, vb, np.sqrt(f2)
