"""High-precision reference values for the Mahler measure tests.

Independent of the Rust implementation: every measure is computed as a
one-dimensional Jensen integral with mpmath, split at the points where a
root crosses the unit circle (located by mpmath root finding on a fine
scan), at 30 significant digits.

Run:  python3 reference_values.py
"""
import mpmath as mp

mp.mp.dps = 30


def quad_roots(a, b, c):
    d = mp.sqrt(b * b - 4 * a * c)
    return [(-b + d) / (2 * a), (-b - d) / (2 * a)]


def jensen_integrand(coeffs):
    """coeffs(x) -> (a2, a1, a0); returns theta -> log|a2| + sum log+|y|."""
    def f(theta):
        x = mp.expj(2 * mp.pi * theta)
        a2, a1, a0 = coeffs(x)
        s = mp.log(abs(a2))
        for y in quad_roots(a2, a1, a0):
            ay = abs(y)
            if ay > 1:
                s += mp.log(ay)
        return s
    return f


def kink_points(coeffs, grid=4000):
    """theta in [0,1) where log+|y| may fail to be analytic: a root enters or
    leaves the unit circle, or two roots meet on it.  Detected as sign/count
    changes of |y|-1 and as dips of min |log|y|| towards zero."""
    def moduli(theta):
        x = mp.expj(2 * mp.pi * theta)
        a2, a1, a0 = coeffs(x)
        return [abs(y) for y in quad_roots(a2, a1, a0)]

    def g(theta):
        return min(abs(mp.log(m)) if m > 0 else mp.inf for m in moduli(theta))

    def state(theta):
        ms = moduli(theta)
        return (sum(1 for m in ms if m > 1 + mp.mpf(1e-12)),
                sum(1 for m in ms if m < 1 - mp.mpf(1e-12)))

    ts = [(mp.mpf(j) + 0.5) / grid for j in range(grid)]
    gs = [g(t) for t in ts]
    st = [state(t) for t in ts]
    pts = []
    for j in range(grid):
        i, k = j - 1, (j + 1) % grid
        # count change between j and k
        if st[j] != st[k]:
            lo, hi = ts[j], ts[j] + mp.mpf(1) / grid
            for _ in range(100):
                mid = (lo + hi) / 2
                if state(mid) == st[j]:
                    lo = mid
                else:
                    hi = mid
            pts.append(float((lo + hi) / 2 % 1))
        # isolated dip of g
        if gs[j] > 1e-20 and gs[j] <= gs[i] and gs[j] < gs[k]:
            lo, hi = ts[j] - mp.mpf(1) / grid, ts[j] + mp.mpf(1) / grid
            phi = (mp.sqrt(5) - 1) / 2
            for _ in range(150):
                a = hi - phi * (hi - lo)
                b = lo + phi * (hi - lo)
                if g(a) < g(b):
                    hi = b
                else:
                    lo = a
            tm = (lo + hi) / 2
            if g(tm) < 1e-9:
                pts.append(float(tm % 1))
    return sorted(set(round(p, 14) for p in pts))


def measure(coeffs):
    f = jensen_integrand(coeffs)
    ks = kink_points(coeffs)
    edges = sorted(set([0.0, 0.5, 1.0] + [k for k in ks if 0 < k < 1]))
    return mp.quad(f, edges)


def r(lam):
    return measure(lambda x: (1, x + 1 / x + lam, 1))


def p(lam):
    return measure(lambda x: (x + 1, x * x - (lam + 2) * x + 1, x * (x + 1)))


def qk(k):
    return measure(lambda x: (1, x**4 + k * x**3 + 2 * k * x**2 + k * x + 1, x**4))


def q(lam):
    # Q_{lam+4}(X-1, Y) in Y with X on the circle.
    def c(X):
        x = (X - 1) / X**2
        return (1, X**4 * (2 * x * x + lam * x + 1), X**8 * x**4)
    return measure(c)


def one_plus_x_plus_y():
    return measure(lambda x: (1, 1 + x, 0 * x))


if __name__ == "__main__":
    print("m(1+x+y)", mp.nstr(one_plus_x_plus_y(), 20))
    for lam in [-20, -10, -8, -6, -5, -4, 0, 5, 6, 13, 14, 16, 20, 50]:
        print("r", lam, mp.nstr(r(lam), 20))
    for lam in [-7, -6, -5, -4, -3, -2, -1, 0, 13, 14, 16, 20, 50]:
        print("p", lam, mp.nstr(p(lam), 20))
    for k in range(-3, 5):
        print("Q_k", k, mp.nstr(qk(k), 20))
    for lam in [-20, -10, -8, -6, -5, -4, 13, 14, 16, 20, 50]:
        print("q", lam, mp.nstr(q(lam), 20))


def derivative_references():
    hyp = mp.hyp2f1
    out = {}
    for lam in [6, 13, 13.5, 14, 16, 20, 25]:
        lam = mp.mpf(lam)
        out[("dr", float(lam))] = hyp(0.5, 0.5, 1, 16 / lam**2) / lam
        out[("dp", float(lam))] = hyp(mp.mpf(1) / 3, mp.mpf(2) / 3, 1,
                                      27 * (lam + 4) ** 2 / (lam + 8) ** 3) / (lam + 8)
    for lam in [-6, -8, -12]:
        lam = mp.mpf(lam)
        out[("dr", float(lam))] = hyp(0.5, 0.5, 1, 16 / lam**2) / lam
    out[("2F1(1/2,1/2;1;1/2)", 0.5)] = hyp(0.5, 0.5, 1, 0.5)
    out[("2F1(1/2,1/2;1;0.04)", 0.04)] = hyp(0.5, 0.5, 1, 0.04)
    z13 = mp.mpf(27) * 17**2 / 21**3
    out[("2F1(1/3,2/3;1;z13)", float(z13))] = hyp(mp.mpf(1) / 3, mp.mpf(2) / 3, 1, z13)
    return out


if __name__ == "__main__":
    for key, v in derivative_references().items():
        print(key[0], key[1], mp.nstr(v, 20))
