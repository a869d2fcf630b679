"""Reference values frozen into the unit tests (mpmath, 30 digits)."""
import mpmath as mp

mp.mp.dps = 30


def phi_k(t):
    return mp.gamma(mp.mpf(1) / 2 + 1j * t) * mp.power(2, 1j * t) / mp.sqrt(mp.pi)


def wand(x):
    return mp.quad(lambda t: (1 - t * t) ** 3 * mp.cos(t * x), [-1, 0, 1]) / (2 * mp.pi)


def v_h(x, h):
    f = lambda s: (1 - s * s) ** 3 * mp.exp(-1j * s * x) / phi_k(s / h)
    return mp.re(mp.quad(f, mp.linspace(-1, 1, 9))) / (2 * mp.pi)


def nu(x):
    return x**4 * (35 - 84 * x + 70 * x * x - 20 * x**3)


def F(t):
    x = (t + mp.pi / 3) / (2 * mp.pi / 3)
    return 0 if x <= 0 else (1 if x >= 1 else nu(x))


def phi_tilde(w):
    w = abs(w)
    if w <= 2 * mp.pi / 3:
        return mp.mpf(1)
    if w >= 4 * mp.pi / 3:
        return mp.mpf(0)
    return mp.sqrt(1 - F(w - mp.pi))


def meyer_phi(x):
    return mp.re(mp.quad(lambda w: phi_tilde(w) * mp.exp(1j * w * x), [-4 * mp.pi / 3, -2 * mp.pi / 3, 0, 2 * mp.pi / 3, 4 * mp.pi / 3])) / (2 * mp.pi)


def u_m(x, m):
    a, b = 2 * mp.pi / 3, 4 * mp.pi / 3
    f = lambda w: phi_tilde(w) * mp.exp(1j * w * x) / phi_k(2**m * w)
    pts = [-b, -a, 0, a, b]
    return mp.re(mp.quad(f, pts)) / (2 * mp.pi)


def u_basis(y, L, j):
    f = lambda s: mp.exp(1j * s * y) * mp.exp(-1j * s * j / L) / mp.sqrt(L) / phi_k(s)
    return mp.re(mp.quad(f, mp.linspace(-mp.pi * L, mp.pi * L, 17))) / (2 * mp.pi)


if __name__ == "__main__":
    for t in (0.0, 0.7, -2.5, 10.0):
        v = phi_k(t)
        print(f"phi_k({t}) = {mp.nstr(mp.re(v), 20)} {mp.nstr(mp.im(v), 20)}")
    for z in (0.5 + 3j, 2.25 - 1j, -1.5 + 0.5j, 12 + 40j):
        v = mp.loggamma(z)
        print(f"loggamma({z}) = {mp.nstr(mp.re(v), 20)} {mp.nstr(mp.im(v), 20)}")
    for x in (0.0, 0.3, 0.5, 2.0, 7.5):
        print(f"wand({x}) = {mp.nstr(wand(x), 20)}")
    for x in (0.0, 1.0, 3.0):
        print(f"v_h({x}, 0.4) = {mp.nstr(v_h(x, 0.4), 20)}")
    for x in (0.0, 0.5, 2.0):
        print(f"meyer_phi({x}) = {mp.nstr(meyer_phi(x), 20)}")
    for m, x in ((0, 0.5), (1, 0.0), (1, 2.0)):
        print(f"U_{m}({x}) = {mp.nstr(u_m(x, m), 20)}")
    for L, j, y in ((1, 0, 0.3), (1, 2, -1.0), (2, 1, 0.25)):
        print(f"u_basis(L={L}, j={j}, y={y}) = {mp.nstr(u_basis(y, L, j), 20)}")
    for L in (1, 2, 5):
        q = mp.quad(lambda s: 1 / abs(phi_k(s)) ** 2, mp.linspace(-mp.pi * L, mp.pi * L, 9))
        print(f"Phi_k({L}) quad {mp.nstr(q, 20)} closed {mp.nstr(2 / mp.pi * mp.sinh(mp.pi**2 * L), 20)}")
    # L2 distance between N(0,1) and N(0.1,1)
    d = mp.quad(lambda x: (mp.npdf(x) - mp.npdf(x, 0.1)) ** 2, [-mp.inf, mp.inf])
    print(f"gauss_shift_l2 = {mp.nstr(d, 20)} closed {mp.nstr(2 * (1 - mp.exp(-mp.mpf('0.01') / 4)) / (2 * mp.sqrt(mp.pi)), 20)}")
    # CIR: dX = kappa(theta - x)dt + c sqrt(x) dW  ->  Gamma(shape 2 kappa theta / c^2, rate 2 kappa / c^2)
    kappa, theta, c = mp.mpf(2), mp.mpf(1), mp.mpf(1)
    shape, rate = 2 * kappa * theta / c**2, 2 * kappa / c**2
    print(f"cir shape {shape} rate {rate} pdf(1) {mp.nstr(rate**shape * mp.e**(-rate) / mp.gamma(shape), 20)}")
