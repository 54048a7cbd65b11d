"""High-precision reference values for the paired t-test and directional
Bayes factor. Test-only; the numbers printed here are frozen into
tests/test_bayes.cpp. Uses the closed-form noncentral t density
(confluent hypergeometric representation) and mpmath quadrature, which
shares no code path with the C++ implementation."""
import mpmath as mp

mp.mp.dps = 40


def t_pdf(t, nu):
    return mp.gamma((nu + 1) / 2) / (mp.sqrt(nu * mp.pi) * mp.gamma(nu / 2)) * (1 + t * t / nu) ** (-(nu + 1) / 2)


def nct_pdf(t, nu, mu):
    z = mu * mu * t * t / (2 * (nu + t * t))
    pre = nu ** (nu / 2) * mp.gamma(nu + 1) * mp.exp(-mu * mu / 2) / (
        2 ** nu * (nu + t * t) ** (nu / 2) * mp.gamma(nu / 2))
    a = mp.sqrt(2) * mu * t / (nu + t * t) * mp.hyp1f1(nu / 2 + 1, mp.mpf(3) / 2, z) / mp.gamma((nu + 1) / 2)
    b = mp.hyp1f1((nu + 1) / 2, mp.mpf(1) / 2, z) / (mp.sqrt(nu + t * t) * mp.gamma(nu / 2 + 1))
    return pre * (a + b)


def bf10(t, n, r, side):
    t = mp.mpf(t)
    nu = mp.mpf(n - 1)
    cauchy = lambda d: 1 / (mp.pi * r * (1 + (d / r) ** 2))
    like = lambda d: nct_pdf(t, nu, d * mp.sqrt(n))
    if side == "less":      # H1: effect on b - a is positive
        m = 2 * mp.quad(lambda d: cauchy(d) * like(d), [0, 1, 5, mp.inf])
    elif side == "greater":
        m = 2 * mp.quad(lambda d: cauchy(d) * like(d), [-mp.inf, -5, -1, 0])
    else:
        m = mp.quad(lambda d: cauchy(d) * like(d), [-mp.inf, -5, -1, 0, 1, 5, mp.inf])
    return m / t_pdf(t, nu)


def t_upper(t, nu):
    # P(T >= t)
    t = mp.mpf(t)
    x = nu / (nu + t * t)
    tail = mp.betainc(mp.mpf(nu) / 2, mp.mpf(1) / 2, 0, x, regularized=True) / 2
    return tail if t >= 0 else 1 - tail


if __name__ == "__main__":
    # the noncentral density must collapse to the central one at mu = 0
    for tv in (0, 0.7, -2.5):
        assert abs(nct_pdf(mp.mpf(tv), mp.mpf(11), 0) / t_pdf(mp.mpf(tv), mp.mpf(11)) - 1) < mp.mpf(10) ** -30
    # and integrate to one
    assert abs(mp.quad(lambda x: nct_pdf(x, mp.mpf(7), mp.mpf(1.3)), [-mp.inf, 0, 1.3, mp.inf]) - 1) < mp.mpf(10) ** -20
    d = [1, 2, 3, 4, 2, 3]
    n = len(d)
    mean = mp.fsum(mp.mpf(x) for x in d) / n
    sd = mp.sqrt(mp.fsum((mp.mpf(x) - mean) ** 2 for x in d) / (n - 1))
    t = mean * mp.sqrt(n) / sd
    print("paired d=(1,2,3,4,2,3): t =", mp.nstr(t, 20), " p_less =", mp.nstr(t_upper(t, n - 1), 20))
    for nu, tv in [(5, 0.5), (11, 2.0), (24, 3.0), (11, -1.5), (3, 10.0)]:
        print(f"upper tail nu={nu} t={tv}:", mp.nstr(t_upper(tv, nu), 20))
    r = mp.mpf("0.707")
    for n in (12, 25):
        for tv in ("0", "0.5", "1", "2", "3", "5"):
            print(f"bf10 less n={n} t={tv}:", mp.nstr(bf10(tv, n, r, "less"), 16))
    print("bf10 two-sided n=12 t=2:", mp.nstr(bf10("2", 12, r, "two"), 16))
    print("bf10 greater n=12 t=-2:", mp.nstr(bf10("-2", 12, r, "greater"), 16))
    print("bf10 less n=12 t=2 r=1:", mp.nstr(bf10("2", 12, mp.mpf(1), "less"), 16))
