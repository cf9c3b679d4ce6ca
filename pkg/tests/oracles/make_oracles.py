"""Regenerate the frozen reference values in ``tests/oracle_values.py``.

Every value here comes from mpmath at elevated precision and an independent
route: the in-phase/quadrature Gaussian model written as a Poisson mixture
of gamma laws (for alpha = 2, eta = kappa-free symmetric cases), incomplete
gamma series, Bessel-kernel integrals and Tricomi functions.  Nothing below
imports the package under test.

Run:  python3 tests/oracles/make_oracles.py
"""

import mpmath as mp

mp.mp.dps = 30


def log_gamma_1p1i():
    return mp.loggamma(mp.mpc(1, 1))


def threshold(u, pf):
    # lambda/2 solves Gamma(u, x)/Gamma(u) = pf; bisection
    f = lambda x: mp.gammainc(u, x, mp.inf, regularized=True) - pf
    return 2 * mp.findroot(f, (mp.mpf(0.01), mp.mpf(50)), solver="bisect", tol=1e-28)


def marcum_bessel(u, a, b):
    # Q_u(a, b) = int_b^inf x (x/a)^(u-1) exp(-(x^2+a^2)/2) I_{u-1}(a x) dx
    f = lambda x: x * (x / a) ** (u - 1) * mp.exp(-(x * x + a * a) / 2) * mp.besseli(u - 1, a * x)
    return mp.quad(f, [b, b + 10, mp.inf])


def er_h_instance(x, A):
    # alpha = 2, mu = 1, j = 0: H[x] = Gamma(A) int exp(-x g) (1+g)^-A dg
    return mp.gamma(A) * mp.quad(lambda g: mp.exp(-x * g) * (1 + g) ** (-A), [0, 1, 10, mp.inf])


def adp_single_kernel(u, lam, gbar):
    # gamma = gbar * G, G ~ Gamma(1, scale 2): E[1 - Q_u] as an incomplete-gamma series
    r = 2 * gbar / (1 + 2 * gbar)
    return mp.nsum(lambda k: r ** k / (1 + 2 * gbar) * mp.gammainc(u + k, 0, lam / 2, regularized=True),
                   [0, mp.inf])


def _mixture(gbar, per_shape, imax=80):
    # W ~ noncentral chi-square(2 dof, nc = 2): Poisson(1) mixture of Gamma(1+i, scale 2)
    return mp.fsum(mp.exp(-1) / mp.factorial(i) * per_shape(1 + i, gbar) for i in range(imax))


def rician_er(gbar, A):
    z = 1 / (2 * gbar)
    return _mixture(gbar, lambda m, g: mp.hyperu(m, m + 1 - A, z) * z ** m)


def rician_missed(u, lam, gbar, kmax=4000):
    r = 2 * gbar / (1 + 2 * gbar)
    P = [mp.gammainc(u + k, 0, lam / 2, regularized=True) for k in range(kmax)]

    def per_shape(m, g):
        return mp.fsum(mp.binomial(m + k - 1, k) * r ** k * P[k] for k in range(kmax)) / (1 + 2 * g) ** m
    return _mixture(gbar, per_shape)


def auc_terms(u):
    return [(n, mp.binomial(r + u - 1, r - n) * mp.mpf(2) ** (-(r + n + u)) / mp.factorial(n))
            for r in range(u) for n in range(r + 1)]


def rician_cauc(u, gbar):
    def per_shape(m, g):
        return mp.fsum(c * (2 * g) ** n * mp.gamma(m + n) / mp.gamma(m) / (1 + g) ** (m + n)
                       for n, c in auc_terms(u))
    return _mixture(gbar, per_shape)


def auc_awgn(u, g):
    return 1 - mp.exp(-g / 2) * mp.fsum(c * g ** n for n, c in auc_terms(u))


if __name__ == "__main__":
    lam = threshold(2, mp.mpf("0.1"))
    gbar = mp.mpf(10)
    A = mp.mpf("0.75")
    out = {
        "LOG_GAMMA_1P1I": complex(log_gamma_1p1i()),
        "THRESHOLD_U2_PF01": float(lam),
        "MARCUM_Q2_1_2": float(marcum_bessel(2, mp.mpf(1), mp.mpf(2))),
        "ER_H_X05_A075": float(er_h_instance(mp.mpf("0.5"), A)),
        "ER_H_X2_A075": float(er_h_instance(mp.mpf(2), A)),
        "ADP_KERNEL0_U2_G1": float(adp_single_kernel(2, lam, mp.mpf(1))),
        "AUC_AWGN_U2_G5": float(auc_awgn(2, mp.mpf(5))),
        "RICIAN_ER_10DB_A075": float(-mp.log(rician_er(gbar, A), 2) / A),
        "RICIAN_ER_10DB_A1": float(-mp.log(rician_er(gbar, mp.mpf(1)), 2)),
        "RICIAN_MISSED_10DB": float(rician_missed(2, lam, gbar)),
        "RICIAN_CAUC_10DB": float(rician_cauc(2, gbar)),
    }
    for k, v in out.items():
        print(f"{k} = {v!r}")
