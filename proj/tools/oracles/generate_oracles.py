#!/usr/bin/env python3
"""High-precision oracle values for the test suite.

Every number the C++ tests assert against a frozen constant is computed here
at 50-digit precision with mpmath, independently of the C++ implementation.
Symbolic identities (the radial Jacobi-operator eigenfunction relations) are
checked with sympy. Run from the repo root:

    python3 tools/oracles/generate_oracles.py
"""

import mpmath as mp
import sympy as sp

mp.mp.dps = 50


def p(name, value, digits=22):
    print(f"{name:46s} = {mp.nstr(mp.mpf(value), digits)}")


print("== gamma / volumes ==")
p("gamma(0.5)", mp.sqrt(mp.pi))
p("gamma(4.5)", mp.gamma(mp.mpf("4.5")))


def unit_ball_volume(n):
    return mp.pi ** (mp.mpf(n) / 2) / mp.gamma(mp.mpf(n) / 2 + 1)


def sphere_volume(pdim, radius):
    pdim = mp.mpf(pdim)
    return radius ** pdim * 2 * mp.pi ** ((pdim + 1) / 2) / mp.gamma((pdim + 1) / 2)


p("unit_ball_volume(7)", unit_ball_volume(7))
p("sphere_volume(3, 1/sqrt2)", sphere_volume(3, 1 / mp.sqrt(2)))

print("\n== quadrature spot values ==")
p("int_0^inf t^3 exp(-t^2/4) dt", mp.quad(lambda t: t**3 * mp.exp(-(t**2) / 4), [0, mp.inf]))
p("weighted area of flat unit disk", 4 * mp.pi * (mp.exp(mp.mpf(1) / 4) - 1))

print("\n== shrinking-sphere entropies d_k ==")


def entropy_dk(k):
    k = mp.mpf(k)
    return (k / (2 * mp.e)) ** (k / 2) * 2 * mp.sqrt(mp.pi) / mp.gamma((k + 1) / 2)


p("d_1", entropy_dk(1))
p("sqrt(2*pi/e)", mp.sqrt(2 * mp.pi / mp.e))
p("d_2", entropy_dk(2))
p("4/e", 4 / mp.e)
p("d_50", entropy_dk(50))
p("d_200", entropy_dk(200))
p("d_200 - sqrt(2)", entropy_dk(200) - mp.sqrt(2))
dk = [entropy_dk(k) for k in range(1, 52)]
print("d_k strictly decreasing k=1..51:", all(a > b for a, b in zip(dk, dk[1:])))
print("d_k > sqrt(2) for k=1..51:", all(v > mp.sqrt(2) for v in dk))

print("\n== cone densities ==")


def density_product_spheres(pdim, q):
    n = pdim + q + 1
    rp = mp.sqrt(mp.mpf(pdim) / (pdim + q))
    rq = mp.sqrt(mp.mpf(q) / (pdim + q))
    vol = sphere_volume(pdim, rp) * sphere_volume(q, rq)
    return vol / (n * unit_ball_volume(n))


p("Theta(C_{1,1})", density_product_spheres(1, 1))
p("pi/2", mp.pi / 2)
p("Theta(C_{2,2})", density_product_spheres(2, 2))
p("Theta(C_{3,3})", density_product_spheres(3, 3))
p("15*pi/32", 15 * mp.pi / 32)
p("Theta(S^1(sqrt(1/6)) x S^5(sqrt(5/6)))", density_product_spheres(1, 5))
th = [density_product_spheres(k, k) for k in range(1, 52)]
print("Theta(C_{k,k}) decreasing k=1..51:", all(a > b for a, b in zip(th, th[1:])))
print("Theta(C_{k,k}) > sqrt(2) k=1..51:", all(v > mp.sqrt(2) for v in th))


def density_rotational(n, kappa):
    # cone {x_{n+1} = kappa |x|}: unit-sphere cross-section is an (n-1)-sphere
    # of radius 1/sqrt(1+kappa^2)
    n = mp.mpf(n)
    return sphere_volume(n - 1, 1 / mp.sqrt(1 + kappa**2)) / (n * unit_ball_volume(n))


p("Theta(rotational n=3 kappa=1)", density_rotational(3, 1))
p("Theta(rotational n=3 kappa=1e-8)", density_rotational(3, mp.mpf("1e-8")))

print("\n== Gaussian density identity, radial factor ==")
for m in (3, 5, 7):
    q = mp.quad(lambda s: mp.exp(-(s**2) / 4) * s ** (m - 1), [0, mp.inf])
    p(f"int_0^inf exp(-s^2/4) s^{m-1} ds", q)
    p(f"2^{m-1} Gamma({m}/2)", 2 ** (m - 1) * mp.gamma(mp.mpf(m) / 2))

print("\n== stability integral: closed form vs truncated-family quadrature ==")


def stability_closed_form(n, lam1, eps):
    n, lam1, eps = mp.mpf(n), mp.mpf(lam1), mp.mpf(eps)
    return 2 ** (2 * eps - 1) * (
        (lam1 + (eps + 1 - n / 2) ** 2) * mp.gamma(eps)
        + 2 * (n - 1 - 2 * eps) * mp.gamma(1 + eps)
        + 4 * mp.gamma(2 + eps)
    )


def stability_quadrature_family(n, lam1, eps, delta, R):
    """Integral of (lam1 eta^2 + t^2 eta^2 / 2 + t^2 eta'^2) t^(n-3) e^(t^2/4)
    over the cutoff family: linear ramp on [delta/2, delta), then
    t^(eps+1-n/2) (e^(-t^2/4) - e^(-R^2/4)) on [delta, R), zero elsewhere."""
    n, lam1, eps = mp.mpf(n), mp.mpf(lam1), mp.mpf(eps)
    delta, R = mp.mpf(delta), mp.mpf(R)
    a = eps + 1 - n / 2
    cR = mp.exp(-(R**2) / 4)
    slope = 2 * delta ** (eps - n / 2) * (mp.exp(-(delta**2) / 4) - cR)

    def ramp(t):
        eta = slope * (t - delta / 2)
        return (lam1 * eta**2 + t**2 * eta**2 / 2 + t**2 * slope**2) * t ** (n - 3) * mp.exp(t**2 / 4)

    def smooth(t):
        g = mp.exp(-(t**2) / 4) - cR
        eta = t**a * g
        detadt = a * t ** (a - 1) * g - t**a * (t / 2) * mp.exp(-(t**2) / 4)
        return (lam1 * eta**2 + t**2 * eta**2 / 2 + t**2 * detadt**2) * t ** (n - 3) * mp.exp(t**2 / 4)

    part1 = mp.quad(ramp, [delta / 2, delta])
    part2 = mp.quad(smooth, [delta, 1, 5, R])
    return part1 + part2


p("closed form (3, 0, 1)  [expect 16.5]", stability_closed_form(3, 0, 1))
for (n, lam1, eps) in [(3, -0.25, 0.05), (5, -2.25, 0.1), (7, -6, 0.2)]:
    cf = stability_closed_form(n, lam1, eps)
    q3 = stability_quadrature_family(n, lam1, eps, mp.mpf("1e-3"), 30)
    p(f"closed form ({n}, {lam1}, {eps})", cf)
    p(f"family quad delta=1e-3 ({n}, {lam1}, {eps})", q3)
    p("  relative difference", abs(q3 - cf) / abs(cf))
    # how small must delta be for relative 1e-3 agreement
    for dexp in (6, 9, 12, 15, 20, 30):
        d = mp.mpf(10) ** (-dexp)
        qq = stability_quadrature_family(n, lam1, eps, d, 30)
        rd = abs(qq - cf) / abs(cf)
        if rd < mp.mpf("1e-3"):
            print(f"  delta=1e-{dexp}: relative difference {mp.nstr(rd, 3)} (< 1e-3)")
            break
        else:
            print(f"  delta=1e-{dexp}: relative difference {mp.nstr(rd, 3)}")

print("\n== stability boundary case limit ==")
for n in (3, 5, 7):
    lam1 = -mp.mpf((n - 2) ** 2) / 4
    p(f"closed form (n={n}, lam1=-(n-2)^2/4, eps=1e-3)", stability_closed_form(n, lam1, mp.mpf("1e-3")))
    # eps->0 limit: the Gamma(eps) coefficient is eps*(eps-(n-2)), so the
    # divergence cancels and the limit is (-(n-2)+2(n-1)+4)/2 = (n+4)/2.
    p(f"  limit (n+4)/2", mp.mpf(n + 4) / 2)

print("\n== instability sample: closed form at eps=1e-3, strictly unstable combos ==")
samples = []
for n in (3, 4, 5, 6, 7):
    thr = -mp.mpf((n - 2) ** 2) / 4
    for off in (mp.mpf("0.05"), mp.mpf("0.5"), mp.mpf("2"), mp.mpf("5")):
        samples.append((n, thr - off))
for (n, lam1) in samples:
    v = stability_closed_form(n, lam1, mp.mpf("1e-3"))
    assert v < 0, (n, lam1, v)
print(f"all {len(samples)} sampled unstable combos give closed form < 0 at eps=1e-3: True")

print("\n== 1-d expander barrier numbers ==")
tau = 2 * mp.e * 2  # kappa = 1 -> tau = 2e*max(kappa,2) = 4e
p("(4e/5) exp(-25/4)", tau / 5 * mp.exp(-mp.mpf(25) / 4))

print("\n== translator arrival-time closed form ==")


def arrival_time(d, epsv, rho0, rho):
    d, epsv, rho0, rho = mp.mpf(d), mp.mpf(epsv), mp.mpf(rho0), mp.mpf(rho)
    return epsv**2 * (mp.log(d - 1 + rho0**2 / (2 * epsv**2)) - mp.log(d - 1 + rho**2 / (2 * epsv**2)))


for rho in ("0", "1", "2", "3"):
    p(f"v(rho={rho}) d=3 eps=1 rho0=4", arrival_time(3, 1, 4, mp.mpf(rho)))

print("\n== symbolic checks: radial Jacobi-operator identities ==")
r, n_s, tau_s, t_s, s_s = sp.symbols("r n tau t s", positive=True)


def L0(w):
    return sp.exp(-r**2 / 4) * r ** (1 - n_s) * sp.diff(sp.exp(r**2 / 4) * r ** (n_s - 1) * sp.diff(w, r), r) - w / 2


w1 = r ** (-n_s - 1 + tau_s) * sp.exp(-(r**2) / 4)
rhs1 = (-tau_s / 2 + (3 * (n_s + 1) - (n_s + 4) * tau_s + tau_s**2) / r**2) * w1
print("power identity:", sp.simplify(L0(w1) - rhs1) == 0)

w2 = t_s * (r + s_s) * r ** (-n_s - 2) * sp.exp(-(r**2) / 4)
rhs2 = t_s * r ** (-n_s - 2) * sp.exp(-(r**2) / 4) * (s_s / 2 + (3 * n_s + 3) / r + (4 * n_s + 8) * s_s / r**2)
print("affine identity:", sp.simplify(L0(w2) - rhs2) == 0)

print("\n== traced curvature identity on the flat plane: trivially 0 ==")
print("(no oracle needed; closed-form zero)")

print("\n== linear-cone residual closed form ==")
# radial expander operator applied to u = kappa*r gives kappa*(n-1)/r exactly
kappa_s = sp.symbols("kappa", positive=True)
u_lin = kappa_s * r
J = sp.diff(u_lin, r, 2) / (1 + sp.diff(u_lin, r) ** 2) + (n_s - 1) / r * sp.diff(u_lin, r) \
    + r / 2 * sp.diff(u_lin, r) - u_lin / 2
print("J(kappa*r) == kappa*(n-1)/r:", sp.simplify(J - kappa_s * (n_s - 1) / r) == 0)
