# Spot values for the closed-form Kolmogorov bounds, at 40 digits.
from mpmath import mp, mpf, sqrt, pi, gamma, gammainc, hyp1f1, erf, erfc, besselj, bessely, quad, inf
mp.dps = 40

def phi(mu, sg, e):
    return hyp1f1(mpf(-3)/2, mpf(1)/2, -mu**2*e/(2*sg**2))

def lg(s, x):
    return gammainc(s, 0, x)

def nts(k, d, g, mu, sg, e):
    b = g**(1/k)/2
    ex = mpf('0.7975')*2**mpf(1.5)*sqrt(gamma(1-k))/sqrt(d*k*pi*g)*phi(mu, sg, e)*lg(mpf(1.5)-k, b*e)/lg(1-k, b*e)**mpf(1.5)
    return ex

def h0(lam, z0):
    nu = abs(lam)
    return z0*(besselj(nu, z0)**2 + bessely(nu, z0)**2)

def z0def(lam):
    nu = abs(mpf(lam))
    return (2**(1-2*nu)*pi/gamma(nu)**2)**(1/(1-2*nu))

def gh(lam, d, g, mu, sg, e):
    nu = abs(lam); b = g**2/2; pt = sqrt(pi/2); lp = max(lam, 0)
    z0 = z0def(lam); H = h0(lam, z0)
    ef = erf(g*sqrt(e/2))
    if nu <= 0.5:
        t1 = 2*lp/(pt*(b*d)**mpf(1.5))*lg(mpf(1.5), b*e)
        t2 = 2**(nu+1)*d**(2*nu-mpf(1.5))*gamma(nu)/(pi**2*pt*H*z0**(2*nu-1)*b**(mpf(1.5)-nu))*lg(mpf(1.5)-nu, b*e)
        t3 = lg(1, b*e)/(pt**4*H*b*sqrt(d))
        return mpf('0.7975')*phi(mu, sg, e)*g**mpf(1.5)/ef**mpf(1.5)*(t1+t2+t3)
    t1 = lp*pi/(b*d)**mpf(1.5)*lg(mpf(1.5), b*e)
    t2 = pt/(b*sqrt(d))*lg(1, b*e)
    ec = erfc(z0*sqrt(e)/(d*sqrt(2)))
    return mpf('0.7975')*phi(mu, sg, e)*(g*H)**mpf(1.5)/(ec*ef)**mpf(1.5)*(t1+t2)

# Gamma-family S_eps, straight quadrature of z^n nu e^{-beta z}/z.
def ng_s(nu, g, mu, sg, e):
    beta = g**2/2
    M = lambda n: quad(lambda z: nu*z**(n-1)*mp.exp(-beta*z), [0, e])
    var = mu**2*M(2)+sg**2*M(1)
    return (mu**4*M(4)+6*mu**2*sg**2*M(3)+3*sg**4*M(2))/var**2

print("nts 1e-4", nts(mpf('0.5'), 1, mpf('1.35'), 1, 2, mpf('1e-4')))
print("gh 0.8 1e-3", gh(mpf('0.8'), mpf('1.3'), sqrt(2), 1, 2, mpf('1e-3')))
print("gh 0.2 1e-4", gh(mpf('0.2'), mpf('1.3'), sqrt(2), 1, 2, mpf('1e-4')))
print("gh -0.8 1e-2 z0", z0def(-0.8), gh(mpf('-0.8'), 1, 1, mpf('0.5'), 1, mpf('1e-2')))
print("ng s 1e-3", ng_s(2, sqrt(2), 1, 2, mpf('1e-3')))
