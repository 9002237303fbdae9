# Independent oracles (mpmath finite differences / sympy) for frozen test values.
import mpmath as mp, sympy as sp
mp.mp.dps = 50

def phi_bern(b):
    return mp.log(1 + mp.e**(-b))

for k in (1, 2, 3, 4):
    print("bernoulli d^%d Phi at 0 =" % k, mp.nstr(mp.diff(phi_bern, 0, k), 20))
print("bernoulli Phi(1) =", mp.nstr(phi_bern(1), 20))
print("bernoulli d Phi/d beta at 1 (eta) =", mp.nstr(mp.diff(phi_bern, 1, 1), 20))
print("bernoulli g at 1 =", mp.nstr(mp.diff(phi_bern, 1, 2), 20))
print("gibbs(beta=50)[1] =", mp.nstr(mp.e**-50 / (1 + mp.e**-50), 20))

# categorical3: X_j(w) = delta_{j,w}, j=1,2, w=0,1,2 ; beta=(0.3,-0.2)
def phi_cat(b1, b2):
    return mp.log(1 + mp.e**(-b1) + mp.e**(-b2))
b = (mp.mpf('0.3'), mp.mpf('-0.2'))
print("cat3 g11", mp.nstr(mp.diff(phi_cat, b, (2, 0)), 20))
print("cat3 g12", mp.nstr(mp.diff(phi_cat, b, (1, 1)), 20))
print("cat3 T112", mp.nstr(mp.diff(phi_cat, b, (2, 1)), 20))
print("cat3 Q1122", mp.nstr(mp.diff(phi_cat, b, (2, 2)), 20))

# Levi-Civita of the round sphere diag(1, sin^2 u1) at u=(1, 0.5)
u1, u2 = sp.symbols('u1 u2')
g = sp.diag(1, sp.sin(u1)**2)
U = [u1, u2]
ginv = g.inv()
def gamma(i, j, k):
    return sp.simplify(sum(ginv[i, l] * (sp.diff(g[l, k], U[j]) + sp.diff(g[j, l], U[k]) - sp.diff(g[j, k], U[l])) for l in range(2)) / 2)
print("sphere Gamma^1_22", sp.N(gamma(0, 1, 1).subs({u1: 1, u2: 0.5}), 20))
print("sphere Gamma^2_12", sp.N(gamma(1, 0, 1).subs({u1: 1, u2: 0.5}), 20))
