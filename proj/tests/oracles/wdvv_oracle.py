# Symbolic oracle for WDVV residuals of the catalog potentials.
import itertools, sympy as sp
x1, x2, x3, c = sp.symbols('x1 x2 x3 c')
X = [x1, x2, x3]

def residual(Phi, g, point):
    ginv = g.inv()
    T = [[[sp.diff(Phi, X[a], X[b], X[e]) for e in range(3)] for b in range(3)] for a in range(3)]
    worst = 0
    for a, b, cc, d in itertools.product(range(3), repeat=4):
        lhs = sum(T[a][b][e] * ginv[e, f] * T[f][cc][d] for e in range(3) for f in range(3))
        rhs = sum(T[b][cc][e] * ginv[e, f] * T[f][a][d] for e in range(3) for f in range(3))
        worst = max(worst, abs(sp.simplify((lhs - rhs).subs(point))))
    return worst

g = sp.Matrix([[0, 0, 1], [0, 1, 0], [1, 0, 0]])
trivial = x1**2 * x3 / 2 + x1 * x2**2 / 2
print("trivial", residual(trivial, g, {x1: 0.3, x2: -0.7, x3: 1.1}))
pert = trivial + c * x2**2 * x3**2
print("perturbed symbolic", residual(pert, g, {c: sp.Rational(1, 10), x1: 0, x2: 1, x3: 1}))
