"""Independent dense-matrix oracle for the frozen values in the C++ tests.

Builds the layered Ry/Rz/CZ circuit with Kronecker products (qubit k is bit
k of the basis index) and differentiates by central differences.
"""
import numpy as np

np.set_printoptions(precision=17)


def ry(a):
    c, s = np.cos(a / 2), np.sin(a / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(a):
    return np.diag([np.exp(-0.5j * a), np.exp(0.5j * a)])


def on_qubit(op, q, nq):
    out = np.eye(1)
    for k in reversed(range(nq)):
        out = np.kron(out, op if k == q else np.eye(2))
    return out


def cz(q1, q2, nq):
    d = np.ones(2**nq, dtype=complex)
    for i in range(2**nq):
        if (i >> q1) & 1 and (i >> q2) & 1:
            d[i] = -1
    return np.diag(d)


def state(theta, nq, layers):
    psi = np.zeros(2**nq, dtype=complex)
    psi[0] = 1
    p = 0

    def column(gate):
        nonlocal psi, p
        for q in range(nq):
            psi = on_qubit(gate(theta[p]), q, nq) @ psi
            p += 1

    for _ in range(layers):
        column(ry)
        column(rz)
        for first in (0, 1):
            for q in range(first, nq - 1, 2):
                psi = cz(q, q + 1, nq) @ psi
    column(ry)
    column(rz)
    return psi


def amp_f(x, a, nq, layers, offset):
    psi = state(x[1:], nq, layers)
    h = psi[: a.shape[0]]
    return x[0] * np.real(np.vdot(h, a @ h)) + offset


def prob_f(x, b, nq, layers, offset):
    p = np.abs(state(x[1:], nq, layers)) ** 2
    h = p[: b.shape[0]]
    return x[0] * h @ b @ h + offset


def fd_grad(f, x, h=1e-5):
    g = np.zeros_like(x)
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g


def fd_hess(f, x, h=1e-4):
    n = len(x)
    H = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            ei = np.zeros(n)
            ej = np.zeros(n)
            ei[i] = h
            ej[j] = h
            H[i, j] = (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) / (4 * h * h)
    return H


if __name__ == "__main__":
    theta = np.array([0.3, -1.1, 0.7, 2.0, -0.4, 0.9, 1.3, -2.2])
    psi = state(theta, 2, 1)
    print("state nq=2 l=1:", [(z.real, z.imag) for z in psi])
    a = np.array([[1.0, 0.5 - 0.25j, 0.0, 0.2j],
                  [0.5 + 0.25j, -0.3, 0.1, 0.0],
                  [0.0, 0.1, 0.8, -0.6 + 0.1j],
                  [-0.2j, 0.0, -0.6 - 0.1j, 0.4]])
    x = np.concatenate([[1.7], theta])
    print("amp value:", repr(amp_f(x, a, 2, 1, -0.25)))
    print("amp grad:", repr(fd_grad(lambda v: amp_f(v, a, 2, 1, -0.25), x)))
    b = np.array([[0.6, -0.2, 0.3], [-0.2, 1.1, 0.05], [0.3, 0.05, -0.4]])
    print("prob value:", repr(prob_f(x, b, 2, 1, 0.5)))
    print("prob grad:", repr(fd_grad(lambda v: prob_f(v, b, 2, 1, 0.5), x)))
    hp = fd_hess(lambda v: prob_f(v, b, 2, 1, 0.5), x)
    print("prob hess diag:", repr(np.diag(hp)))
    print("prob hess row 3:", repr(hp[3]))
