"""Shared test helpers: complex Gaussian draws, random channels, the
independent Rayleigh-quotient maximization oracle, and the acceptance
summary hook that prints one pass/fail line per criterion.
"""

import numpy as np
from scipy.optimize import minimize

from misome.capacity import ChannelRealization


def crandn(rng, *shape):
    """i.i.d. CN(0,1) samples."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_channel(rng, n_t, n_e):
    return ChannelRealization(h_r=crandn(rng, n_t), H_e=crandn(rng, n_e, n_t))


def capacity_pair(P, ch):
    """The (A, B) matrices whose top generalized eigenvalue sets the rate."""
    n = ch.n_t
    A = np.eye(n) + P * np.outer(ch.h_r, ch.h_r.conj())
    B = np.eye(n) + P * (ch.H_e.conj().T @ ch.H_e)
    return A, B


def rayleigh_quotient_max_oracle(A, B, rng, n_samples=100_000):
    """Independent maximizer of psi^H A psi / psi^H B psi.

    Brute force over random unit directions followed by quasi-Newton
    ascent on the scale-invariant quotient; deliberately avoids any
    eigendecomposition so it can cross-check the solver.
    """
    n = A.shape[0]
    Z = crandn(rng, n_samples, n)
    num = np.einsum("ij,jk,ik->i", Z.conj(), A, Z).real
    den = np.einsum("ij,jk,ik->i", Z.conj(), B, Z).real
    quotients = num / den
    x0 = Z[int(np.argmax(quotients))]

    def neg_quotient(x):
        psi = x[:n] + 1j * x[n:]
        return -(np.vdot(psi, A @ psi).real / np.vdot(psi, B @ psi).real)

    res = minimize(
        neg_quotient,
        np.concatenate([x0.real, x0.imag]),
        method="BFGS",
        options=dict(gtol=1e-12, maxiter=2000),
    )
    return max(float(quotients.max()), float(-res.fun))


_ACCEPTANCE_LINES = []


def record_criterion(name, passed, detail=""):
    """Record an acceptance criterion outcome and assert it."""
    status = "PASS" if passed else "FAIL"
    line = f"[{status}] {name}"
    if detail:
        line += f"  ({detail})"
    _ACCEPTANCE_LINES.append(line)
    assert passed, f"{name}: {detail}"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
