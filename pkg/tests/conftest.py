import numpy as np
import pytest

import fraceig as fe


@pytest.fixture(scope="session")
def stiffness():
    """Session-wide cache of assembled stiffness matrices keyed by grid and order."""
    cache = {}

    def get(n, s, a=-1.0, b=1.0):
        key = (a, b, n, s)
        if key not in cache:
            cache[key] = fe.assemble_stiffness(fe.Domain1D(a, b, n), s)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def mass():
    cache = {}

    def get(n, a=-1.0, b=1.0):
        key = (a, b, n)
        if key not in cache:
            cache[key] = fe.assemble_mass(fe.Domain1D(a, b, n))
        return cache[key]

    return get


@pytest.fixture(scope="session")
def mixed_spectrum(stiffness, mass):
    """Spectra of the mixed pencil on (-1, 1), keyed by (n, mu, k)."""
    cache = {}

    def get(n, mu=0.0, k=20, s1=0.4, s2=0.2):
        key = (n, mu, k, s1, s2)
        if key not in cache:
            A1 = stiffness(n, s1)
            A2 = stiffness(n, s2)
            M = mass(n)
            B = fe.SymmetricMatrix(
                order=n, entries=A2.entries + mu * M.entries, label="B"
            )
            cache[key] = (fe.GenEigProblem(A=A1, B=B).solve(k=k), B)
        return cache[key]

    return get
