import math

import pytest

import cmwave as cw

RHO = 1.0
C_INF = 5000.0
TAU = 1e-13


@pytest.fixture(scope="session")
def cc():
    # Cole-Cole solid with a = 1.5, alpha = 1/2, c_inf = 5 km/s
    g_inf = RHO * (C_INF / math.sqrt(1.5)) ** 2
    return cw.ColeCole(a=1.5, alpha=0.5, tau=TAU, g_inf=g_inf, rho=RHO)


@pytest.fixture(scope="session")
def sls():
    g_inf = RHO * (C_INF / math.sqrt(1.5)) ** 2
    return cw.StandardLinearSolid(a=1.5, tau=TAU, g_inf=g_inf, rho=RHO)


@pytest.fixture(scope="session")
def hn():
    return cw.HavriliakNegami(b=0.5, alpha=1 / 1.3, gamma=1.3 / 2, tau=TAU,
                              g0=RHO * C_INF ** 2, rho=RHO)


@pytest.fixture(scope="session")
def cd():
    return cw.ColeDavidson(b=0.5, gamma=0.5, tau=TAU, g0=RHO * C_INF ** 2,
                           rho=RHO)


@pytest.fixture(scope="session")
def finite_band():
    return cw.make_finiteband_measure(1.0, 1.0, 2.0)


@pytest.fixture(scope="session")
def power_law_half():
    return cw.make_powerlaw_measure(1.0, 0.5)
