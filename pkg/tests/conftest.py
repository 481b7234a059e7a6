import pytest
from mpmath import mp

from e6lax.weight import default_params
from e6lax.checks import CheckEnv, run_checks


@pytest.fixture(scope="session")
def params():
    p = default_params()
    mp.prec = p.precision
    return p


@pytest.fixture(scope="session")
def env(params):
    return CheckEnv(params, seed=0)


@pytest.fixture(scope="session")
def ctx(env):
    return env.ctx()


@pytest.fixture(scope="session")
def records(env):
    """The full check registry, run once per session, keyed by id."""
    return {r.check_id: r for r in run_checks(env)}
