from hypothesis import HealthCheck, settings

settings.register_profile("lfactors", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("lfactors")


import mpmath
import pytest


@pytest.fixture(autouse=True)
def _restore_mp_precision():
    prec = mpmath.mp.prec
    yield
    mpmath.mp.prec = prec
