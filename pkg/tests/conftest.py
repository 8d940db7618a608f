import os
import sys

from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

import acceptance_lib  # noqa: E402  (installs the session-wide n >= m audit)

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def pytest_sessionfinish(session, exitstatus):
    if acceptance_lib.AUDIT.violations and exitstatus == 0:
        session.exitstatus = 1
