"""Tests for opkit. Run with

    python manage.py test --settings=opkit_site.test_settings
"""

from hypothesis import HealthCheck, settings

settings.register_profile(
    'opkit',
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile('opkit')
