import pytest


@pytest.fixture(autouse=True)
def _clean_conf_env(monkeypatch):
    """Keep the conf-disabling env var from leaking between tests."""
    monkeypatch.delenv("TEXTFORGE_NO_CONF", raising=False)
