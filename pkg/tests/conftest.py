import pytest

from app.state import runtime


@pytest.fixture(autouse=True)
def fresh_runtime():
	runtime.reset_from_settings()
	runtime.set_from_dict({"cap": 5, "budget": 100000, "strict": False, "format": "text", "workers": 1, "analysis_cap": 3})
	yield runtime
	runtime.reset_from_settings()
