from typing import Dict, Optional
from .config import Settings, get_settings


class RuntimeOverrides:
	"""Per-run values that CLI flags and API requests may override."""

	def __init__(self) -> None:
		self.cap: int = 5
		self.budget: int = 100000
		self.strict: bool = False
		self.output_format: str = "text"
		self.workers: int = 1
		self.analysis_cap: int = 3
		self.kan_fixtures: tuple = ("Delta0", "J")
		self.kan_tries: int = 64

	def reset_from_settings(self, settings: Optional[Settings] = None) -> None:
		settings = settings or get_settings()
		self.cap = int(settings.cap)
		self.budget = int(settings.budget)
		self.strict = bool(settings.strict)
		self.output_format = (settings.output_format or "text").lower()
		self.workers = max(1, int(settings.workers))
		self.analysis_cap = int(settings.analysis_cap)
		self.kan_fixtures = tuple(settings.get_kan_fixtures())
		self.kan_tries = max(0, int(settings.kan_tries))

	def to_dict(self) -> Dict[str, object]:
		return {
			"cap": self.cap,
			"budget": self.budget,
			"strict": self.strict,
			"format": self.output_format,
			"workers": self.workers,
			"analysis_cap": self.analysis_cap,
			"kan_fixtures": list(self.kan_fixtures),
			"kan_tries": self.kan_tries,
		}

	def set_from_dict(self, data: Optional[Dict[str, object]]) -> None:
		if data is None:
			return
		for key in ("cap", "budget", "workers", "analysis_cap", "kan_tries"):
			if key in data and data[key] is not None:
				try:
					setattr(self, key, int(data[key]))  # type: ignore[arg-type]
				except Exception:
					pass
		if "strict" in data and data["strict"] is not None:
			self.strict = bool(data["strict"])
		if "format" in data and data["format"]:
			fmt = str(data["format"]).lower()
			if fmt in ("text", "machine"):
				self.output_format = fmt
		if "kan_fixtures" in data and data["kan_fixtures"]:
			names = data["kan_fixtures"]
			if isinstance(names, str):
				names = [part.strip() for part in names.split(",") if part.strip()]
			self.kan_fixtures = tuple(str(x) for x in names)  # type: ignore[union-attr]
		self.workers = max(1, self.workers)
		self.kan_tries = max(0, self.kan_tries)


runtime = RuntimeOverrides()
runtime.reset_from_settings()
