from pydantic_settings import BaseSettings
from pydantic import Field
from typing import List, Optional
from functools import lru_cache
from pathlib import Path
import json


PACKAGED_MANIFEST = Path(__file__).resolve().parent / "data" / "manifest.v1.json"


class Settings(BaseSettings):
	cap: int = Field(default=5, alias="MB_CAP")
	budget: int = Field(default=100000, alias="MB_BUDGET")
	strict: bool = Field(default=False, alias="MB_STRICT")
	output_format: str = Field(default="text", alias="MB_FORMAT")  # text|machine
	workers: int = Field(default=1, alias="MB_WORKERS")
	manifest_path: str = Field(default="", alias="MB_MANIFEST")
	kan_fixtures_raw: str = Field(default="Delta0,J", alias="MB_KAN_FIXTURES")
	analysis_cap: int = Field(default=3, alias="MB_ANALYSIS_CAP")
	kan_tries: int = Field(default=64, alias="MB_KAN_TRIES")  # 0 = no cut

	log_level: str = Field(default="INFO", alias="LOG_LEVEL")
	port: int = Field(default=8000, alias="PORT")
	env: str = Field(default="dev", alias="ENV")

	class Config:
		env_file = ".env"
		case_sensitive = False
		populate_by_name = True

	def get_kan_fixtures(self) -> List[str]:
		val = (self.kan_fixtures_raw or "").strip()
		if not val:
			return ["Delta0", "J"]
		# json list first, csv otherwise
		try:
			loaded = json.loads(val)
			if isinstance(loaded, list):
				return [str(x).strip() for x in loaded if str(x).strip()]
		except Exception:
			pass
		return [part.strip() for part in val.split(",") if part.strip()]

	def get_manifest_path(self, override: Optional[str] = None) -> Path:
		raw = (override or self.manifest_path or "").strip()
		if not raw or raw in ("manifest.v1", "v1"):
			return PACKAGED_MANIFEST
		return Path(raw)


@lru_cache()
def get_settings() -> Settings:
	return Settings()
