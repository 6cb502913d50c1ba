"""Configuration loader for fracperc using Pydantic settings."""

from __future__ import annotations

import os
import tomllib
from functools import lru_cache
from pathlib import Path
from typing import Any, Literal

from pydantic import AliasChoices, BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

ENV_PREFIX = "FRACPERC_"
MEMORY_BUDGET_ENV_VAR = "FRACPERC_MEMORY_BUDGET"


def _env_project_root(var_name: str) -> Path | None:
    """Resolve an override path from the provided environment variable."""

    raw_value = os.getenv(var_name)
    if not raw_value:
        return None
    return Path(raw_value).expanduser().resolve()


def _detect_project_root() -> Path:
    """Return the repository root, honoring environment overrides when set."""

    for env_var in ("FRACPERC_PROJECT_ROOT", "FRACPERC_RUNTIME__PROJECT_ROOT"):
        candidate = _env_project_root(env_var)
        if candidate:
            return candidate

    resolved = Path(__file__).resolve()
    for parent in resolved.parents:
        marker = parent / "pyproject.toml"
        if marker.exists() and (parent / "src").exists():
            return parent
    # Installed wheels have no pyproject; src/fracperc/settings/.. => parents[3].
    return resolved.parents[3]


PROJECT_ROOT = _detect_project_root()
CONFIG_DIR = PROJECT_ROOT / "config"
DEFAULT_CONFIG_FILE = CONFIG_DIR / "settings.default.toml"
LOCAL_CONFIG_FILE = CONFIG_DIR / "settings.local.toml"
SETTINGS_FILE_ENV_VAR = "FRACPERC_SETTINGS_FILE"


def _resolve_config_path(raw_path: str | None) -> Path | None:
    """Return an absolute config path from user input."""

    if not raw_path:
        return None
    candidate = Path(raw_path).expanduser()
    if not candidate.is_absolute():
        candidate = (PROJECT_ROOT / candidate).resolve()
    return candidate


def _config_file_priority(include_missing: bool = False) -> tuple[Path, ...]:
    """Return config files in descending precedence order."""

    ordered: list[Path] = []
    env_override = _resolve_config_path(os.getenv(SETTINGS_FILE_ENV_VAR))
    if env_override:
        ordered.append(env_override)
    ordered.append(LOCAL_CONFIG_FILE)
    ordered.append(DEFAULT_CONFIG_FILE)
    if include_missing:
        return tuple(ordered)
    return tuple(path for path in ordered if path.exists())


class TomlConfigSettingsSource(PydanticBaseSettingsSource):
    """Pydantic settings source that loads values from a TOML file."""

    def __init__(self, settings_cls: type[BaseSettings], path: Path) -> None:
        super().__init__(settings_cls)
        self.path = path
        self._data: dict[str, Any] | None = None

    def _load(self) -> dict[str, Any]:
        if self._data is not None:
            return self._data
        if not self.path.exists():
            self._data = {}
            return self._data
        try:
            with self.path.open("rb") as handle:
                self._data = tomllib.load(handle)
        except tomllib.TOMLDecodeError as exc:  # pragma: no cover - invalid files surface immediately
            raise ValueError(f"Invalid TOML syntax in {self.path}") from exc
        return self._data

    def __call__(self) -> dict[str, Any]:  # pragma: no cover - trivial wrapper
        return self._load()

    def get_field_value(self, field_name: str, field):  # pragma: no cover - passthrough helper
        data = self._load()
        return data.get(field_name), field_name in data


class RuntimeSettings(BaseSettings):
    """Process-level runtime controls."""

    model_config = SettingsConfigDict(extra="ignore", populate_by_name=True)

    log_level: str = Field(
        default="INFO",
        validation_alias=AliasChoices("LOG_LEVEL", "RUNTIME__LOG_LEVEL"),
    )


class BudgetSettings(BaseSettings):
    """Resource ceilings checked before any large allocation."""

    model_config = SettingsConfigDict(extra="ignore", populate_by_name=True)

    max_retained_cubes: int = Field(
        default=20_000_000,
        gt=0,
        validation_alias=AliasChoices(MEMORY_BUDGET_ENV_VAR, "BUDGET__MAX_RETAINED_CUBES"),
    )
    max_grid_lines: int = Field(
        default=4_294_967_296,
        gt=0,
        validation_alias=AliasChoices("BUDGET_MAX_GRID_LINES", "BUDGET__MAX_GRID_LINES"),
    )
    max_product_cubes: int = Field(
        default=5_000_000,
        gt=0,
        validation_alias=AliasChoices("BUDGET_MAX_PRODUCT_CUBES", "BUDGET__MAX_PRODUCT_CUBES"),
    )
    max_pairs: int = Field(
        default=200_000_000,
        gt=0,
        validation_alias=AliasChoices("BUDGET_MAX_PAIRS", "BUDGET__MAX_PAIRS"),
    )


class SimulationSettings(BaseSettings):
    """Numerical defaults shared by the analysis modules."""

    model_config = SettingsConfigDict(extra="ignore", populate_by_name=True)

    slice_epsilon: float = Field(
        default=0.05,
        gt=0.0,
        lt=0.1,
        validation_alias=AliasChoices("SLICE_EPSILON", "SIMULATION__SLICE_EPSILON"),
    )
    sum_epsilon: float = Field(
        default=0.1,
        gt=0.0,
        lt=1.0,
        validation_alias=AliasChoices("SUM_EPSILON", "SIMULATION__SUM_EPSILON"),
    )
    theta: float = Field(
        default=0.2,
        validation_alias=AliasChoices("THETA", "SIMULATION__THETA"),
    )
    density_exponent: float = Field(
        default=1.0,
        gt=0.0,
        le=2.0,
        validation_alias=AliasChoices("DENSITY_EXPONENT", "SIMULATION__DENSITY_EXPONENT"),
    )
    t_grid_exponent: float = Field(
        default=1.0,
        gt=0.0,
        validation_alias=AliasChoices("T_GRID_EXPONENT", "SIMULATION__T_GRID_EXPONENT"),
    )
    merge_tolerance: float = Field(
        default=1e-12,
        ge=0.0,
        validation_alias=AliasChoices("MERGE_TOLERANCE", "SIMULATION__MERGE_TOLERANCE"),
    )
    incidence_slack: float = Field(
        default=1e-12,
        ge=0.0,
        validation_alias=AliasChoices("INCIDENCE_SLACK", "SIMULATION__INCIDENCE_SLACK"),
    )
    workers: int = Field(
        default=1,
        ge=1,
        validation_alias=AliasChoices("WORKERS", "SIMULATION__WORKERS"),
    )
    confidence: float = Field(
        default=0.99,
        gt=0.0,
        lt=1.0,
        validation_alias=AliasChoices("CONFIDENCE", "SIMULATION__CONFIDENCE"),
    )

    @model_validator(mode="after")
    def _validate_theta(self) -> "SimulationSettings":
        if not 0.0 < self.theta < 0.7853981633974483:
            raise ValueError("simulation.theta must lie in (0, pi/4)")
        return self


class Threshold(BaseModel):
    """A verdict threshold together with where its value came from."""

    value: float
    provenance: str = "provisional"


DEFAULT_THRESHOLDS: dict[str, Threshold] = {
    "dimension_slope_tolerance": Threshold(value=0.10, provenance="acceptance"),
    "min_surviving_seeds": Threshold(value=20, provenance="acceptance"),
    "projection_slope_tolerance": Threshold(value=0.10, provenance="acceptance"),
    "growth_pass_rate": Threshold(value=0.95, provenance="acceptance"),
    "growth_ratio_rate": Threshold(value=0.90, provenance="acceptance"),
    "growth_ratio_factor": Threshold(value=2.0, provenance="acceptance"),
    "hoeffding_se_multiplier": Threshold(value=3.0, provenance="acceptance"),
    "adjust_tolerance": Threshold(value=1e-9, provenance="acceptance"),
    "sum_certificate_min_length": Threshold(value=0.02, provenance="acceptance"),
    "sum_certificate_gap": Threshold(value=0.3, provenance="acceptance"),
    "sum_certificate_rate": Threshold(value=0.5, provenance="provisional"),
    "distance_certificate_min_length": Threshold(value=0.01, provenance="provisional"),
    "distance_certificate_gap": Threshold(value=0.2, provenance="acceptance"),
    "distance_certificate_rate": Threshold(value=0.5, provenance="provisional"),
}


class ThresholdSettings(BaseSettings):
    """Verdict thresholds for the statistical recipes."""

    model_config = SettingsConfigDict(extra="ignore", populate_by_name=True)

    values: dict[str, Threshold] = Field(
        default_factory=lambda: dict(DEFAULT_THRESHOLDS),
        validation_alias=AliasChoices("THRESHOLDS_VALUES", "THRESHOLDS__VALUES"),
    )

    @field_validator("values", mode="after")
    @classmethod
    def _fill_defaults(cls, value: dict[str, Threshold]) -> dict[str, Threshold]:
        merged = dict(DEFAULT_THRESHOLDS)
        merged.update(value)
        return merged

    def value(self, name: str) -> float:
        """Return the numeric value of ``name``; unknown names raise ``KeyError``."""

        return self.values[name].value


class ObservabilitySettings(BaseSettings):
    """Logging configuration."""

    model_config = SettingsConfigDict(extra="ignore", populate_by_name=True)

    structured_logging: bool = Field(
        default=False,
        validation_alias=AliasChoices("OBS_STRUCTURED_LOGGING", "OBSERVABILITY__STRUCTURED_LOGGING"),
    )
    service_name: str = Field(
        default="fracperc",
        validation_alias=AliasChoices("OBS_SERVICE_NAME", "OBSERVABILITY__SERVICE_NAME"),
    )


class OutputSettings(BaseSettings):
    """Where and how experiment records are written."""

    model_config = SettingsConfigDict(extra="ignore", populate_by_name=True)

    directory: Path = Field(
        default=Path("data/runs"),
        validation_alias=AliasChoices("OUTPUT_DIRECTORY", "OUTPUT__DIRECTORY"),
    )
    format: Literal["csv", "json"] = Field(
        default="csv",
        validation_alias=AliasChoices("OUTPUT_FORMAT", "OUTPUT__FORMAT"),
    )


class Settings(BaseSettings):
    """Top-level configuration model with nested sections for each subsystem."""

    project_root: Path = Field(
        default=PROJECT_ROOT,
        validation_alias=AliasChoices("PROJECT_ROOT", "RUNTIME__PROJECT_ROOT", "FRACPERC_RUNTIME__PROJECT_ROOT"),
    )
    runtime: RuntimeSettings = Field(default_factory=RuntimeSettings)
    budget: BudgetSettings = Field(default_factory=BudgetSettings)
    simulation: SimulationSettings = Field(default_factory=SimulationSettings)
    thresholds: ThresholdSettings = Field(default_factory=ThresholdSettings)
    observability: ObservabilitySettings = Field(default_factory=ObservabilitySettings)
    output: OutputSettings = Field(default_factory=OutputSettings)
    config_files: tuple[Path, ...] = Field(default_factory=tuple, exclude=True)

    model_config = SettingsConfigDict(
        env_prefix=ENV_PREFIX,
        env_nested_delimiter="__",
        case_sensitive=False,
        extra="ignore",
        populate_by_name=True,
    )

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings,
        env_settings,
        dotenv_settings,
        file_secret_settings,
    ):
        """Extend settings sources with TOML-based config files."""

        config_sources = [TomlConfigSettingsSource(settings_cls, path) for path in _config_file_priority()]
        return (
            init_settings,
            env_settings,
            dotenv_settings,
            *config_sources,
            file_secret_settings,
        )

    @model_validator(mode="after")
    def _resolve_paths(self) -> "Settings":
        """Normalize relative paths once the model is initialised."""

        if not self.output.directory.is_absolute():
            output_update = {"directory": (self.project_root / self.output.directory).resolve()}
            object.__setattr__(self, "output", self.output.model_copy(update=output_update))
        return self

    @model_validator(mode="after")
    def _apply_memory_budget(self) -> "Settings":
        """Honor the single memory-budget variable over TOML-provided budgets."""

        raw = os.getenv(MEMORY_BUDGET_ENV_VAR)
        if raw is None:
            return self
        try:
            budget = int(float(raw))
        except ValueError as exc:
            raise ValueError(f"{MEMORY_BUDGET_ENV_VAR} must be a number, got {raw!r}") from exc
        if budget <= 0:
            raise ValueError(f"{MEMORY_BUDGET_ENV_VAR} must be positive")
        object.__setattr__(self, "budget", self.budget.model_copy(update={"max_retained_cubes": budget}))
        return self

    @property
    def log_level(self) -> str:
        """str: Effective logging level for the running process."""

        return self.runtime.log_level


def _load_settings() -> Settings:
    """Load settings from env vars and the TOML layers."""

    config_files = _config_file_priority()
    return Settings(config_files=config_files)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Return cached settings."""

    return _load_settings()


def reload_settings() -> Settings:
    """Clear the cached settings and reload from disk."""

    get_settings.cache_clear()
    return get_settings()


__all__ = [
    "DEFAULT_THRESHOLDS",
    "MEMORY_BUDGET_ENV_VAR",
    "PROJECT_ROOT",
    "Settings",
    "Threshold",
    "get_settings",
    "reload_settings",
]
