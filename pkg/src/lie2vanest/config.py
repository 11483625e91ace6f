from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from .exceptions import ConfigError
from .simplicial import DEFAULT_LEVEL_CAP


class GroupName(str, Enum):
    """Bundled matrix groups."""

    SO3 = "so3"
    SU2 = "su2"
    HEIS3 = "heis3"
    RN = "rn"


class CrossedModuleKind(str, Enum):
    """Crossed modules built over a group."""

    TANGENT = "tangent"
    COADJOINT = "coadjoint"


class ExampleName(str, Enum):
    """Worked examples with closed-form answers."""

    COADJOINT = "coadjoint"
    NONE = "none"


class SuiteName(str, Enum):
    """Verification suites, in dependency order."""

    CROSSED_MODULE = "crossed_module"
    SIMPLICIAL = "simplicial"
    SPLITTING = "splitting"
    ALGEBROID = "algebroid"
    HOMOTOPY = "homotopy"
    WEIL = "weil"
    VANEST = "vanest"
    COADJOINT = "coadjoint"


class OutputFormat(str, Enum):
    """Report formats."""

    TEXT = "text"
    JSON = "json"


class Profile(str, Enum):
    """How hard a run samples: a quick smoke run or the full acceptance counts."""

    QUICK = "quick"
    ACCEPTANCE = "acceptance"


SUITE_ORDER: List[SuiteName] = list(SuiteName)
TOLERANCE_KEYS = ("tol_exact", "tol_numdiff", "tol_oracle")

# keys accepted in a config file
CONFIG_KEYS = {
    "group",
    "crossed_module",
    "example",
    "level_cap",
    "samples",
    "seed",
    "tol_exact",
    "tol_numdiff",
    "tol_oracle",
    "suites",
    "format",
    "group_dim",
    "profile",
}


@dataclass
class ToleranceConfig:
    """Residual bounds for exact tangent arithmetic, numerical derivatives and oracles."""

    tol_exact: float = 1e-10
    tol_numdiff: float = 1e-6
    tol_oracle: float = 1e-5

    def __post_init__(self) -> None:
        for name in TOLERANCE_KEYS:
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or value <= 0:
                raise ConfigError(f"{name} must be positive, got {value!r}")
            setattr(self, name, float(value))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tol_exact": self.tol_exact,
            "tol_numdiff": self.tol_numdiff,
            "tol_oracle": self.tol_oracle,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ToleranceConfig":
        if not data:
            raise ConfigError("ToleranceConfig data required")
        return cls(**{key: data[key] for key in TOLERANCE_KEYS if key in data})


@dataclass(frozen=True)
class SampleBudget:
    """Sample counts and level ranges of the checks that draw random data."""

    points: int
    pairs: int
    closure_points: int
    dc_elements: int
    homotopy_level: int
    zigzag_cochains: int
    zigzag_forms: int
    zigzag_level: int
    cochain_map_forms: int
    cochain_map_level: int
    cochain_map_degree: int

    @classmethod
    def for_run(cls, profile: "Profile", samples: int) -> "SampleBudget":
        if profile == Profile.ACCEPTANCE:
            return cls(
                points=max(samples, 100),
                pairs=max(samples, 100),
                closure_points=max(samples, 50),
                dc_elements=max(samples, 20),
                homotopy_level=3,
                zigzag_cochains=20,
                zigzag_forms=10,
                zigzag_level=3,
                cochain_map_forms=10,
                cochain_map_level=4,
                cochain_map_degree=2,
            )
        return cls(
            points=samples,
            pairs=20 * samples,
            closure_points=samples,
            dc_elements=3,
            homotopy_level=2,
            zigzag_cochains=3,
            zigzag_forms=1,
            zigzag_level=3,
            cochain_map_forms=2,
            cochain_map_level=2,
            cochain_map_degree=2,
        )


@dataclass
class RunConfig:
    """Everything a verification run depends on."""

    group: GroupName = GroupName.SO3
    crossed_module: CrossedModuleKind = CrossedModuleKind.COADJOINT
    example: ExampleName = ExampleName.COADJOINT
    level_cap: int = DEFAULT_LEVEL_CAP
    samples: int = 3
    seed: int = 0
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    suites: List[SuiteName] = field(default_factory=lambda: list(SUITE_ORDER))
    format: OutputFormat = OutputFormat.TEXT
    group_dim: Optional[int] = None
    profile: Profile = Profile.QUICK

    def __post_init__(self) -> None:
        try:
            self.group = GroupName(self.group)
            self.crossed_module = CrossedModuleKind(self.crossed_module)
            self.example = ExampleName(self.example)
            self.format = OutputFormat(self.format)
            self.profile = Profile(self.profile)
            self.suites = [SuiteName(suite) for suite in self.suites]
        except ValueError as e:
            raise ConfigError(str(e)) from e

        if not isinstance(self.tolerances, ToleranceConfig):
            self.tolerances = ToleranceConfig.from_dict(self.tolerances)  # type: ignore[arg-type]

        if not 1 <= self.level_cap <= DEFAULT_LEVEL_CAP:
            raise ConfigError(
                f"level_cap must lie in 1..{DEFAULT_LEVEL_CAP}, got {self.level_cap}"
            )
        if self.samples < 1:
            raise ConfigError("samples must be at least 1")
        if self.group_dim is not None and self.group != GroupName.RN:
            raise ConfigError("group_dim only applies to the rn group")
        coadjoint = self.crossed_module == CrossedModuleKind.COADJOINT
        if self.example == ExampleName.COADJOINT and not coadjoint:
            raise ConfigError("the coadjoint example needs the coadjoint crossed module")

    @property
    def ordered_suites(self) -> List[SuiteName]:
        """Selected suites in dependency order, without repeats."""
        return [suite for suite in SUITE_ORDER if suite in self.suites]

    @property
    def budget(self) -> SampleBudget:
        return SampleBudget.for_run(self.profile, self.samples)

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "group": self.group.value,
            "crossed_module": self.crossed_module.value,
            "example": self.example.value,
            "level_cap": self.level_cap,
            "samples": self.samples,
            "seed": self.seed,
            "suites": [suite.value for suite in self.suites],
            "format": self.format.value,
            "group_dim": self.group_dim,
            "profile": self.profile.value,
        }
        data.update(self.tolerances.to_dict())
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        if not data:
            raise ConfigError("RunConfig data required")

        data = dict(data)
        unknown = set(data) - CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        tolerances = {key: data.pop(key) for key in TOLERANCE_KEYS if key in data}
        if tolerances:
            data["tolerances"] = ToleranceConfig.from_dict(tolerances)
        return cls(**data)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RunConfig":
        """Read a flat JSON config file."""
        try:
            data = json.loads(Path(path).read_text())
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"config {path} is not valid JSON: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must hold a JSON object")
        return cls.from_dict(data)

    def merged(self, overrides: Dict[str, Any]) -> "RunConfig":
        """
        A copy with command-line values laid over this config.

        A group override away from ``rn`` drops the file's ``group_dim``.
        """
        data = self.to_dict()
        data.update({key: value for key, value in overrides.items() if value is not None})
        group = overrides.get("group")
        if group is not None and group != GroupName.RN.value:
            data["group_dim"] = None
        return RunConfig.from_dict(data)
