"""
Selection and parameters of the acceptance benchmarks, read from a TOML file.
"""
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional, Union

import tomlkit

from cutbirth.core.default.constants import POINTS_PER_SIDE, WINDOW_FRACTION
from cutbirth.core.errors import IoError


@dataclass
class GaussianConfig:
    active: Optional[bool] = True
    temperatures: List[float] = field(default_factory=lambda: [0.25, 1.0, 4.0])


@dataclass
class CriticalityConfig:
    active: Optional[bool] = True
    preset: str = "birth-demo"
    bracket: List[float] = field(default_factory=lambda: [0.05, 5.0])


@dataclass
class TransitionConfig:
    active: Optional[bool] = True
    preset: str = "birth-demo"
    window: float = WINDOW_FRACTION
    points_per_side: int = POINTS_PER_SIDE
    maxwell_points: int = 9


@dataclass
class GeometryConfig:
    active: Optional[bool] = True
    preset: str = "birth-demo"
    ratios: List[float] = field(default_factory=lambda: [1.01, 1.001, 1.0001])
    width_points: int = 12


@dataclass
class GasBenchConfig:
    active: Optional[bool] = True
    preset: str = "birth-demo"
    N: int = 200
    ratios: List[float] = field(default_factory=lambda: [0.9, 1.1])


@dataclass
class InvariantsConfig:
    active: Optional[bool] = True
    count: int = 20
    seed: int = 0


@dataclass
class BenchConfig:
    """Which acceptance benchmarks run, and with which parameters."""

    gaussian: GaussianConfig = field(default_factory=GaussianConfig)
    criticality: CriticalityConfig = field(default_factory=CriticalityConfig)
    transition: TransitionConfig = field(default_factory=TransitionConfig)
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    gas: GasBenchConfig = field(default_factory=GasBenchConfig)
    invariants: InvariantsConfig = field(default_factory=InvariantsConfig)

    @classmethod
    def from_toml(cls, config_file: Union[Path, str]):
        if isinstance(config_file, str):
            config_file = Path(config_file)
        config_dict = read_config(config_file).unwrap()
        return cls.from_dict(config_dict)

    @classmethod
    def from_dict(cls, config_dict: dict):
        return cls(
            gaussian=GaussianConfig(**config_dict.get("gaussian", {})),
            criticality=CriticalityConfig(**config_dict.get("criticality", {})),
            transition=TransitionConfig(**config_dict.get("transition", {})),
            geometry=GeometryConfig(**config_dict.get("geometry", {})),
            gas=GasBenchConfig(**config_dict.get("gas", {})),
            invariants=InvariantsConfig(**config_dict.get("invariants", {})),
        )

    def to_dict(self):
        return asdict(self)


def read_config(config_file: Path) -> tomlkit.TOMLDocument:
    """Read the configuration file"""
    if not config_file.exists():
        raise IoError(f"Config file {config_file} does not exist")
    with open(config_file, "r") as f:
        return tomlkit.load(f)
