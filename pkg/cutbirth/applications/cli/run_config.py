"""
Run configuration for the command-line frontend.

A configuration is given as a JSON document, a TOML document or the flag list
of a command line. All three end up in the same validated `RunConfig`.

JSON schema (coefficients lowest degree first, or a preset name)::

    {"potential": [0, 0, 0.5], "mode": "solve", "T": 1.0}
    {"potential": "birth-demo", "mode": "critical", "bracket": [0.05, 5]}
    {"potential": "birth-demo", "mode": "sweep", "trange": [0.2, 0.6, 41]}
    {"potential": "birth-demo", "mode": "gas", "T": 0.4, "N": 200}

Flag list::

    solve --potential 0,0,0.5 --temp 1.0
    sweep --potential birth-demo --trange 0.2,0.6,41 --window 0.08
"""
import json
import logging
import shlex

from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import tomlkit

from dataclasses_json import dataclass_json
from tomlkit.exceptions import ParseError as TomlParseError

from cutbirth.core.default.constants import DEFAULT_BRACKET, WINDOW_FRACTION
from cutbirth.core.default.presets import PRESETS
from cutbirth.core.equilibrium import Potential
from cutbirth.core.errors import InvalidPotential, IoError, ParseError, ValidationError

logger = logging.getLogger(__name__)

MODES = ("solve", "critical", "sweep", "gas")

# command-line flag -> configuration key
FLAGS = {
    "--potential": "potential",
    "--temp": "T",
    "--cuts": "cuts",
    "--bracket": "bracket",
    "--trange": "trange",
    "--window": "window",
    "--n": "N",
    "--tol": "tol",
    "--out": "out",
}
SWITCHES = {"--seed-occupancy": "seed_occupancy"}


@dataclass_json
@dataclass
class RunConfig:
    """
    Validated run configuration.

    Attributes
    ----------
    potential : list of float
        Coefficients of V, lowest degree first.
    mode : str
        One of solve, critical, sweep, gas.
    T : float, optional
        Temperature for solve and gas.
    bracket : list of float, optional
        (T_lo, T_hi) searched for T_c.
    trange : list of float, optional
        (T_lo, T_hi, points) of a sweep.
    cuts : int, optional
        Forced cut count for solve.
    N : int, optional
        Particle count for gas.
    tol : float, optional
        Solver tolerance override.
    window : float
        Fit window around T_c as a fraction of T_c.
    seed_occupancy : bool
        Seed the newborn well before relaxing the gas.
    out : str, optional
        Output CSV path; standard output when absent.
    """

    potential: List[float]
    mode: str
    T: Optional[float] = None
    bracket: Optional[List[float]] = None
    trange: Optional[List[float]] = None
    cuts: Optional[int] = None
    N: Optional[int] = None
    tol: Optional[float] = None
    window: float = WINDOW_FRACTION
    seed_occupancy: bool = False
    out: Optional[str] = None

    @property
    def model(self) -> Potential:
        return Potential(tuple(self.potential))


KEYS = tuple(f.name for f in fields(RunConfig))


def _number_list(value: Any, key: str) -> List[float]:
    if isinstance(value, str):
        value = [v for v in value.split(",") if v.strip()]
    if not isinstance(value, (list, tuple)):
        raise ValidationError(f"expected a list of numbers, got {value!r}", key=key)
    try:
        return [float(v) for v in value]
    except (TypeError, ValueError):
        raise ValidationError(f"expected numbers, got {value!r}", key=key)


def _potential(value: Any) -> List[float]:
    if isinstance(value, str) and value.strip() in PRESETS:
        coeffs = list(PRESETS[value.strip()])
    else:
        coeffs = _number_list(value, "potential")
    try:
        return list(Potential(tuple(coeffs)).coeffs)
    except InvalidPotential as error:
        raise ValidationError(str(error), key="potential")


def _positive(value: Any, key: str, kind: type = float) -> Union[int, float]:
    try:
        number = kind(value)
    except (TypeError, ValueError):
        raise ValidationError(f"expected a {kind.__name__}, got {value!r}", key=key)
    if kind is int and float(value) != number:
        raise ValidationError(f"expected an integer, got {value!r}", key=key)
    if not number > 0:
        raise ValidationError(f"must be positive, got {value!r}", key=key)
    return number


def _flag(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.lower() in ("true", "false"):
        return value.lower() == "true"
    raise ValidationError(f"expected true or false, got {value!r}", key="seed_occupancy")


def from_mapping(data: Dict[str, Any]) -> RunConfig:
    """
    Validate a plain mapping and fill defaults.

    Raises
    ------
    ParseError
        For unknown or missing keys.
    ValidationError
        For values that violate the schema or the potential invariants.
    """
    unknown = sorted(set(data) - set(KEYS))
    if unknown:
        raise ParseError(f"unknown key, expected one of {', '.join(KEYS)}", key=unknown[0])
    for required in ("potential", "mode"):
        if data.get(required) is None:
            raise ParseError("missing required key", key=required)

    mode = str(data["mode"])
    if mode not in MODES:
        raise ValidationError(f"mode must be one of {', '.join(MODES)}, got '{mode}'", key="mode")

    values: Dict[str, Any] = {"potential": _potential(data["potential"]), "mode": mode}
    if data.get("T") is not None:
        values["T"] = float(_positive(data["T"], "T"))
    if data.get("bracket") is not None:
        bracket = _number_list(data["bracket"], "bracket")
        if len(bracket) != 2 or not 0 < bracket[0] < bracket[1]:
            raise ValidationError(f"need 0 < lo < hi, got {bracket}", key="bracket")
        values["bracket"] = bracket
    if data.get("trange") is not None:
        trange = _number_list(data["trange"], "trange")
        if len(trange) != 3 or not 0 < trange[0] < trange[1] or trange[2] < 2 or trange[2] != int(trange[2]):
            raise ValidationError(
                f"need lo,hi,n with 0 < lo < hi and integer n >= 2, got {trange}", key="trange"
            )
        values["trange"] = trange
    if data.get("cuts") is not None:
        cuts = _positive(data["cuts"], "cuts", int)
        if cuts not in (1, 2):
            raise ValidationError(f"cut count must be 1 or 2, got {cuts}", key="cuts")
        values["cuts"] = cuts
    if data.get("N") is not None:
        values["N"] = int(_positive(data["N"], "N", int))
    if data.get("tol") is not None:
        values["tol"] = float(_positive(data["tol"], "tol"))
    if data.get("window") is not None:
        values["window"] = float(_positive(data["window"], "window"))
    if data.get("seed_occupancy") is not None:
        values["seed_occupancy"] = _flag(data["seed_occupancy"])
    if data.get("out") is not None:
        values["out"] = str(data["out"])

    if mode in ("solve", "gas") and "T" not in values:
        raise ParseError(f"mode '{mode}' needs a temperature", key="T")
    if mode == "sweep" and "trange" not in values:
        raise ParseError("mode 'sweep' needs a temperature range", key="trange")
    if mode == "gas" and "N" not in values:
        raise ParseError("mode 'gas' needs a particle count", key="N")
    if mode == "critical" and "bracket" not in values:
        values["bracket"] = list(DEFAULT_BRACKET)

    config = RunConfig(**values)
    logger.info(f"run configuration: {config.to_json()}")
    return config


def _parse_flags(tokens: List[str]) -> Dict[str, Any]:
    data: Dict[str, Any] = {}
    position = 0
    if tokens and not tokens[0].startswith("-"):
        data["mode"] = tokens[0]
        position = 1
    while position < len(tokens):
        token = tokens[position]
        name, _, inline = token.partition("=")
        if name in SWITCHES:
            data[SWITCHES[name]] = True
            position += 1
            continue
        if name not in FLAGS:
            raise ParseError(f"unknown flag '{name}'", key=name.lstrip("-"))
        if inline:
            value = inline
            position += 1
        elif position + 1 < len(tokens):
            value = tokens[position + 1]
            position += 2
        else:
            raise ParseError(f"flag '{name}' needs a value", key=FLAGS[name])
        data[FLAGS[name]] = value
    return data


def parse_config(source: str) -> RunConfig:
    """
    Parse a JSON document, a TOML document or a flag list into a RunConfig.

    Parameters
    ----------
    source : str
        The configuration text.

    Returns
    -------
    RunConfig

    Raises
    ------
    ParseError
        For malformed input, with line or key context.
    ValidationError
        For values violating the schema.
    """
    text = source.strip()
    if text.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as error:
            raise ParseError(error.msg, line=error.lineno)
        if not isinstance(data, dict):
            raise ParseError("expected a JSON object")
        return from_mapping(data)

    try:
        tokens = shlex.split(text)
    except ValueError as error:
        raise ParseError(str(error))
    if not tokens or tokens[0] in MODES or tokens[0].startswith("--"):
        return from_mapping(_parse_flags(tokens))

    try:
        document = tomlkit.parse(text)
    except TomlParseError as error:
        raise ParseError(str(error), line=error.line)
    return from_mapping(document.unwrap())


def load_config(path: Union[str, Path]) -> RunConfig:
    """Read and parse a configuration file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as error:
        raise IoError(f"cannot read configuration {path}: {error}")
    return parse_config(text)
