"""Flat key=value run configuration files.

One pair per line, ``#`` starts a comment.  Recognized keys:

    n, l, alpha, dt (number or "auto"), t_final, ic (repeatable),
    observe_every, out_dir, seed

``ic`` values are space-separated descriptors, e.g.::

    ic = soliton c=1 theta=0 x0=0 y0=0
    ic = cosine a=0.5 kx=1 ky=0
    ic = constant v=2.0

Unknown keys and out-of-range values are rejected outright.
"""

from __future__ import annotations

from .diagnostics import SolitonSpec
from .errors import ConfigParseError, ConfigValidationError
from .experiments import ConstantField, CosineMode, RunConfig

KNOWN_KEYS = {"n", "l", "alpha", "dt", "t_final", "ic", "observe_every", "out_dir", "seed"}
REQUIRED_KEYS = ("n", "t_final")

_IC_PARAMS = {
    "soliton": {"c": 1.0, "theta": 0.0, "x0": 0.0, "y0": 0.0},
    "cosine": {"a": None, "kx": 1, "ky": 0},
    "constant": {"v": None},
}


def _parse_ic(value: str, line_no: int):
    tokens = value.split()
    if not tokens:
        raise ConfigParseError("empty ic descriptor", line=line_no)
    kind = tokens[0]
    if kind not in _IC_PARAMS:
        raise ConfigParseError(
            f"unknown ic kind {kind!r} (expected soliton, cosine or constant)",
            line=line_no,
        )
    params = dict(_IC_PARAMS[kind])
    for token in tokens[1:]:
        if "=" not in token:
            raise ConfigParseError(f"ic parameter {token!r} is not key=value", line=line_no)
        key, _, raw = token.partition("=")
        if key not in params:
            raise ConfigParseError(f"unknown {kind} parameter {key!r}", line=line_no)
        try:
            params[key] = int(raw) if key in ("kx", "ky") else float(raw)
        except ValueError:
            raise ConfigParseError(f"bad number {raw!r} for {key}", line=line_no) from None
    missing = [k for k, v in params.items() if v is None]
    if missing:
        raise ConfigParseError(f"{kind} needs {missing[0]}=<value>", line=line_no)
    if kind == "soliton":
        return SolitonSpec(c=params["c"], theta=params["theta"], x0=params["x0"], y0=params["y0"])
    if kind == "cosine":
        return CosineMode(amplitude=params["a"], kx=params["kx"], ky=params["ky"])
    return ConstantField(value=params["v"])


def _convert(key: str, raw: str, line_no: int):
    try:
        if key in ("n", "observe_every", "seed"):
            return int(raw)
        if key in ("l", "alpha", "t_final"):
            return float(raw)
        if key == "dt":
            return "auto" if raw.lower() == "auto" else float(raw)
        return raw  # out_dir
    except ValueError:
        raise ConfigParseError(f"bad value {raw!r} for key {key!r}", line=line_no) from None


def _validate(values: dict) -> None:
    checks = (
        ("n", lambda v: v >= 1, "must be an integer >= 1"),
        ("l", lambda v: v > 0, "must be positive"),
        ("alpha", lambda v: 0 < v <= 2, "must lie in (0, 2]"),
        ("t_final", lambda v: v >= 0, "must be >= 0"),
        ("dt", lambda v: v == "auto" or v > 0, 'must be positive or "auto"'),
        ("observe_every", lambda v: v >= 1, "must be an integer >= 1"),
    )
    for key, ok, message in checks:
        if key in values and not ok(values[key]):
            raise ConfigValidationError(f"{key} {message}, got {values[key]!r}", key=key)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a config file's contents into a RunConfig.

    Raises:
        ConfigParseError: malformed line, duplicate key, bad literal.
        ConfigValidationError: unknown key, missing required key, value
            out of range.
    """
    values: dict = {}
    ics = []
    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"expected key = value, got {line!r}", line=line_no)
        key, _, raw = line.partition("=")
        key = key.strip().lower()
        raw = raw.strip()
        if key not in KNOWN_KEYS:
            raise ConfigValidationError(
                f"unknown key {key!r} on line {line_no}", key=key
            )
        if key == "ic":
            ics.append(_parse_ic(raw, line_no))
            continue
        if key in values:
            raise ConfigParseError(f"duplicate key {key!r}", line=line_no)
        values[key] = _convert(key, raw, line_no)

    for key in REQUIRED_KEYS:
        if key not in values:
            raise ConfigValidationError(f"missing required key {key!r}", key=key)
    _validate(values)
    return RunConfig(ic=ics, **values)
