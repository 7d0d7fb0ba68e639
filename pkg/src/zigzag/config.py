"""key=value configuration files.

Recognized keys (all optional)::

    precision        = 12          # stored pi-digits for truncated elements
    residue_degree   = 2           # f: residue field F_{p^f}
    caveat_exponent  = 1           # s0: depth of the caveat disks
    strict_conjecture = true       # conjecture-only comparisons stay UNDECIDED
    exclude_ap       = p^2; ...    # slope-lag a_p values, ';'-separated

Lines starting with '#' and blank lines are ignored.  Command-line flags
override file values.
"""

from __future__ import annotations

from .engine import EngineConfig

_BOOL = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def parse_config_text(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if key in ("precision", "residue_degree", "caveat_exponent"):
            values[key] = int(value)
        elif key == "strict_conjecture":
            if value.lower() not in _BOOL:
                raise ValueError(f"line {lineno}: bad boolean {value!r}")
            values[key] = _BOOL[value.lower()]
        elif key == "exclude_ap":
            values[key] = tuple(s.strip() for s in value.split(";") if s.strip())
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    return values


def load_config(path=None, **overrides) -> EngineConfig:
    """EngineConfig from an optional file plus keyword overrides (None skipped)."""
    values = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            values.update(parse_config_text(fh.read()))
    for key, val in overrides.items():
        if val is not None:
            values[key] = val
    return EngineConfig(**values)
