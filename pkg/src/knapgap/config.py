"""Enumeration caps and other tunables.

Caps are plain configuration: ``KNAPGAP_CAPS="fiber=1e9,scan=20000"`` or a
``key=value`` file passed to the CLI override the defaults below.
"""

import dataclasses
import os
from dataclasses import dataclass

ENV_VAR = "KNAPGAP_CAPS"


@dataclass(frozen=True)
class Caps:
    fiber: int = 10**8          # candidate tuples in a fiber box enumeration
    covering_dim: int = 4       # simplex covering / discrete radius brute force
    covering_det: int = 64
    ip_enum: int = 10**6        # residue enumeration in the exact IP solver
    scan: int = 10**5           # number of right-hand sides in a scan
    exhaustive: int = 10**6     # (2H+1)^n threshold for exhaustive sampling

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


DEFAULT_CAPS = Caps()


def parse_assignments(text):
    """Parse ``key=value`` pairs separated by commas, semicolons or newlines."""
    out = {}
    for raw in text.replace(";", "\n").replace(",", "\n").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


def caps_from_mapping(mapping, base=DEFAULT_CAPS):
    names = {f.name for f in dataclasses.fields(Caps)}
    changes = {}
    for key, value in mapping.items():
        if key not in names:
            continue
        n = int(float(value))
        if n <= 0:
            raise ValueError(f"cap {key} must be positive")
        changes[key] = n
    return base.replace(**changes)


def caps_from_env(base=DEFAULT_CAPS, environ=None):
    environ = os.environ if environ is None else environ
    text = environ.get(ENV_VAR)
    if not text:
        return base
    return caps_from_mapping(parse_assignments(text), base)
