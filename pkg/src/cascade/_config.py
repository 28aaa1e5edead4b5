"""Central tolerance record.

Every numerical check in the package reads its threshold from ``TOL``.
The ``CASCADE_TOL`` environment variable overrides individual fields, e.g.
``CASCADE_TOL="hermiticity=1e-8,trace_preservation=1e-8"``.
"""

import dataclasses
import os


@dataclasses.dataclass(frozen=True)
class Tolerances:
    hermiticity: float = 1e-9
    reconstruction: float = 1e-10
    equality: float = 1e-12
    trace_preservation: float = 1e-9
    positivity: float = 1e-9
    unitarity: float = 1e-10
    jacobi: float = 1e-13
    jacobi_max_sweeps: int = 100


def _from_env(value):
    if not value:
        return Tolerances()
    fields = {f.name: f.type for f in dataclasses.fields(Tolerances)}
    overrides = {}
    for item in value.split(","):
        item = item.strip()
        if not item:
            continue
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or key not in fields:
            raise ValueError(f"CASCADE_TOL: cannot parse {item!r}; known keys: {sorted(fields)}")
        overrides[key] = int(raw) if key == "jacobi_max_sweeps" else float(raw)
    return Tolerances(**overrides)


TOL = _from_env(os.environ.get("CASCADE_TOL", ""))
