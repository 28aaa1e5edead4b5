"""Reproducible experiment drivers: fidelity/distance tables, curves, thresholds, ensembles.

Every driver returns plain Python data (lists of rows, dataclasses) and has a
matching writer so the command-line front end stays thin.
"""

import concurrent.futures
import csv
import dataclasses
import io
import json
import math

import numpy as np

from .channels import entangling_fidelity
from .codes import five_qubit_code, get_code, steane_code
from .engine import (
    MAX_LEVELS,
    NEAR_PERFECT,
    closed_form_ad_five,
    closed_form_ad_steane,
    concatenate,
    dep_fidelity_levels,
    dep_fidelity_step,
    dep_fidelity_step_p,
    effective_channel,
    find_threshold,
)
from .noise import (
    InfeasibleSample,
    ad_from_fidelity,
    amplitude_damping,
    bit_flip,
    depolarizing,
    depolarizing_p,
    general_noise,
    model_fidelity,
    sample_at_fidelity,
    sample_rng,
)

TABLE_CHANNELS = ("dep", "ad", "bitflip")
_NAMED = {"dep": depolarizing, "ad": ad_from_fidelity, "bitflip": bit_flip}


def named_channel(kind, F0):
    """One of the fixed-fidelity channels used in the tables."""
    try:
        return _NAMED[kind](F0)
    except KeyError:
        raise ValueError(f"unknown channel {kind!r}; choose from {sorted(_NAMED)}") from None


def _trace(code, kind, F0, levels):
    return concatenate(
        code,
        named_channel(kind, F0),
        max_levels=levels,
        stop_at_target=False,
        noise_info={"kind": kind, "F0": F0},
    )


@dataclasses.dataclass
class Table:
    header: tuple
    rows: list
    terminal: dict = dataclasses.field(default_factory=dict)

    def column(self, name):
        k = self.header.index(name)
        return [r[k] for r in self.rows]

    def to_csv(self):
        return rows_to_csv(self.header, self.rows)

    def to_json(self):
        return json.dumps(
            {"header": list(self.header), "rows": [list(r) for r in self.rows], "terminal_L": self.terminal}
        )


def fidelity_table(code, F0, levels):
    traces = {k: _trace(code, k, F0, levels) for k in TABLE_CHANNELS}
    rows = [(l, *(traces[k].fidelities[l] for k in TABLE_CHANNELS)) for l in range(levels + 1)]
    return Table(("l", "F_dep", "F_ad", "F_bf"), rows, {k: t.terminal_L for k, t in traces.items()})


def table1(levels=5):
    """Five-qubit code at ``F0 = 0.92``: per-level fidelities for the three channels."""
    return fidelity_table(five_qubit_code(), 0.92, levels)


def table2(levels=5, reference="twirl"):
    """Five-qubit code at ``F0 = 0.92``: distance to the depolarizing reference."""
    code = five_qubit_code()
    traces = {}
    for k in ("ad", "bitflip"):
        traces[k] = concatenate(
            code, named_channel(k, 0.92), max_levels=levels, stop_at_target=False, reference=reference
        )
    rows = [(l, traces["ad"].distances[l], traces["bitflip"].distances[l]) for l in range(levels + 1)]
    return Table(("l", "D_ad", "D_bf"), rows, {k: t.terminal_L for k, t in traces.items()})


def table3(levels=9):
    """Steane code at ``F0 = 0.94``."""
    return fidelity_table(steane_code(), 0.94, levels)


TABLES = {1: table1, 2: table2, 3: table3}


# -- closed-form curves ----------------------------------------------------


def _engine_dep_F(F):
    return entangling_fidelity(effective_channel(five_qubit_code(), depolarizing(F)))


def _engine_dep_p(p):
    return entangling_fidelity(effective_channel(five_qubit_code(), depolarizing_p(p)))


def _engine_ad(code):
    def f(g):
        return entangling_fidelity(effective_channel(code(), amplitude_damping(g)))

    return f


CURVES = {
    "eq-dep-F": (dep_fidelity_step, _engine_dep_F, (0.25, 1.0)),
    "eq-dep-p": (dep_fidelity_step_p, _engine_dep_p, (0.0, 1.0)),
    "ad-five": (closed_form_ad_five, _engine_ad(five_qubit_code), (0.0, 1.0)),
    "ad-steane": (closed_form_ad_steane, _engine_ad(steane_code), (0.0, 1.0)),
}


def curve(which, lo=None, hi=None, n=50):
    """Closed form against the engine on an even grid: rows ``(param, closed, numeric, |diff|)``."""
    if which not in CURVES:
        raise ValueError(f"unknown curve {which!r}; choose from {sorted(CURVES)}")
    closed, numeric, (dlo, dhi) = CURVES[which]
    lo = dlo if lo is None else lo
    hi = dhi if hi is None else hi
    if not dlo <= lo <= hi <= dhi:
        raise ValueError(f"grid [{lo}, {hi}] outside the domain [{dlo}, {dhi}] of {which}")
    if n < 1:
        raise ValueError(f"grid needs at least one point, got {n}")
    rows = []
    for x in np.linspace(lo, hi, n):
        x = float(x)
        c, v = closed(x), numeric(x)
        rows.append((x, c, v, abs(c - v)))
    return Table(("param", "closed_form", "numeric", "abs_diff"), rows)


# -- threshold -------------------------------------------------------------


def threshold_report():
    p = find_threshold()
    return {
        "p_threshold": p,
        "F0_threshold": 1.0 - 0.75 * p,
        "gain_at_p_0.18": dep_fidelity_step_p(0.18) - (1.0 - 0.75 * 0.18),
        "gain_at_p_0.19": dep_fidelity_step_p(0.19) - (1.0 - 0.75 * 0.19),
    }


# -- ensembles -------------------------------------------------------------


class SampleError(RuntimeError):
    def __init__(self, index, cause):
        super().__init__(f"sample {index}: {cause}")
        self.index = index


def default_levels(F0):
    """Levels the depolarizing channel at ``F0`` needs to become near-perfect."""
    fs = dep_fidelity_levels(F0, MAX_LEVELS)
    for l, f in enumerate(fs):
        if f >= NEAR_PERFECT:
            return l
    raise ValueError(f"depolarizing F0={F0} does not reach {NEAR_PERFECT} within {MAX_LEVELS} levels")


def run_sample(F0, seed, index, levels, reference="twirl", code="five"):
    """Draw sample ``index`` of the run and concatenate it; returns a flat record."""
    try:
        params = sample_at_fidelity(F0, sample_rng(seed, index))
        tr = concatenate(
            get_code(code),
            general_noise(params),
            max_levels=levels,
            stop_at_target=False,
            reference=reference,
        )
    except (InfeasibleSample, ValueError, RuntimeError) as exc:
        raise SampleError(index, exc) from exc
    return {
        "index": index,
        "params": params.to_dict(),
        "model_F": model_fidelity(params),
        "F": tr.fidelities,
        "D": tr.distances,
    }


def _run_chunk(args):
    F0, seed, indices, levels, reference, code = args
    return [run_sample(F0, seed, i, levels, reference, code) for i in indices]


@dataclasses.dataclass
class EnsembleSummary:
    F0: float
    M: int
    seed: int
    levels: int
    D_max: list
    F_min: list
    reference: str = "twirl"
    code: str = "five"
    samples: list | None = None

    def to_dict(self):
        out = {
            "F0": self.F0,
            "M": self.M,
            "seed": self.seed,
            "levels": self.levels,
            "code": self.code,
            "reference": self.reference,
            "D_max": self.D_max,
            "F_min": self.F_min,
        }
        return out

    def to_json(self):
        return json.dumps(self.to_dict())

    def to_csv(self):
        rows = [(l, self.D_max[l], self.F_min[l]) for l in range(self.levels + 1)]
        return rows_to_csv(("l", "D_max", "F_min"), rows)

    def samples_csv(self):
        if self.samples is None:
            raise ValueError("per-sample records were not kept")
        L = self.levels
        header = (
            ("index", "theta", "phi", "alpha", "beta", "gamma", "model_F")
            + tuple(f"F_{l}" for l in range(L + 1))
            + tuple(f"D_{l}" for l in range(L + 1))
        )
        rows = []
        for s in self.samples:
            p = s["params"]
            rows.append(
                (s["index"], p["theta"], p["phi"], p["alpha"], p["beta"], p["gamma"], s["model_F"], *s["F"], *s["D"])
            )
        return rows_to_csv(header, rows)


def fold(records, levels):
    """Per-level max of ``D`` and min of ``F`` over sample records."""
    D_max = [-math.inf] * (levels + 1)
    F_min = [math.inf] * (levels + 1)
    for r in records:
        for l in range(levels + 1):
            D_max[l] = max(D_max[l], r["D"][l])
            F_min[l] = min(F_min[l], r["F"][l])
    return D_max, F_min


def ensemble(F0, M, seed, levels=None, workers=1, keep_samples=False, reference="twirl", code="five"):
    """Sample ``M`` channels at fidelity ``F0`` and aggregate their concatenation traces.

    Sample ``i`` draws from its own substream of ``seed``, so the result does
    not depend on ``workers`` or on scheduling.
    """
    if M < 1:
        raise ValueError(f"need at least one sample, got M={M}")
    if not 0.25 < F0 < 1.0:
        raise ValueError(f"F0={F0} outside (1/4, 1)")
    if workers < 1:
        raise ValueError(f"workers must be positive, got {workers}")
    levels = default_levels(F0) if levels is None else levels
    if not 0 <= levels <= MAX_LEVELS:
        raise ValueError(f"levels={levels} outside 0..{MAX_LEVELS}")

    if workers == 1:
        records = _run_chunk((F0, seed, range(M), levels, reference, code))
    else:
        size = max(1, math.ceil(M / (4 * workers)))
        chunks = [(F0, seed, range(a, min(a + size, M)), levels, reference, code) for a in range(0, M, size)]
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            records = [r for chunk in pool.map(_run_chunk, chunks) for r in chunk]

    D_max, F_min = fold(records, levels)
    return EnsembleSummary(
        F0, M, seed, levels, D_max, F_min, reference, code, records if keep_samples else None
    )


# -- output ----------------------------------------------------------------


def format_value(v):
    # repr gives the shortest string that round-trips a float exactly
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def rows_to_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([format_value(v) for v in r])
    return buf.getvalue()
