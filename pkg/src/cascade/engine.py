"""Effective-channel extraction and concatenation.

One round of error correction is simulated as encode -> independent noise on
every physical qubit -> decode with the encoder's inverse -> discard the
ancilla register. The single-qubit map that results is read out by process
tomography on the four operator units ``|c><d|`` and iterated level by level.
"""

import dataclasses
import json
import math

import numpy as np

from .channels import (
    ChoiMatrix,
    QuantumChannel,
    apply_product_channel,
    choi_distance,
    choi_from_kraus,
    depolarizing_choi,
    entangling_fidelity,
    kraus_from_choi,
    restore_trace_preservation,
    twirl_to_depolarizing,
)
from .codes import five_qubit_code
from .matrixlab import dagger
from .noise import depolarizing

NEAR_PERFECT = 1.0 - 1e-5
MAX_LEVELS = 12


def _principal_reduce(x):
    # ancilla is every qubit but the last
    d = x.shape[0] // 2
    return np.einsum("mamb->ab", x.reshape(d, 2, d, 2))


def tomography_matrix(outputs):
    """Arrange the four outputs ``eps(|c><d|)`` as ``lam[(a,b), (c,d)] = <a|eps(|c><d|)|b>``."""
    lam = np.empty((4, 4), dtype=np.complex128)
    for c in (0, 1):
        for d in (0, 1):
            lam[:, 2 * c + d] = outputs[c][d].reshape(4)
    return lam


def choi_from_tomography(lam):
    """Reindex ``chi[(a,b),(c,d)] = lam[(a,c),(b,d)]``."""
    return lam.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)


def effective_outputs(code, noise):
    """Return ``out[c][d] = eps~(|c><d|)`` for one round of the code."""
    u = code.encoder
    # U (|a_0><a_0| (x) |c><d|) U^dag = |c_L><d_L| since columns 0, 1 are the logical words
    logical = (u[:, 0], u[:, 1])
    out = [[None, None], [None, None]]
    for c in (0, 1):
        for d in (0, 1):
            state = np.outer(logical[c], logical[d].conj())
            state = apply_product_channel(noise, code.n, state)
            out[c][d] = _principal_reduce(dagger(u) @ state @ u)
    return out


def effective_channel(code, noise):
    """Choi matrix of the single-round effective channel of ``code`` under i.i.d. ``noise``."""
    lam = tomography_matrix(effective_outputs(code, noise))
    return ChoiMatrix(choi_from_tomography(lam))


def recovery_kraus(code):
    """Recovery ``R_m``: maps ``E_m|i_L>`` back to ``|i_L>`` for every correctable error."""
    u = code.encoder
    logical = u[:, :2]
    return [logical @ dagger(u[:, 2 * m : 2 * m + 2]) for m in range(len(code.errors))]


def effective_channel_with_recovery(code, noise):
    """Same effective channel as :func:`effective_channel`, with explicit recovery before decoding."""
    u = code.encoder
    rec = recovery_kraus(code)
    logical = (u[:, 0], u[:, 1])
    out = [[None, None], [None, None]]
    for c in (0, 1):
        for d in (0, 1):
            state = np.outer(logical[c], logical[d].conj())
            state = apply_product_channel(noise, code.n, state)
            state = sum(r @ state @ dagger(r) for r in rec)
            out[c][d] = _principal_reduce(dagger(u) @ state @ u)
    return ChoiMatrix(choi_from_tomography(tomography_matrix(out)))


def _check_unit(name, value, lo=0.0, hi=1.0):
    if not lo <= value <= hi:
        raise ValueError(f"{name}={value} outside [{lo}, {hi}]")


def dep_fidelity_step(F):
    """One five-qubit round on a depolarizing channel, as a polynomial in its fidelity."""
    _check_unit("F", F, 0.25)
    # the polynomial never exceeds 1 on [1/4, 1]; clip round-off near F = 1
    return min(1.0, (5 + 20 * F - 70 * F**2 + 40 * F**3 + 160 * F**4 - 128 * F**5) / 27)


def dep_fidelity_step_p(p):
    _check_unit("p", p)
    return 1 - 45 / 8 * p**2 + 75 / 8 * p**3 - 45 / 8 * p**4 + 9 / 8 * p**5


def dep_choi_diagonal(F0):
    """Diagonal entry ``a`` of the five-qubit effective Choi under depolarizing noise."""
    return (1 + 2 * F0) ** 2 * (37 - 108 * F0 + 144 * F0**2 - 64 * F0**3) / 81


def dep_fidelity_levels(F0, levels):
    fs = [float(F0)]
    for _ in range(levels):
        fs.append(dep_fidelity_step(fs[-1]))
    return fs


def reference_depolarizing_choi(F0, l):
    """Depolarizing Choi after ``l`` five-qubit rounds starting from fidelity ``F0``."""
    _check_unit("F0", F0, 0.25)
    if l < 0:
        raise ValueError(f"level must be non-negative, got {l}")
    return depolarizing_choi(dep_fidelity_levels(F0, l)[-1])


def closed_form_ad_five(gamma):
    _check_unit("gamma", gamma)
    g = gamma
    s = math.sqrt(1 - g)
    return 0.25 * (
        1 + 0.25 * (1 - g) ** 2 * (4 + 8 * g - 3 * g**2 + g**3) + 0.5 * s * (4 + 2 * g - 11 * g**2 + 5 * g**3)
    )


def closed_form_ad_steane(gamma):
    _check_unit("gamma", gamma)
    g = gamma
    s = math.sqrt(1 - g)
    return 0.25 * (
        1
        + s * (2 + g)
        + (1 - g) ** 3 / 8 * (8 + 24 * g - 33 * g**2 + 21 * g**3 - 42 * g**4)
        + s / 16 * (-150 * g**2 + 180 * g**3 - 117 * g**4 + 39 * g**5)
    )


def find_threshold(lo=0.1, hi=0.3, tol=1e-9):
    """Depolarizing ``p`` at which one five-qubit round stops improving the fidelity."""

    def gain(p):
        return dep_fidelity_step_p(p) - (1 - 0.75 * p)

    g_lo, g_hi = gain(lo), gain(hi)
    if (g_lo > 0) == (g_hi > 0):
        raise ArithmeticError(f"no sign change of F1 - F0 on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (gain(mid) > 0) == (g_lo > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclasses.dataclass(frozen=True)
class Level:
    """One concatenation level.

    ``tp_correction`` is the round-off drift in ``sum K^dag K`` removed from
    the Kraus set extracted at this level before it seeds the next one.
    """

    l: int
    chi: ChoiMatrix
    F: float
    D: float
    tp_correction: float = 0.0

    def to_dict(self):
        return {
            "l": self.l,
            "F": self.F,
            "D": self.D,
            "tp_correction": self.tp_correction,
            "chi": self.chi.to_dict()["chi"],
        }


@dataclasses.dataclass
class ConcatenationTrace:
    F0: float
    levels: list
    terminal_L: int | None = None
    code: str = "five"
    noise: dict = dataclasses.field(default_factory=dict)

    @property
    def fidelities(self):
        return [lv.F for lv in self.levels]

    @property
    def distances(self):
        return [lv.D for lv in self.levels]

    def to_dict(self):
        return {
            "F0": self.F0,
            "code": self.code,
            "noise": self.noise,
            "levels": [lv.to_dict() for lv in self.levels],
            "terminal_L": self.terminal_L,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


class DepolarizingReference:
    """Per-level Choi matrices of the depolarizing channel with the same initial fidelity.

    The five-qubit code keeps depolarizing noise depolarizing, so its chain
    follows the fidelity polynomial; other codes run the engine on it.
    """

    def __init__(self, code, F0):
        self.code = code
        self.F0 = F0
        self._chis = [depolarizing_choi(F0)]
        self._channel = depolarizing(F0)

    def __getitem__(self, l):
        if self.code.name == "five":
            return reference_depolarizing_choi(self.F0, l)
        while len(self._chis) <= l:
            chi = effective_channel(self.code, self._channel)
            self._chis.append(chi)
            self._channel, _ = restore_trace_preservation(kraus_from_choi(chi))
        return self._chis[l]


REFERENCES = ("twirl", "chain")


def concatenate(
    code,
    noise0,
    max_levels=MAX_LEVELS,
    target=NEAR_PERFECT,
    stop_at_target=True,
    reference="twirl",
    noise_info=None,
):
    """Iterate the effective-channel map across concatenation levels.

    Level 0 is the bare channel. Every level records the Choi matrix, its
    entangling fidelity ``F`` and a distance ``D`` to a depolarizing
    reference: with ``reference="twirl"`` the depolarizing channel of equal
    fidelity at that level, with ``reference="chain"`` the level-``l``
    iterate of the depolarizing channel with the same initial fidelity.

    Iteration stops at the first level reaching ``target`` (unless
    ``stop_at_target`` is false) or after ``max_levels`` rounds.
    """
    if not 0 <= max_levels <= MAX_LEVELS:
        raise ValueError(f"max_levels={max_levels} outside 0..{MAX_LEVELS}")
    if reference not in REFERENCES:
        raise ValueError(f"reference must be one of {REFERENCES}, got {reference!r}")
    chi = noise0 if isinstance(noise0, ChoiMatrix) else choi_from_kraus(noise0)
    F0 = entangling_fidelity(chi)
    if reference == "twirl":
        ref = twirl_to_depolarizing
    else:
        chain = DepolarizingReference(code, F0)

        def ref(c, l):
            return chain[l]

    def distance(c, l):
        return choi_distance(c, ref(c) if reference == "twirl" else ref(c, l))

    channel = noise0 if isinstance(noise0, QuantumChannel) else kraus_from_choi(chi)
    levels = [Level(0, chi, F0, distance(chi, 0))]
    terminal = 0 if F0 >= target else None
    for l in range(1, max_levels + 1):
        if terminal is not None and stop_at_target:
            break
        chi = effective_channel(code, channel)
        F = entangling_fidelity(chi)
        if terminal is None and F >= target:
            terminal = l
        channel, fix = restore_trace_preservation(kraus_from_choi(chi))
        levels.append(Level(l, chi, F, distance(chi, l), fix))
    return ConcatenationTrace(F0, levels, terminal, code.name, dict(noise_info or {}))


def concatenate_depolarizing(F0, max_levels=MAX_LEVELS, **kw):
    return concatenate(five_qubit_code(), depolarizing(F0), max_levels, **kw)
