"""Named single-qubit noise channels and the five-parameter noise family."""

import dataclasses
import json
import math

import numpy as np

from .channels import I2, SX, SY, SZ, QuantumChannel


class InfeasibleSample(RuntimeError):
    """The fidelity-constrained sampler exhausted its redraw budget."""


def _check_range(name, value, lo, hi):
    if not lo <= value <= hi:
        raise ValueError(f"{name}={value} outside [{lo}, {hi}]")


def depolarizing(F0):
    """Depolarizing channel with entangling fidelity ``F0`` (four Pauli Kraus operators)."""
    _check_range("F0", F0, 0.25, 1.0)
    w = math.sqrt((1.0 - F0) / 3.0)
    return QuantumChannel((math.sqrt(F0) * I2, w * SX, w * SY, w * SZ))


def depolarizing_p(p):
    """Depolarizing channel in the ``p`` parametrization, ``F0 = 1 - 3p/4``."""
    _check_range("p", p, 0.0, 1.0)
    return depolarizing(1.0 - 0.75 * p)


def amplitude_damping(gamma):
    _check_range("gamma", gamma, 0.0, 1.0)
    a0 = np.array([[1, 0], [0, math.sqrt(1.0 - gamma)]], dtype=np.complex128)
    a1 = np.array([[0, math.sqrt(gamma)], [0, 0]], dtype=np.complex128)
    return QuantumChannel((a0, a1))


def ad_gamma_from_fidelity(F0):
    _check_range("F0", F0, 0.25, 1.0)
    return 1.0 - (2.0 * math.sqrt(F0) - 1.0) ** 2


def ad_from_fidelity(F0):
    """Amplitude damping channel whose entangling fidelity is ``F0``."""
    return amplitude_damping(ad_gamma_from_fidelity(F0))


def bit_flip(F0):
    _check_range("F0", F0, 0.0, 1.0)
    return QuantumChannel((math.sqrt(F0) * I2, math.sqrt(1.0 - F0) * SX))


@dataclasses.dataclass(frozen=True)
class PauliChannel:
    p0: float
    px: float
    py: float
    pz: float

    def __post_init__(self):
        probs = (self.p0, self.px, self.py, self.pz)
        if min(probs) < -1e-12 or abs(sum(probs) - 1.0) > 1e-12:
            raise ValueError(f"not a probability distribution: {probs}")


def pauli(p):
    w = [math.sqrt(max(x, 0.0)) for x in (p.p0, p.px, p.py, p.pz)]
    return QuantumChannel((w[0] * I2, w[1] * SX, w[2] * SY, w[3] * SZ))


@dataclasses.dataclass(frozen=True)
class FiveParamNoise:
    """Point in the five-parameter noise family (angles in radians).

    ``alpha``, ``beta`` and ``gamma`` shape a diagonal-plus-damping Kraus set;
    ``theta`` and ``phi`` rotate it by a 2x2 unitary.
    """

    theta: float
    phi: float
    alpha: float
    beta: float
    gamma: float

    def to_dict(self):
        return {k: float(v) for k, v in dataclasses.asdict(self).items()}

    def to_json(self):
        return json.dumps({k: float(f"{v:.17g}") for k, v in self.to_dict().items()})

    @classmethod
    def from_dict(cls, data):
        return cls(**{k: float(data[k]) for k in ("theta", "phi", "alpha", "beta", "gamma")})

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def frame_rotation(theta, phi):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [[c, s * np.exp(-1j * phi)], [-s * np.exp(1j * phi), c]],
        dtype=np.complex128,
    )


def unrotated_kraus(alpha, beta, gamma):
    ca, sa = math.cos(alpha), math.sin(alpha)
    cb, sb = math.cos(beta), math.sin(beta)
    cg, sg = math.cos(gamma), math.sin(gamma)
    return (
        np.array([[ca, 0], [0, sb * cg]], dtype=np.complex128),
        np.array([[0, 0], [sa * sg, 0]], dtype=np.complex128),
        np.array([[0, sb * sg], [0, 0]], dtype=np.complex128),
        np.array([[sa * cg, 0], [0, cb]], dtype=np.complex128),
    )


def general_noise(p):
    u = frame_rotation(p.theta, p.phi)
    ud = u.conj().T
    return QuantumChannel(tuple(u @ k @ ud for k in unrotated_kraus(p.alpha, p.beta, p.gamma)))


def _fidelity_abg(alpha, beta, gamma):
    ca, sa = math.cos(alpha), math.sin(alpha)
    cg = math.cos(gamma)
    return 0.25 * ((ca + math.sin(beta) * cg) ** 2 + (sa * cg + math.cos(beta)) ** 2)


def model_fidelity(p):
    """Entangling fidelity of ``general_noise(p)``; independent of the frame angles."""
    return _fidelity_abg(p.alpha, p.beta, p.gamma)


def centered_to_pauli(alpha, gamma):
    """Pauli-channel weights equivalent to the centered (``alpha == beta``) model."""
    sa, ca = math.sin(alpha), math.cos(alpha)
    sg, cg = math.sin(gamma), math.cos(gamma)
    pxy = 0.5 * sa**2 * sg**2
    pz = 0.5 * (ca - sa * cg) ** 2
    return PauliChannel(1.0 - 2 * pxy - pz, pxy, pxy, pz)


def depolarizing_alpha(gamma):
    """The ``alpha`` at which the centered model is depolarizing for this ``gamma``."""
    return math.atan2(1.0, math.cos(gamma) + math.sin(gamma))


def sample_rng(seed, index):
    """Independent generator for sample ``index`` of a run seeded with ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _bisect(f, lo, hi, flo, tol=1e-15, max_iter=200):
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or hi - lo < tol:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sample_at_fidelity(F0, rng, max_attempts=1000):
    """Draw a random ``FiveParamNoise`` whose entangling fidelity is ``F0``.

    ``theta ~ U[0, pi]`` and ``phi ~ U[0, 2 pi)``; ``beta`` and ``gamma`` are
    uniform on ``[0, pi/2]`` and ``alpha`` in ``[0, pi/2]`` is solved for by
    bisection. Draws with no bracketed root are rejected and redrawn.
    """
    if not 0.25 < F0 < 1.0:
        raise ValueError(f"F0={F0} outside (1/4, 1)")
    theta = rng.uniform(0.0, math.pi)
    phi = rng.uniform(0.0, 2 * math.pi)
    half_pi = 0.5 * math.pi
    for _ in range(max_attempts):
        beta = rng.uniform(0.0, half_pi)
        gamma = rng.uniform(0.0, half_pi)

        def f(a):
            return _fidelity_abg(a, beta, gamma) - F0

        f_lo, f_hi = f(0.0), f(half_pi)
        if f_lo == 0.0:
            return FiveParamNoise(theta, phi, 0.0, beta, gamma)
        if (f_lo < 0) == (f_hi < 0):
            continue
        alpha = _bisect(f, 0.0, half_pi, f_lo)
        return FiveParamNoise(theta, phi, alpha, beta, gamma)
    raise InfeasibleSample(f"no alpha root for F0={F0} after {max_attempts} draws")
