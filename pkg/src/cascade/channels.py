"""Qubit channel representations: Kraus lists, Choi matrices, Bloch affine maps.

Conventions
-----------
A 2x2 operator ``A`` is vectorized row-major, ``|A>> = sum_ij A_ij |ij>``, so
the Choi matrix ``chi = sum_m |A_m>><<A_m|`` is indexed by (output, input)
pairs in the order 00, 01, 10, 11. A trace-preserving channel has
``Tr chi = 2``.
"""

import dataclasses
import json
import math

import numpy as np

from ._config import TOL
from .matrixlab import (
    apply_single_qubit_op,
    apply_single_qubit_op_right,
    as_matrix,
    dagger,
    eig_hermitian,
    hermiticity_error,
    num_qubits,
    trace_norm,
)

I2 = np.eye(2, dtype=np.complex128)
SX = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SY = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SZ = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS = (SX, SY, SZ)

S_PLUS = np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2)


class ChannelError(ValueError):
    """A channel or Choi matrix violates one of its invariants."""


def tp_error(kraus):
    """Max-entry deviation of ``sum K^dag K`` from the identity."""
    total = sum(dagger(k) @ k for k in kraus)
    return float(np.max(np.abs(total - np.eye(total.shape[0]))))


@dataclasses.dataclass(frozen=True, eq=False)
class QuantumChannel:
    """Completely positive trace-preserving map given by Kraus operators."""

    kraus: tuple

    def __post_init__(self):
        ops = tuple(as_matrix(k) for k in self.kraus)
        if not ops:
            raise ChannelError("a channel needs at least one Kraus operator")
        d = ops[0].shape[0]
        for k in ops:
            if k.shape != (d, d):
                raise ChannelError(f"Kraus operators must all be {d}x{d}, got {k.shape}")
        err = tp_error(ops)
        if err > TOL.trace_preservation:
            raise ChannelError(f"channel is not trace preserving: max |sum K^dag K - I| = {err:.3e}")
        object.__setattr__(self, "kraus", ops)

    @property
    def dim(self):
        return self.kraus[0].shape[0]

    def __len__(self):
        return len(self.kraus)

    def __call__(self, state):
        return apply_channel(self, state)


@dataclasses.dataclass(frozen=True, eq=False)
class ChoiMatrix:
    """Choi matrix of a qubit channel, validated on construction."""

    chi: np.ndarray
    validate: dataclasses.InitVar[bool] = True

    def __post_init__(self, validate):
        chi = as_matrix(self.chi)
        if chi.shape != (4, 4):
            raise ChannelError(f"qubit Choi matrix must be 4x4, got {chi.shape}")
        chi = chi.copy()
        chi.setflags(write=False)
        object.__setattr__(self, "chi", chi)
        if validate:
            check_choi(chi)

    def __array__(self, dtype=None, copy=None):
        return self.chi if dtype is None else self.chi.astype(dtype)

    def to_dict(self):
        return {"dim": 2, "chi": [[[float(z.real), float(z.imag)] for z in row] for row in self.chi]}

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        if data.get("dim") != 2:
            raise ChannelError(f"unsupported Choi dimension {data.get('dim')!r}")
        chi = np.array([[complex(re, im) for re, im in row] for row in data["chi"]])
        return cls(chi)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def choi_violations(chi):
    """Return the magnitude of each Choi invariant's violation."""
    chi = np.asarray(chi)
    herm = hermiticity_error(chi)
    w, _ = eig_hermitian(0.5 * (chi + dagger(chi)))
    t = chi.reshape(2, 2, 2, 2)
    partial = np.einsum("abad->bd", t)
    return {
        "hermiticity": herm,
        "positivity": max(0.0, -float(w[-1])),
        "trace": abs(np.trace(chi) - 2.0),
        "trace_preservation": float(np.max(np.abs(partial - I2))),
    }


def check_choi(chi):
    v = choi_violations(chi)
    limits = {
        "hermiticity": TOL.hermiticity,
        "positivity": TOL.positivity,
        "trace": TOL.trace_preservation,
        "trace_preservation": TOL.trace_preservation,
    }
    bad = {k: v[k] for k in limits if v[k] > limits[k]}
    if bad:
        detail = ", ".join(f"{k}={val:.3e}" for k, val in bad.items())
        raise ChannelError(f"invalid Choi matrix: {detail}")


def _choi_array(chi):
    return chi.chi if isinstance(chi, ChoiMatrix) else as_matrix(chi)


def vectorize(a):
    a = as_matrix(a)
    if a.shape != (2, 2):
        raise ValueError(f"vectorize expects a 2x2 matrix, got {a.shape}")
    return a.reshape(4).copy()


def devectorize(v):
    v = np.asarray(v, dtype=np.complex128)
    if v.shape != (4,):
        raise ValueError(f"devectorize expects a 4-vector, got {v.shape}")
    return v.reshape(2, 2).copy()


def choi_from_kraus(ch):
    if ch.dim != 2:
        raise ChannelError("choi_from_kraus handles qubit channels only")
    vecs = np.array([k.reshape(4) for k in ch.kraus])
    return ChoiMatrix(vecs.T @ vecs.conj())


def kraus_from_choi(chi, cutoff=1e-12):
    """Kraus operators from the eigendecomposition of ``chi``.

    Each eigenpair ``(lam, phi)`` with ``lam > cutoff`` yields
    ``sqrt(lam) * devectorize(phi)``.
    """
    chi = _choi_array(chi)
    w, v = eig_hermitian(chi)
    if w[-1] < -TOL.positivity:
        raise ChannelError(f"Choi matrix is not positive: smallest eigenvalue {w[-1]:.3e}")
    kraus = [np.sqrt(lam) * v[:, m].reshape(2, 2) for m, lam in enumerate(w) if lam > cutoff]
    return QuantumChannel(tuple(kraus))


def restore_trace_preservation(ch):
    """Undo round-off drift in ``sum K^dag K`` by ``K -> K S^(-1/2)``.

    Only deviations within ``TOL.trace_preservation`` are corrected; larger
    ones raise. Returns the corrected channel and the deviation removed.
    """
    err = tp_error(ch.kraus)
    if err > TOL.trace_preservation:
        raise ChannelError(f"refusing to renormalize a channel that is off by {err:.3e}")
    if err == 0.0:
        return ch, 0.0
    total = sum(dagger(k) @ k for k in ch.kraus)
    w, v = eig_hermitian(total)
    inv_sqrt = (v * (1.0 / np.sqrt(w))) @ dagger(v)
    return QuantumChannel(tuple(k @ inv_sqrt for k in ch.kraus)), err


def entangling_fidelity(chi):
    """``<S+|chi|S+> / 2``, i.e. a quarter of the four corner entries."""
    c = _choi_array(chi)
    return float(0.25 * ((c[0, 0] + c[0, 3]) + (c[3, 0] + c[3, 3])).real)


def choi_distance(chi1, chi2):
    """A quarter of the trace norm of the difference."""
    return 0.25 * trace_norm(_choi_array(chi1) - _choi_array(chi2))


def depolarizing_choi(fidelity):
    """Choi matrix of the depolarizing channel with the given entangling fidelity.

    For ``fidelity >= 1/8`` the corner entries reproduce ``fidelity`` bit for
    bit under :func:`entangling_fidelity`. Below that, ``2 * fidelity`` has
    bits finer than the grid of the ~1/3-sized entries and is matched to
    within one unit in the last place of 1/3.
    """
    f = float(fidelity)
    q = (1.0 - f) / 3.0
    d = f + q
    # 2f - d is exact (Sterbenz), so the corner sum reproduces f bit for bit
    o = 2.0 * f - d
    e = 2.0 * q
    chi = np.array(
        [[d, 0, 0, o], [0, e, 0, 0], [0, 0, e, 0], [o, 0, 0, d]],
        dtype=np.complex128,
    )
    return ChoiMatrix(chi)


def twirl_to_depolarizing(chi):
    """Project onto the depolarizing channel with the same entangling fidelity."""
    return depolarizing_choi(entangling_fidelity(chi))


def apply_channel(ch, state):
    state = as_matrix(state)
    if state.shape[0] != ch.dim:
        raise ValueError(f"state of shape {state.shape} does not match channel dimension {ch.dim}")
    return sum(k @ state @ dagger(k) for k in ch.kraus)


def apply_product_channel(ch, n, state, max_qubits=7):
    """Apply ``ch`` independently to each of ``n`` qubits of ``state``.

    Contracts one qubit at a time, so the cost is ``len(ch) * n`` small
    contractions rather than ``len(ch) ** n`` full-size Kraus products.
    """
    if ch.dim != 2:
        raise ChannelError("apply_product_channel takes a single-qubit channel")
    if not 1 <= n <= max_qubits:
        raise ValueError(f"n={n} outside 1..{max_qubits}")
    state = np.asarray(state, dtype=np.complex128)
    if num_qubits(state.shape[0]) != n or state.shape[0] != state.shape[1]:
        raise ValueError(f"state shape {state.shape} is not 2**{n} square")
    for q in range(n):
        state = sum(
            apply_single_qubit_op_right(k, q, apply_single_qubit_op(k, q, state)) for k in ch.kraus
        )
    return state


@dataclasses.dataclass(frozen=True, eq=False)
class BlochAffineMap:
    """Action ``r -> m @ r + delta`` of a qubit channel on Bloch vectors."""

    m: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float).reshape(3, 3)
        delta = np.asarray(self.delta, dtype=float).reshape(3)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "delta", delta)
        worst = np.max(np.linalg.norm(_sphere_points() @ m.T + delta, axis=1))
        if worst > 1.0 + TOL.hermiticity:
            raise ChannelError(f"affine map leaves the Bloch ball: |r'| = {worst:.6f}")

    def __call__(self, r):
        return self.m @ np.asarray(r, dtype=float) + self.delta


def _sphere_points(n=400):
    # Fibonacci lattice; deterministic sample for the unit-ball check
    k = np.arange(n) + 0.5
    z = 1 - 2 * k / n
    rho = np.sqrt(1 - z * z)
    phi = np.pi * (1 + 5**0.5) * k
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def bloch_vector(rho):
    rho = as_matrix(rho)
    return np.array([np.trace(s @ rho).real for s in PAULIS])


def density_from_bloch(r):
    r = np.asarray(r, dtype=float)
    return 0.5 * (I2 + r[0] * SX + r[1] * SY + r[2] * SZ)


def _image_of_identity(ch):
    # exactly rounded sum over Kraus terms: equal multisets of terms give equal entries
    terms = [k @ dagger(k) for k in ch.kraus]
    out = np.empty((ch.dim, ch.dim), dtype=np.complex128)
    for i in range(ch.dim):
        for j in range(ch.dim):
            out[i, j] = complex(math.fsum(t[i, j].real for t in terms), math.fsum(t[i, j].imag for t in terms))
    return out


def affine_from_channel(ch):
    out_i = _image_of_identity(ch)
    m = np.array([[0.5 * np.trace(si @ apply_channel(ch, sj)).real for sj in PAULIS] for si in PAULIS])
    delta = np.array([0.5 * np.trace(si @ out_i).real for si in PAULIS])
    return BlochAffineMap(m, delta)
