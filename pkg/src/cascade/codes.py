"""Code definitions: codewords, correctable Pauli errors, encoder unitaries.

Register convention: qubit 0 is the leftmost tensor factor. The encoder maps
``|a_m> (x) |i>`` -- ancilla index ``m`` on the first ``n-1`` qubits,
principal qubit last -- to ``E_m |i_L>``, so column ``2*m + i`` of the
encoder is ``E_m |i_L>``.
"""

import dataclasses
import functools
import itertools
import json

import numpy as np

from ._config import TOL
from .channels import I2, SX, SY, SZ
from .matrixlab import dagger, kron

_FACTORS = {"I": I2, "X": SX, "Y": SY, "Z": SZ}


class CodeError(ValueError):
    pass


@dataclasses.dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis, e.g. ``PauliString("XZIII")``."""

    label: str

    def __post_init__(self):
        if not self.label or set(self.label) - set("IXYZ"):
            raise ValueError(f"bad Pauli label {self.label!r}")

    @classmethod
    def single(cls, n, qubit, factor):
        s = ["I"] * n
        s[qubit] = factor
        return cls("".join(s))

    @property
    def n(self):
        return len(self.label)

    @property
    def weight(self):
        return sum(c != "I" for c in self.label)

    def __str__(self):
        return self.label


def pauli_string_matrix(p):
    if isinstance(p, str):
        p = PauliString(p)
    if p.n > 7:
        raise ValueError(f"Pauli strings are limited to 7 qubits, got {p.n}")
    if p.n == 1:
        return _FACTORS[p.label].copy()
    return kron(*(_FACTORS[c] for c in p.label))


def _apply_pauli(p, vec):
    # Sign/phase-aware permutation of a state vector; avoids forming 2^n matrices
    n = p.n
    idx = np.arange(2**n)
    flip, phase = 0, np.ones(2**n, dtype=np.complex128)
    for q, c in enumerate(p.label):
        bit = 1 << (n - 1 - q)
        b = (idx & bit) != 0
        if c in "XY":
            flip |= bit
        if c == "Z":
            phase = phase * np.where(b, -1, 1)
        elif c == "Y":
            # Y|0> = i|1>, Y|1> = -i|0>; phase keyed on the input bit
            phase = phase * np.where(b, -1j, 1j)
    out = np.zeros_like(vec, dtype=np.complex128)
    out[idx ^ flip] = phase * vec
    return out


def build_encoder(logical0, logical1, errors):
    """Assemble the encoder unitary with column ``2m + i`` equal to ``E_m |i_L>``."""
    logical = (np.asarray(logical0, dtype=np.complex128), np.asarray(logical1, dtype=np.complex128))
    dim = logical[0].shape[0]
    if 2 * len(errors) != dim:
        raise CodeError(f"{len(errors)} errors cannot fill a {dim}-dimensional encoder")
    cols = [_apply_pauli(e, logical[i]) for e in errors for i in (0, 1)]
    u = np.column_stack(cols)
    gram = dagger(u) @ u
    err = np.abs(gram - np.eye(dim))
    if err.max() > TOL.reconstruction:
        j, k = np.unravel_index(np.argmax(err), err.shape)
        raise CodeError(
            f"encoder columns are not orthonormal: error {j // 2} ({errors[j // 2]}) vs "
            f"{k // 2} ({errors[k // 2]}), deviation {err.max():.3e}"
        )
    return u


@dataclasses.dataclass(frozen=True, eq=False)
class CodeSpec:
    name: str
    n: int
    logical0: np.ndarray
    logical1: np.ndarray
    errors: tuple
    encoder: np.ndarray

    def to_dict(self):
        def amps(v):
            return [[float(z.real), float(z.imag)] for z in v]

        return {
            "name": self.name,
            "n": self.n,
            "logical0": amps(self.logical0),
            "logical1": amps(self.logical1),
            "errors": [e.label for e in self.errors],
        }

    def to_json(self):
        return json.dumps(self.to_dict())


@dataclasses.dataclass
class ValidationReport:
    """Maximum violation per invariant, and whether each is within tolerance."""

    violations: dict
    limits: dict
    diagnosis: list = dataclasses.field(default_factory=list)

    @property
    def passed(self):
        return all(self.violations[k] <= self.limits[k] for k in self.limits)

    def __bool__(self):
        return self.passed

    def __str__(self):
        lines = [
            f"{k}: {v:.3e} ({'ok' if v <= self.limits[k] else 'FAIL'})" for k, v in self.violations.items()
        ]
        return "\n".join(lines + self.diagnosis)


def _gram_vectors(logical0, logical1, errors):
    return np.column_stack([_apply_pauli(e, lv) for e in errors for lv in (logical0, logical1)])


def validate_code(code):
    """Check normalization, the error-correction conditions, basis orthonormality and the encoder."""
    l0, l1 = code.logical0, code.logical1
    norm = max(abs(np.vdot(l0, l0) - 1), abs(np.vdot(l1, l1) - 1), abs(np.vdot(l0, l1)))

    vecs = _gram_vectors(l0, l1, code.errors)
    gram = dagger(vecs) @ vecs
    dim = gram.shape[0]
    gram_err = float(np.max(np.abs(gram - np.eye(dim)))) if dim else 0.0

    # correction conditions: P E_m^dag E_k P = delta_mk P, read off the 2x2 blocks of the Gram matrix
    m = len(code.errors)
    blocks = gram.reshape(m, 2, m, 2).transpose(0, 2, 1, 3)
    target = np.einsum("mk,ij->mkij", np.eye(m), np.eye(2))
    kl_err = float(np.max(np.abs(blocks - target))) if m else 0.0

    diagnosis = []
    if kl_err > TOL.reconstruction:
        for a, b in itertools.combinations(range(m), 2):
            if np.max(np.abs(blocks[a, b])) > TOL.reconstruction:
                kind = "duplicate syndrome" if np.max(np.abs(blocks[a, b])) > 0.5 else "overlap"
                diagnosis.append(f"{kind}: E_{a}={code.errors[a]} and E_{b}={code.errors[b]}")
                break

    u = code.encoder
    unit = float(np.linalg.norm(u @ dagger(u) - np.eye(u.shape[0])))
    col_err = float(np.max(np.abs(u - vecs))) if u.shape == vecs.shape else np.inf

    return ValidationReport(
        violations={
            "normalization": float(norm),
            "correction_conditions": kl_err,
            "gram": gram_err,
            "encoder_unitarity": unit,
            "encoder_columns": col_err,
        },
        limits={
            "normalization": TOL.equality,
            "correction_conditions": TOL.reconstruction,
            "gram": TOL.reconstruction,
            "encoder_unitarity": TOL.reconstruction,
            "encoder_columns": TOL.equality,
        },
        diagnosis=diagnosis,
    )


def make_code(name, logical0, logical1, errors, check=True):
    """Build a ``CodeSpec``; encoder assembly itself enforces orthonormality when ``check``."""
    errors = tuple(PauliString(e) if isinstance(e, str) else e for e in errors)
    if check:
        encoder = build_encoder(logical0, logical1, errors)
    else:
        encoder = np.column_stack([_apply_pauli(e, lv) for e in errors for lv in (logical0, logical1)])
    encoder.setflags(write=False)
    return CodeSpec(name, errors[0].n, np.asarray(logical0), np.asarray(logical1), errors, encoder)


_FIVE_ZERO = """
+00000 +10010 +01001 +10100 +01010 -11011 -00110 -11000
-11101 -00011 -11110 -01111 -10001 -01100 -10111 +00101
"""
_FIVE_ONE = """
+11111 +01101 +10110 +01011 +10101 -00100 -11001 -00111
-00010 -11100 -00001 -10000 -01110 -10011 -01000 +11010
"""


def _superposition(terms, n):
    v = np.zeros(2**n, dtype=np.complex128)
    for term in terms.split():
        v[int(term[1:], 2)] += 1.0 if term[0] == "+" else -1.0
    return v / np.linalg.norm(v)


def _single_qubit_errors(n):
    return [PauliString.single(n, q, f) for f in "XYZ" for q in range(n)]


@functools.lru_cache(maxsize=None)
def five_qubit_code():
    """The [[5,1,3]] code with errors ordered ``I, X_1..X_5, Y_1..Y_5, Z_1..Z_5``."""
    errors = [PauliString("I" * 5)] + _single_qubit_errors(5)
    return make_code("five", _superposition(_FIVE_ZERO, 5), _superposition(_FIVE_ONE, 5), errors)


HAMMING_CHECKS = np.array(
    [[0, 0, 0, 1, 1, 1, 1], [0, 1, 1, 0, 0, 1, 1], [1, 0, 1, 0, 1, 0, 1]],
    dtype=int,
)


def steane_codewords():
    """CSS codewords: ``|0_L>`` is the uniform superposition of the 8 even Hamming words."""
    words = [w for w in itertools.product((0, 1), repeat=7) if not (HAMMING_CHECKS @ w % 2).any()]
    even = [w for w in words if sum(w) % 2 == 0]
    zero = np.zeros(128, dtype=np.complex128)
    one = np.zeros(128, dtype=np.complex128)
    for w in even:
        zero[int("".join(map(str, w)), 2)] = 1
        one[int("".join(str(1 - b) for b in w), 2)] = 1
    return zero / np.sqrt(8), one / np.sqrt(8)


def _syndrome(label):
    x = np.array([c in "XY" for c in label], dtype=int)
    z = np.array([c in "ZY" for c in label], dtype=int)
    return tuple(HAMMING_CHECKS @ x % 2) + tuple(HAMMING_CHECKS @ z % 2)


# Weight-two corrections with only X/Y factors; capping them at three fixes the
# amplitude-damping response of the code (one-round fidelity polynomial).
XY_PAIR_LIMIT = 3


def steane_errors(xy_pair_limit=XY_PAIR_LIMIT):
    """Identity, 21 single-qubit Paulis and 42 weight-two completions (64 total).

    Weight-two candidates are scanned by qubit pair, then factor pair in
    X < Y < Z order; each is kept iff its syndrome is new, except that at most
    ``xy_pair_limit`` candidates without a Z factor are admitted.
    """
    errors = [PauliString("I" * 7)] + _single_qubit_errors(7)
    seen = {_syndrome(e.label) for e in errors}
    xy_pairs = 0
    for i, j in itertools.combinations(range(7), 2):
        for fi, fj in itertools.product("XYZ", repeat=2):
            s = ["I"] * 7
            s[i], s[j] = fi, fj
            label = "".join(s)
            syn = _syndrome(label)
            xy_only = "Z" not in label
            if syn in seen or (xy_only and xy_pairs >= xy_pair_limit):
                continue
            seen.add(syn)
            xy_pairs += xy_only
            errors.append(PauliString(label))
    if len(errors) != 64:
        raise CodeError(f"weight-two completion produced {len(errors)} errors, expected 64")
    return errors


@functools.lru_cache(maxsize=None)
def steane_code():
    zero, one = steane_codewords()
    return make_code("steane", zero, one, steane_errors())


CODES = {"five": five_qubit_code, "steane": steane_code}


def get_code(name):
    try:
        return CODES[name]()
    except KeyError:
        raise ValueError(f"unknown code {name!r}; choose from {sorted(CODES)}") from None
