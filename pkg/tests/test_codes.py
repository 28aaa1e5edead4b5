import json

import numpy as np
import pytest

from cascade.codes import (
    CodeError,
    PauliString,
    _syndrome,
    build_encoder,
    five_qubit_code,
    get_code,
    make_code,
    pauli_string_matrix,
    steane_code,
    steane_errors,
    validate_code,
)
from cascade.matrixlab import kron, partial_trace

SX = np.array([[0, 1], [1, 0]])
SZ = np.diag([1, -1])


@pytest.fixture(params=["five", "steane"])
def code(request):
    return get_code(request.param)


def test_pauli_string_matrix_examples():
    assert np.array_equal(pauli_string_matrix("IIIII"), np.eye(32))
    assert np.array_equal(pauli_string_matrix("XIIII"), kron(SX, np.eye(16)))
    m = pauli_string_matrix("XZIII")
    assert np.array_equal(m @ m, np.eye(32))
    with pytest.raises(ValueError):
        pauli_string_matrix("I" * 8)
    with pytest.raises(ValueError):
        PauliString("XQ")


def test_validation_passes(code):
    report = validate_code(code)
    assert report.passed, str(report)


def test_gram_is_identity(code):
    vecs = code.encoder
    assert vecs.shape == (2**code.n, 2**code.n)
    assert np.max(np.abs(vecs.conj().T @ vecs - np.eye(2**code.n))) < 1e-10


def test_encoder_columns_follow_errors(code):
    u = code.encoder
    for m in (0, 3, len(code.errors) - 1):
        e = pauli_string_matrix(code.errors[m])
        assert np.allclose(u[:, 2 * m], e @ code.logical0, atol=1e-15)
        assert np.allclose(u[:, 2 * m + 1], e @ code.logical1, atol=1e-15)
    # decoding E_3 |0_L> lands on |a_3> (x) |0>
    target = np.zeros(2**code.n)
    target[2 * 3] = 1
    assert np.allclose(u.conj().T @ (pauli_string_matrix(code.errors[3]) @ code.logical0), target, atol=1e-12)


def test_error_correction_conditions(code):
    p = np.outer(code.logical0, code.logical0.conj()) + np.outer(code.logical1, code.logical1.conj())
    mats = [pauli_string_matrix(e) for e in code.errors[:8]]
    for i, a in enumerate(mats):
        for j, b in enumerate(mats):
            lhs = p @ a.conj().T @ b @ p
            assert np.max(np.abs(lhs - (i == j) * p)) < 1e-10


def test_noiseless_decoding_is_identity(code):
    u = code.encoder
    for c in (0, 1):
        for d in (0, 1):
            out = partial_trace(u.conj().T @ np.outer(u[:, c], u[:, d].conj()) @ u, [code.n - 1])
            expected = np.zeros((2, 2))
            expected[c, d] = 1
            assert np.max(np.abs(out - expected)) < 1e-12


def test_five_qubit_error_order():
    labels = [e.label for e in five_qubit_code().errors]
    assert labels[0] == "IIIII"
    assert labels[1:6] == ["XIIII", "IXIII", "IIXII", "IIIXI", "IIIIX"]
    assert labels[6] == "YIIII" and labels[11] == "ZIIII"


def test_steane_error_set():
    errors = steane_errors()
    assert len(errors) == 64
    assert len({_syndrome(e.label) for e in errors}) == 64
    assert [e.weight for e in errors].count(1) == 21
    pairs = [e.label for e in errors if e.weight == 2]
    assert len(pairs) == 42
    assert sum("Z" not in p for p in pairs) == 3
    # pure lexicographic completion would admit more Z-free pairs
    assert len(steane_errors(xy_pair_limit=99)) == 64


def test_steane_codewords_are_css():
    code = steane_code()
    z0 = np.flatnonzero(np.abs(code.logical0) > 0)
    assert len(z0) == 8 and all(bin(i).count("1") % 2 == 0 for i in z0)
    z1 = np.flatnonzero(np.abs(code.logical1) > 0)
    assert sorted(z1) == sorted(127 - z0)


def test_duplicate_error_is_diagnosed():
    good = five_qubit_code()
    errors = list(good.errors)
    errors[1] = errors[2]
    bad = make_code("dup", good.logical0, good.logical1, errors, check=False)
    report = validate_code(bad)
    assert not report.passed
    assert report.violations["gram"] > 0.5
    assert any("duplicate syndrome" in line for line in report.diagnosis)
    with pytest.raises(CodeError, match="not orthonormal"):
        build_encoder(good.logical0, good.logical1, errors)


def test_wrong_error_count():
    good = five_qubit_code()
    with pytest.raises(CodeError, match="cannot fill"):
        build_encoder(good.logical0, good.logical1, good.errors[:-1])


def test_code_json_export(code):
    data = json.loads(code.to_json())
    assert data["name"] == code.name and data["n"] == code.n
    assert len(data["errors"]) == 2 ** (code.n - 1)
    amps = np.array([complex(*z) for z in data["logical0"]])
    assert np.array_equal(amps, code.logical0)


def test_unknown_code():
    with pytest.raises(ValueError, match="unknown code"):
        get_code("shor")


def test_codes_are_cached():
    assert five_qubit_code() is five_qubit_code()
    assert not steane_code().encoder.flags.writeable
