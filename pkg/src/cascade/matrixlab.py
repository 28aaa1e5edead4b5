"""Dense complex linear algebra for small qubit registers.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Registers hold
at most seven qubits plus bookkeeping, so nothing here is sparse.
"""

import numpy as np

from ._config import TOL

MAX_DIM = 2**14


def as_matrix(a):
    """Return ``a`` as a finite 2-D complex array (copying only if needed)."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def dagger(a):
    return np.conj(np.swapaxes(a, -1, -2))


def unitarity_error(u):
    u = as_matrix(u)
    return np.linalg.norm(u @ dagger(u) - np.eye(u.shape[0]))


def check_unitary(u, tol=None):
    """Validate that ``u`` is unitary (Frobenius norm of ``u u^dag - I``)."""
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        raise ValueError(f"unitary must be square, got {u.shape}")
    tol = TOL.unitarity if tol is None else tol
    err = unitarity_error(u)
    if err > tol:
        raise ValueError(f"matrix is not unitary: ||U U^dag - I||_F = {err:.3e} > {tol:.1e}")
    return u


def kron(a, b, *rest):
    """Tensor product, left factor most significant."""
    out = as_matrix(a)
    for m in (b, *rest):
        m = as_matrix(m)
        rows, cols = out.shape[0] * m.shape[0], out.shape[1] * m.shape[1]
        if rows > MAX_DIM or cols > MAX_DIM:
            raise ValueError(f"kron result {rows}x{cols} exceeds {MAX_DIM}x{MAX_DIM}")
        out = np.kron(out, m)
    return out


def hermiticity_error(h):
    return float(np.max(np.abs(h - dagger(h)))) if h.size else 0.0


def _off_norm(h):
    return np.linalg.norm(h - np.diag(np.diag(h)))


def eig_hermitian(h, tol=None, max_sweeps=None):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    h : array_like
        Square Hermitian matrix (checked to ``TOL.hermiticity``).
    tol : float, optional
        Sweeps stop once the off-diagonal Frobenius norm falls below
        ``tol * ||h||_F``.
    max_sweeps : int, optional

    Returns
    -------
    eigenvalues : ndarray of float, sorted descending
    eigenvectors : ndarray, orthonormal columns matching ``eigenvalues``
    """
    h = as_matrix(h)
    n = h.shape[0]
    if n != h.shape[1]:
        raise ValueError(f"eig_hermitian needs a square matrix, got {h.shape}")
    err = hermiticity_error(h)
    if err > TOL.hermiticity:
        raise ValueError(f"matrix is not Hermitian: max |h - h^dag| = {err:.3e} > {TOL.hermiticity:.1e}")
    tol = TOL.jacobi if tol is None else tol
    max_sweeps = TOL.jacobi_max_sweeps if max_sweeps is None else max_sweeps

    a = 0.5 * (h + dagger(h))
    v = np.eye(n, dtype=np.complex128)
    scale = np.linalg.norm(a)
    threshold = tol * scale
    for _ in range(max_sweeps):
        if _off_norm(a) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                # negligible pivots (possibly subnormal) would overflow the phase and tau
                if mag <= 1e-20 * threshold or mag < 1e-290:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # J = diag(1, conj(phase)) on (p, q) followed by a real rotation
                jpp, jpq = c, s
                jqp, jqq = -s * np.conj(phase), c * np.conj(phase)
                colp, colq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = colp * jpp + colq * jqp
                a[:, q] = colp * jpq + colq * jqq
                rowp, rowq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = np.conj(jpp) * rowp + np.conj(jqp) * rowq
                a[q, :] = np.conj(jpq) * rowp + np.conj(jqq) * rowq
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = vp * jpp + vq * jqp
                v[:, q] = vp * jpq + vq * jqq
    else:
        if _off_norm(a) > threshold:
            raise RuntimeError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    w = np.real(np.diag(a))
    order = np.argsort(-w, kind="stable")
    w, v = w[order], v[:, order]
    return w, _orthonormalize_clusters(w, v, scale)


def _orthonormalize_clusters(w, v, scale):
    # Gram-Schmidt inside each degenerate cluster, in index order
    v = v.copy()
    gap = max(scale, 1.0) * 1e-10
    start = 0
    n = len(w)
    while start < n:
        stop = start + 1
        while stop < n and abs(w[stop] - w[stop - 1]) <= gap:
            stop += 1
        for k in range(start, stop):
            for j in range(start, k):
                v[:, k] -= np.vdot(v[:, j], v[:, k]) * v[:, j]
            v[:, k] /= np.linalg.norm(v[:, k])
        start = stop
    return v


def trace_norm(a):
    """Sum of singular values, ``Tr sqrt(a^dag a)``."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"trace_norm needs a square matrix, got {a.shape}")
    if hermiticity_error(a) <= TOL.equality * max(1.0, np.max(np.abs(a))):
        w, _ = eig_hermitian(a)
        return float(np.sum(np.abs(w)))
    w, _ = eig_hermitian(dagger(a) @ a)
    return float(np.sum(np.sqrt(np.clip(w, 0.0, None))))


def num_qubits(dim):
    n = int(dim).bit_length() - 1
    if dim < 1 or 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def apply_single_qubit_op(op, target, state):
    """Left-multiply ``state`` by ``op`` acting on qubit ``target``.

    Qubit 0 is the most significant (leftmost kron factor). ``state`` may be
    any ``2**n x m`` matrix; a 1-D vector is also accepted.
    """
    op = np.asarray(op, dtype=np.complex128)
    state = np.asarray(state, dtype=np.complex128)
    n = num_qubits(state.shape[0])
    if not 0 <= target < n:
        raise ValueError(f"target qubit {target} out of range for {n} qubits")
    lead, trail = 2**target, 2 ** (n - target - 1)
    t = state.reshape(lead, 2, trail, -1)
    out = np.einsum("ij,ajbc->aibc", op, t)
    return out.reshape(state.shape)


def apply_single_qubit_op_right(op, target, state):
    """Return ``state @ (I x .. x op^dag x .. x I)`` with ``op^dag`` on ``target``."""
    state = np.asarray(state, dtype=np.complex128)
    return dagger(apply_single_qubit_op(op, target, dagger(state)))


def partial_trace(state, keep):
    """Reduce a ``2**n``-dimensional operator onto the qubits in ``keep``.

    The kept qubits appear in ascending index order in the result.
    """
    state = as_matrix(state)
    n = num_qubits(state.shape[0])
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("partial_trace needs a non-empty keep set")
    if keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"keep {keep} out of range for {n} qubits")
    drop = [q for q in range(n) if q not in keep]
    t = state.reshape([2] * (2 * n))
    row = list(range(n))
    col = [n + q for q in range(n)]
    for q in drop:
        col[q] = row[q]
    out_idx = [row[q] for q in keep] + [col[q] for q in keep]
    d = 2 ** len(keep)
    return np.einsum(t, row + col, out_idx).reshape(d, d)
