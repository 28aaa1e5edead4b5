"""Build the five-qubit and Steane codes and check that they correct their errors.

Run with ``python demos/codes_tour.py``.
"""

import numpy as np

from cascade import five_qubit_code, steane_code, validate_code

for code in (five_qubit_code(), steane_code()):
    report = validate_code(code)
    print(f"{code.name}: n={code.n}, {len(code.errors)} correctable errors, passed={report.passed}")
    for key, value in report.violations.items():
        print(f"  {key:>24}: {value:.2e}")

    # The encoder is unitary, and each pair of columns is one error applied to the codewords.
    u = code.encoder
    print("  encoder unitarity error:", float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[1])))))
    weights = [e.weight for e in code.errors]
    print("  errors by weight:", {w: weights.count(w) for w in sorted(set(weights))})
