"""Concatenate the Steane code at F0 = 0.94; it needs more levels than the five-qubit code.

Run with ``python demos/steane_cascade.py``.  Takes under a minute.
"""

from cascade.experiments import table3

t = table3()
for row in t.rows:
    l, *fs = row
    print(f"l={l}  " + "  ".join(f"{f:.6f}" for f in fs))
print("levels needed:", t.terminal)
