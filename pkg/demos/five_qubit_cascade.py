"""Concatenate the five-qubit code under three noise models at F0 = 0.92.

Prints the fidelity at each level and how far each effective channel sits from
the depolarizing channel of equal fidelity.

Run with ``python demos/five_qubit_cascade.py``.
"""

from cascade.experiments import table1, table2

fid = table1()
print("fidelity per level")
print(fid.to_csv())
print("levels needed to reach 1 - 1e-5:", fid.terminal)

dist = table2()
print("distance from the depolarizing channel of equal fidelity")
for l, d_ad, d_bf in dist.rows:
    print(f"  l={l}  amplitude damping {d_ad:9.3e}   bit flip {d_bf:9.3e}")
