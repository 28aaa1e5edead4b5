"""Random noise models of fixed fidelity all flow to the depolarizing channel.

Draws M random five-parameter channels with F = 0.9, concatenates each with the
five-qubit code and reports the worst fidelity and worst distance per level.
The result depends only on the seed, not on the worker count.

Run with ``python demos/random_ensemble.py``.
"""

from cascade import ensemble

summary = ensemble(0.9, 50, seed=2024, keep_samples=True)
print(f"{summary.M} samples, {summary.levels} levels")
for l, (d, f) in enumerate(zip(summary.D_max, summary.F_min)):
    print(f"  l={l}  worst F {f:.7f}   worst distance {d:.2e}")

first = summary.samples[0]
print("first sample parameters:", first["params"])
