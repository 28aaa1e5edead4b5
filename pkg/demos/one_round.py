"""One round of encoding, noise and decoding, compared against closed forms.

Run with ``python demos/one_round.py``.
"""

import numpy as np

from cascade import (
    amplitude_damping,
    closed_form_ad_five,
    closed_form_ad_steane,
    dep_fidelity_step,
    effective_channel,
    entangling_fidelity,
    find_threshold,
    five_qubit_code,
    steane_code,
)
from cascade.noise import depolarizing

five, steane = five_qubit_code(), steane_code()

print("depolarizing noise, five-qubit code")
print(f"{'F0':>6} {'engine':>12} {'polynomial':>12}")
for F0 in np.linspace(0.8, 1.0, 5):
    numeric = entangling_fidelity(effective_channel(five, depolarizing(F0)))
    print(f"{F0:6.3f} {numeric:12.9f} {dep_fidelity_step(F0):12.9f}")

p = find_threshold()
print(f"\ncoding helps below p = {p:.9f}, that is above F0 = {1 - 0.75 * p:.9f}")

print("\namplitude damping, both codes")
print(f"{'gamma':>6} {'five':>12} {'closed':>12} {'Steane':>12} {'closed':>12}")
for g in (0.01, 0.05, 0.1, 0.3):
    ad = amplitude_damping(g)
    f5 = entangling_fidelity(effective_channel(five, ad))
    f7 = entangling_fidelity(effective_channel(steane, ad))
    print(f"{g:6.2f} {f5:12.9f} {closed_form_ad_five(g):12.9f} {f7:12.9f} {closed_form_ad_steane(g):12.9f}")
