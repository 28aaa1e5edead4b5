"""A tour of single-qubit channels: Kraus form, Choi matrix, fidelity, twirl.

Run with ``python demos/channels_tour.py``.
"""

import numpy as np

from cascade import (
    affine_from_channel,
    amplitude_damping,
    choi_distance,
    choi_from_kraus,
    entangling_fidelity,
    kraus_from_choi,
    twirl_to_depolarizing,
)

# Amplitude damping with gamma = 0.2 keeps |0> and leaks |1> into it.
ch = amplitude_damping(0.2)
chi = choi_from_kraus(ch)
print("Choi matrix of amplitude damping (gamma=0.2):")
print(np.round(chi.chi.real, 6))
print("entangling fidelity:", entangling_fidelity(chi))

# Going back to Kraus operators gives an equivalent channel.
again = choi_from_kraus(kraus_from_choi(chi))
print("round trip Choi error:", float(np.max(np.abs(again.chi - chi.chi))))

# The twirl keeps the fidelity but forgets the direction of the damping.
dep = twirl_to_depolarizing(chi)
print("twirled fidelity:", entangling_fidelity(dep))
print("distance to its twirl:", choi_distance(chi, dep))

# Bloch picture: r -> m r + delta shrinks and shifts the sphere towards |0>.
aff = affine_from_channel(ch)
print("Bloch matrix diagonal:", np.round(np.diag(aff.m), 6))
print("Bloch shift:", np.round(aff.delta, 6))
