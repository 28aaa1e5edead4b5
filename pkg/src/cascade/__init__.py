"""Effective-channel analysis of concatenated quantum error-correcting codes."""

from .channels import (
    BlochAffineMap,
    ChannelError,
    ChoiMatrix,
    QuantumChannel,
    affine_from_channel,
    choi_distance,
    choi_from_kraus,
    depolarizing_choi,
    entangling_fidelity,
    kraus_from_choi,
    twirl_to_depolarizing,
)
from .codes import CodeSpec, PauliString, five_qubit_code, get_code, steane_code, validate_code
from .engine import (
    ConcatenationTrace,
    closed_form_ad_five,
    closed_form_ad_steane,
    concatenate,
    dep_fidelity_step,
    dep_fidelity_step_p,
    effective_channel,
    effective_channel_with_recovery,
    find_threshold,
    reference_depolarizing_choi,
)
from .experiments import EnsembleSummary, ensemble
from .noise import (
    FiveParamNoise,
    PauliChannel,
    ad_from_fidelity,
    amplitude_damping,
    bit_flip,
    depolarizing,
    general_noise,
    model_fidelity,
    pauli,
    sample_at_fidelity,
)

__version__ = "0.1.0"
