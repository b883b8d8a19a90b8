"""Sandwiched Renyi/Tsallis entropies for states and channels, with a
Monte-Carlo falsification harness for their continuity bounds."""

from .operator_core import (
    DensityOperator,
    HermitianOperator,
    JordanParts,
    ValidationError,
    density,
    eig_hermitian,
    frac_power,
    jordan_decompose,
    kron,
    partial_trace,
    trace_distance,
)
from .states import (
    BipartiteState,
    DeltaBundle,
    bipartite,
    build_delta,
    equal_marginal_pair,
    purify,
    random_density,
    random_pure,
)
from .divergences import (
    RenyiOrder,
    relative_entropy,
    sandwiched_renyi,
    sandwiched_tsallis,
    trace_functional,
    tsallis_relative,
    von_neumann_entropy,
)
from .conditional_entropy import (
    cond_entropy,
    duality_gap,
    renyi_down,
    renyi_up,
    tsallis_down_plain,
    tsallis_down_sandwiched,
    tsallis_up_plain_closed,
    tsallis_up_sandwiched,
)
from .bounds import (
    BoundSpec,
    MarwahParams,
    afw_bound,
    bound_value,
    fannes_audenaert,
    marwah_up_bound,
    renyi_down_bound,
    tsallis_down_bound,
)
from .channels import (
    DiamondBracket,
    QuantumChannel,
    apply,
    channel_trace_distance,
    choi_to_kraus,
    depolarizing,
    diamond_distance,
    extend_apply,
    identity_channel,
    kraus_to_choi,
    mix_channels,
    pauli_channel,
    random_channel,
    randomizing,
    replacer,
    tensor_channels,
)
from .channel_entropy import (
    ChannelEntropyResult,
    channel_entropy,
    pseudo_additivity_gap,
    renyi_additivity_gap,
)
from .optim import ConvergenceError, OptimizerConfig
from .harness import (
    CampaignConfig,
    TrialReport,
    run_campaign,
    summarize,
    verify_channel_continuity,
    verify_conditional_continuity,
    verify_identities,
    verify_proof_steps,
    write_csv,
    write_jsonl,
)

__version__ = "0.1.0"
