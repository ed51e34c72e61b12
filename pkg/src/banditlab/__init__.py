"""Online multiclass learning under bandit feedback, at desk scale.

Exact Littlestone and bandit-Littlestone dimensions over explicit finite
classes, the version-space learners they drive, lower-bound adversaries, the
margin linear-separator embeddings, and a reproducible experiment harness.
"""

from .adversaries import (
    GuessingAdversary,
    MinimaxBanditAdversary,
    PermutationAdversary,
    draw_permutation_tape,
    guessing_game,
    make_adversary,
    make_guesser,
    sample_noise_sequence,
    sample_realizable_sequence,
)
from .catalog import constants_class, full_class, parse_spec, permutation_class, random_class
from .dimensions import (
    ClassCollection,
    bldim,
    capacity,
    format_witness,
    ldim,
    shatter_oracle,
    shatter_witness,
)
from .harness import GameConfig, Report, run_experiment, run_game
from .hypotheses import (
    FiniteClass,
    LabeledSequence,
    MultiLabelExample,
    RealizabilityViolation,
    VersionSpace,
    dumps_class,
    dumps_sequence,
    load_class,
    load_sequence,
    make_sequence,
    read_class,
    read_sequence,
    write_class,
    write_sequence,
)
from .linear import (
    BanditPerceptron,
    check_margin_realization,
    margin_gap,
    multiclass_perceptron,
    roots_of_unity_embedding,
    roots_of_unity_gap,
    standard_basis_embedding,
    unit_gap_scaled,
)
from .learners import (
    BanditFeedback,
    BanditOptimalLearner,
    CapacityLearner,
    Expert,
    ExpertsPool,
    Exp4Learner,
    FullInfoFeedback,
    SOABanditLearner,
    SOALearner,
    bandit_potential,
    expert_count,
    imitating_expert,
    make_learner,
    pool_for,
    run_exp4_on_sequence,
    soa_prediction,
)

__version__ = "0.1.0"
