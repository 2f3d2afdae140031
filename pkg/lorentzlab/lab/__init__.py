from .sampling import PairSampler, Strategy, sample_simple_field
from .checks import (
    CheckReport, Verdict, WitnessBundle, check_ac_norm, check_distance_bound, check_embedding_eps,
    check_equivalence, check_general_holder, check_holder, check_holder_global_1d, check_morrey_1d,
    check_morrey_blowup, check_morrey_nd, check_poincare_ratio, default_sampler, embedding_constant,
    estimate_holder_seminorm, holder_constant_1d, poincare_ratio, rearranged_product_integral,
    witness_alpha, witness_strict_inclusion, worst_of,
)
from .report import counts_line, format_pretty, jsonl_lines, summary_frame, write_csv, write_jsonl
from .sweep import Functional, parse_grid, sweep
from .suite import DEFAULT_SETTINGS, SUITES, Suite, check_settings, load_suite
