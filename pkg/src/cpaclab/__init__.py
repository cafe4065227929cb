"""Executable constructions for computable learning of finitely supported
hypothesis classes: exact rational losses, dimension windows, witness
verification, size-graded block families, diagonalization against coded
witnesses, and a seeded Monte-Carlo harness."""

from .classes import (UNKNOWN, BlockIndex, ClassDescriptor, augmented_with_good,
                      baseline_class, block, block_class, block_class_membership,
                      block_of, diagonal_block, diagonal_class,
                      diagonal_hypothesis, diagonal_members, diagonal_membership,
                      enumerate_good, full_class, good_class,
                      good_hypothesis_check, odd_marked_hypothesis,
                      punctured_hypothesis, union_class)
from .core import (Distribution, Hypothesis, LabeledExample, Learner, Sample,
                   canonical_key, distribution_from_json, distribution_to_json,
                   draw_sample, empirical_distribution, empirical_loss,
                   enumerate_samples, fraction_from_str, fraction_to_str,
                   hypothesis_from_json, hypothesis_to_json, sample_from_json,
                   sample_to_json, true_loss)
from .dims import (FiniteClassView, WitnessFn, all_ones_witness,
                   all_zeros_witness, largest_shattered_set, ldim_window,
                   restrict, shattered_tree, shatters, vc_dimension_window,
                   verify_witness, witness_excludes)
from .errors import (BudgetExceededError, CpacError, EmptySampleError,
                     MalformedProgramError, NotYetEnumeratedError, ReachError,
                     UndecidableRangeError)
from .harness import (DiagonalizationDemo, Estimate, ExperimentConfig,
                      ExperimentResult, ResultRow, build_class, build_function,
                      build_learner, build_witness, diagonalization_demo,
                      exact_infimum, pac_success_rate, run_experiment,
                      sample_complexity_curve, scpac_obstruction_demo,
                      uniform_convergence_rate)
from .learners import (AsymptoticErmReport, asymptotic_erm_block,
                       block_erm_learner, epsilon_block, erm_bounded, erm_good,
                       erm_good_learner, erm_learner, lift_report,
                       lift_to_asymptotic_erm, lifted_learner)
from .machines import (DovetailedFunction, EnumerableFunction, Instruction,
                       MachineRun, Program, RunOutcome, SurrogateFunction,
                       all_ones_witness_program, all_zeros_witness_program,
                       decode_pair, encode_pair, enumerate_machine_pairs,
                       machine_pair_index, pair_second_prefix_sum, run_bounded,
                       surrogate, witness_from_program)
from .rng import GENERATOR_ID, SplitMix64, derive_seed, mix64

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
