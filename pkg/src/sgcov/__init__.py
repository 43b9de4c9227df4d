"""Covers and expansions of finite semigroups and automata."""

from .semigroups import (FiniteSemigroup, GeneratedSemigroup, GreenData,
                         SemigroupError, SgMorphism, algebraic_rank,
                         green_data, idempotent_below, induced_morphism,
                         kernel_in_variety, maltsev_kernel, omega_exponent,
                         omega_power, parse_sg, right_stabilizer,
                         serialize_sg, variety_check)
from .automata import (AutMorphism, Automaton, AutomatonError,
                       ResourceLimitError, RightCongruence, TransitionMonoid,
                       canonical_form, cayley_graph, cayley_morphism,
                       direct_product, enumerate_interval, find_morphism,
                       identity_morphism, induced_monoid_map,
                       injectivity_check, isomorphic, parse_aut, quotient,
                       rank_condition_check, reach_structure, regular_classes,
                       serialize_aut, transition_monoid)
from .ranks import (RankContext, RankError, RankPartition, SausageReport,
                    conjugate_rank_check, edge_rank, idempotent_chain,
                    partition_by_edge_ranks, path_rank, rank_of_class,
                    rank_partition, sausage_check, stabilizer_hypotheses,
                    stabilizer_rank_sets, word_rank)
from .expansions import (BackwardsKReport, ExpansionError, FreeObject,
                         LExpansion, MaltsevResult, apply_pipeline,
                         backwards_k_check, backwards_k_pair,
                         classical_rhodes_l, free_object, left_automaton,
                         maltsev_expansion, maltsev_maximality_oracle,
                         parse_pipeline, reduce_chain, rhodes_l, rhodes_r,
                         rhodes_r_of_morphism)
from .glc import (GlcComparison, GlcError, GlcOptions, GlcPipeline, GlcResult,
                  KeyLemmaReport, KeyLemmaWitness, StringAutomaton,
                  build_string_automaton, check_glc_equality,
                  enumerate_string_automata, glc_bottom_up, glc_join,
                  key_lemma_witness, make_pipeline, preff_pipeline,
                  verify_key_lemma)
from .cli import export_dot

__version__ = "0.1.0"
