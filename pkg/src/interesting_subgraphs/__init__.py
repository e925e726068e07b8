"""Discover interesting subgraphs of a social-media property graph.

Candidates come from grouping a keyword-selected background graph; each one
is tested by comparing its centrality distributions with random-walk samples
of that background.
"""
from .candidates import (CandidateSubgraph, NodeGroup, PredicateSpec, construct_candidate,
                         filter_candidates, group_nodes, initial_query)
from .compare import (DivergenceRecord, Histogram, compare_histograms, cut2bin,
                      divergence_profile, js_divergence, sample_background)
from .discover import Verdict, discover, recommend_repartition
from .graph import (PropertyGraph, TweetRecord, connected_components, induced_subgraph,
                    ingest_tweets, neighbors, read_jsonl)
from .kernels import BACKEND
from .metrics import (MetricBundle, average_neighbor_degree, compute_metrics, core_number,
                      edge_betweenness, eigenvector_centrality, node_betweenness,
                      subgraph_centrality, vocabulary_diversity)
from .patterns import apply_rule, parse_construction_rule, parse_group_pattern
from .pipeline import PipelineConfig, run_pipeline
from .synth import Planted, SynthSpec, synth_generate

__version__ = "0.1.0"
