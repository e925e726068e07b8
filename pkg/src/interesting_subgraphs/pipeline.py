"""End-to-end run: ingest, query, group, construct, filter, measure, compare,
discover, report."""
from __future__ import annotations

import contextlib
import dataclasses
import json
import logging
import random
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .candidates import (RULES, PredicateSpec, construct_candidate, filter_candidates_with_reasons,
                         group_nodes, initial_query)
from .compare import divergence_profile, sample_background
from .discover import VECTORS, discover, recommend_repartition
from .errors import ConfigError, DataError, GraphError, PatternSyntaxError
from .graph import ingest_tweets, read_jsonl
from .metrics import METRICS, compute_metrics, graph_corpus, load_stopwords, vocabulary_diversity
from .patterns import load_rules, parse_group_pattern, with_derived_edges

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_PIPELINE = 0, 2, 3, 4


class PipelineError(Exception):
    """A stage failed; ``exit_code`` follows the CLI convention."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause
        if isinstance(cause, (ConfigError, PatternSyntaxError)):
            self.exit_code = EXIT_CONFIG
        elif isinstance(cause, (DataError, OSError)):
            self.exit_code = EXIT_DATA
        else:
            self.exit_code = EXIT_PIPELINE


@dataclass
class PipelineConfig:
    input: str
    keywords: list
    date_from: str | None = None
    group_pattern: str = "(:tweet)-[:uses]->(:hashtag{text})"
    rule: str = "G1"
    hop_budget: int = 1
    theta_n: int = 10
    predicates: list = field(default_factory=list)
    n_bins: int = 20
    n_walks: int = 3
    walk_target_factor: float = 3.0
    k: int = 3
    tau_d: float = 0.5
    seed: int = 0
    out: str = "isub-out"
    rules_file: str | None = None
    stopwords_file: str | None = None
    histograms: str = "top"  # all | top | none

    def __post_init__(self):
        if isinstance(self.keywords, str):
            self.keywords = [self.keywords]
        if not self.keywords or not all(isinstance(k, str) and k.strip() for k in self.keywords):
            raise ConfigError("keywords must be a non-empty list of strings")
        if self.rule not in RULES:
            raise ConfigError(f"rule must be one of {RULES}")
        for name in ("hop_budget", "theta_n", "n_bins", "n_walks", "k"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(f"{name} must be a positive integer")
        for name in ("walk_target_factor", "tau_d"):
            if not isinstance(getattr(self, name), (int, float)) or getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")
        if self.histograms not in ("all", "top", "none"):
            raise ConfigError("histograms must be all, top or none")

    @classmethod
    def from_dict(cls, data: dict, base_dir=None) -> "PipelineConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config fields {sorted(unknown)}")
        data = dict(data)
        if base_dir is not None:
            for key in ("input", "rules_file", "stopwords_file"):
                if data.get(key) and not Path(data[key]).is_absolute():
                    data[key] = str(Path(base_dir) / data[key])
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def load(cls, path) -> "PipelineConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data, base_dir=Path(path).parent)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@contextlib.contextmanager
def _stage(name):
    try:
        yield
    except PipelineError:
        raise
    except (ConfigError, DataError, GraphError, PatternSyntaxError, ValueError, OSError) as exc:
        raise PipelineError(name, exc) from exc


def _safe(cid):
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", cid)


def graph_summary(g):
    return {"nodes": len(g.nodes), "edges": len(g.edges),
            "node_labels": dict(sorted(Counter(n.label for n in g.nodes.values()).items())),
            "edge_labels": dict(sorted(Counter(e.label for e in g.edges.values()).items()))}


def analyze(cfg: PipelineConfig) -> dict:
    """Run every stage and return the report as a dict (nothing written)."""
    return _run(cfg)[0]


def build_candidates(cfg: PipelineConfig):
    """Stages up to filtering. Returns ``(background, groups, candidates,
    dropped, stopwords)``."""
    with _stage("config"):
        pattern = parse_group_pattern(cfg.group_pattern)
        preds = PredicateSpec.from_config(cfg.predicates)
        rules = load_rules(cfg.rules_file) if cfg.rules_file else []
        stopwords = load_stopwords(cfg.stopwords_file)
    with _stage("ingest"):
        g0 = ingest_tweets(read_jsonl(cfg.input))
        if rules:
            g0 = with_derived_edges(g0, rules)
    with _stage("query"):
        bg = initial_query(g0, cfg.keywords, cfg.date_from)
    with _stage("group"):
        groups = group_nodes(bg, pattern)
    with _stage("construct"):
        width = max(4, len(str(len(groups))))
        raw = [construct_candidate(bg, grp, cfg.rule, cfg.hop_budget, cid=f"c{i:0{width}d}")
               for i, grp in enumerate(groups)]
        candidates, dropped = filter_candidates_with_reasons(raw, cfg.theta_n, preds)
        if len(candidates) < 2:
            raise DataError(f"{len(candidates)} candidate(s) survive filtering; need at least 2")
    return bg, groups, candidates, dropped, stopwords


def _run(cfg: PipelineConfig):
    bg, groups, candidates, dropped, stopwords = build_candidates(cfg)
    with _stage("metrics"):
        bundles = {c.cid: compute_metrics(c, stopwords) for c in candidates}
    with _stage("compare"):
        mean_size = float(np.mean([len(c.graph.nodes) for c in candidates]))
        target = max(2, int(round(mean_size * cfg.walk_target_factor)))
        samples = sample_background(bg, target, cfg.n_walks, random.Random(cfg.seed))
        sample_bundles = [compute_metrics(s, stopwords) for s in samples]
        bg_div = float(np.mean([vocabulary_diversity(graph_corpus(s), stopwords)
                                for s in samples]))
        records, hists = [], {}
        for c in candidates:
            h = {}
            records.append(divergence_profile(c, bundles[c.cid], samples, bg_div, cfg.n_bins,
                                              sample_bundles=sample_bundles, histograms=h))
            hists[c.cid] = h
    with _stage("discover"):
        verdict = discover(records, cfg.k, cfg.tau_d)
        by_id = {c.cid: c for c in candidates}
        repartition = {cid: recommend_repartition(by_id[cid], cfg.keywords)
                       for cid in sorted(verdict.l)}

    report = {
        "config": cfg.to_dict(),
        "background": graph_summary(bg),
        "group_count": len(groups),
        "candidates": [{
            "cid": c.cid, "group_key": c.group_key, "rule": c.rule,
            "nodes": len(c.graph.nodes), "edges": len(c.graph.edges),
            "tweets": len(c.corpus), "diversity": bundles[c.cid].diversity,
            "why": verdict.why(c.cid),
        } for c in candidates],
        "dropped": [{"cid": cid, "reason": r} for cid, r in dropped],
        "samples": {"target_size": target, "background_diversity": bg_div,
                    "graphs": [graph_summary(s) for s in samples],
                    "metrics": [b.summary() for b in sample_bundles]},
        "metrics": {cid: bundles[cid].summary() for cid in sorted(bundles)},
        "divergences": {r.cid: r.to_dict() for r in records},
        "verdict": verdict.to_dict(),
        "repartition_recommendations": repartition,
    }
    report["interesting"] = [{
        "cid": cid, **by_id[cid].provenance, "why": verdict.why(cid)}
        for cid in sorted(verdict.interesting)]
    return report, bundles, hists, verdict


def run_pipeline(cfg: PipelineConfig) -> Path:
    """Run the pipeline and write ``report.json``, ``metrics.json`` and the
    histogram CSVs under ``cfg.out``; returns the report path."""
    report, bundles, hists, verdict = _run(cfg)
    with _stage("report"):
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        if cfg.histograms == "all":
            chosen = sorted(hists)
        elif cfg.histograms == "top":
            chosen = sorted({c for v in VECTORS for c in verdict.top_k[v]} | set(verdict.l))
        else:
            chosen = []
        files = []
        for cid in chosen:
            d = out / "histograms" / _safe(cid)
            d.mkdir(parents=True, exist_ok=True)
            for (metric, j), (cand, ref) in sorted(hists[cid].items()):
                for side, h in (("candidate", cand), ("reference", ref)):
                    p = d / f"{metric}_s{j}_{side}.csv"
                    h.to_csv(p)
                    files.append(str(p.relative_to(out)))
        report["histogram_files"] = files
        (out / "metrics.json").write_text(json.dumps(
            {cid: bundles[cid].to_dict() for cid in sorted(bundles)}, sort_keys=True))
        path = out / "report.json"
        path.write_text(json.dumps(report, indent=1, sort_keys=True))
    logger.info("report written to %s", path)
    return path


__all__ = ["PipelineConfig", "PipelineError", "analyze", "build_candidates", "run_pipeline",
           "METRICS"]
