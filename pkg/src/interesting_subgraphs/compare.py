"""Comparable histograms, Jensen-Shannon divergence and background sampling.

The background graph is always the reference: its values fix the equi-width
bin edges and the candidate's values are binned into those edges, with
out-of-range values clamped into the first or last bin.
"""
from __future__ import annotations

import csv
import logging
import random
from dataclasses import dataclass, field

import numpy as np

from .errors import GraphError
from .graph import PropertyGraph, connected_components, induced_subgraph
from .metrics import METRICS, MetricBundle, compute_metrics

logger = logging.getLogger(__name__)

DEFAULT_BINS = 20
TELEPORT = 0.15
STEP_CAP_FACTOR = 50


@dataclass
class Histogram:
    bin_edges: np.ndarray
    counts: np.ndarray

    @property
    def n_bins(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def normalized(self) -> np.ndarray:
        total = self.counts.sum()
        if total == 0:
            return np.zeros(len(self.counts))
        return self.counts / total

    def rows(self):
        norm = self.normalized
        for i in range(self.n_bins):
            yield (float(self.bin_edges[i]), float(self.bin_edges[i + 1]),
                   int(self.counts[i]), float(norm[i]))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["edge_low", "edge_high", "count", "normalized"])
            for row in self.rows():
                w.writerow([repr(row[0]), repr(row[1]), row[2], repr(row[3])])

    def to_dict(self) -> dict:
        return {"bin_edges": [float(e) for e in self.bin_edges],
                "counts": [int(c) for c in self.counts]}


def cut2bin(values, n_bins: int = DEFAULT_BINS, edges=None) -> Histogram:
    """Bin ``values`` into ``n_bins`` equi-width bins over their range, or into
    the given ``edges`` with clamping of out-of-range values.

    Bins are half-open ``[lo, hi)`` except the last, which is closed. A
    zero-width range spreads the ``n_bins`` bins over a unit interval centred
    on the value, so exactly one bin is occupied and clamped candidate
    values can still land elsewhere.
    """
    vals = np.asarray(values, dtype=float).ravel()
    if edges is None:
        if n_bins < 1:
            raise ValueError("n_bins must be positive")
        if vals.size == 0:
            raise ValueError("cannot derive bin edges from an empty value list")
        lo, hi = float(vals.min()), float(vals.max())
        if lo == hi:
            edges = np.linspace(lo - 0.5, lo + 0.5, n_bins + 1)
        else:
            edges = np.linspace(lo, hi, n_bins + 1)
    else:
        edges = np.asarray(edges, dtype=float)
        if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
            raise ValueError("bin edges must be strictly ascending with at least two entries")
    idx = np.searchsorted(edges, vals, side="right") - 1
    idx = np.clip(idx, 0, len(edges) - 2)
    counts = np.bincount(idx, minlength=len(edges) - 1).astype(np.int64)
    return Histogram(edges, counts)


def js_divergence(p: Histogram, q: Histogram) -> float:
    """Base-2 Jensen-Shannon divergence of two histograms on identical edges."""
    if len(p.bin_edges) != len(q.bin_edges) or not np.array_equal(p.bin_edges, q.bin_edges):
        raise ValueError("incompatible histograms: bin edges differ")
    if p.total == 0 or q.total == 0:
        raise ValueError("cannot compare an empty histogram")
    return jsd(p.normalized, q.normalized)


def jsd(p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape or not (p.sum() > 0 and q.sum() > 0):
        raise ValueError("jsd needs two non-empty distributions of equal length")
    m = 0.5 * (p + q)

    def kl(a):
        # dividing by the support's own mass keeps disjoint supports at exactly 1
        mask = a > 0
        w = a[mask]
        return float(np.sum(w * np.log2(w / m[mask])) / np.sum(w))

    value = 0.5 * kl(p) + 0.5 * kl(q)
    return min(max(value, 0.0), 1.0)


def compare_histograms(candidate_values, reference_values, n_bins: int = DEFAULT_BINS):
    """Bin the reference first, the candidate on the reference's edges.

    Returns ``(jsd, (candidate_hist, reference_hist), edges)``.
    """
    if len(candidate_values) == 0 or len(reference_values) == 0:
        raise ValueError("compare_histograms needs non-empty value lists")
    ref = cut2bin(reference_values, n_bins)
    cand = cut2bin(candidate_values, edges=ref.bin_edges)
    return js_divergence(cand, ref), (cand, ref), ref.bin_edges


def sample_background(g: PropertyGraph, target_size: int, n_walks: int = 3,
                      rng: random.Random | int | None = None,
                      teleport: float = TELEPORT) -> list[PropertyGraph]:
    """Random-walk samples of ``g``.

    Each walk starts at a uniform random node, teleports with probability
    ``teleport`` and otherwise steps to a uniform random neighbour of the
    undirected view, until ``target_size`` distinct nodes are seen or
    ``50 * target_size`` steps are taken. The sample is the largest component
    of the subgraph induced on the visited nodes.
    """
    if not g.nodes:
        raise GraphError("cannot sample an empty graph")
    if target_size < 1 or n_walks < 1:
        raise ValueError("target_size and n_walks must be positive")
    target_size = min(target_size, len(g.nodes))
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    proj = g.projection()
    ptr, idx = proj.indptr.tolist(), proj.indices.tolist()
    n = proj.n
    cap = STEP_CAP_FACTOR * target_size
    samples = []
    for _ in range(n_walks):
        v = rng.randrange(n)
        visited = {v}
        steps = 0
        while len(visited) < target_size and steps < cap:
            steps += 1
            deg = ptr[v + 1] - ptr[v]
            if deg == 0 or rng.random() < teleport:
                v = rng.randrange(n)
            else:
                v = idx[ptr[v] + rng.randrange(deg)]
            visited.add(v)
        sub = induced_subgraph(g, (proj.ids[i] for i in visited))
        comps = connected_components(sub)
        samples.append(induced_subgraph(sub, comps[0]) if len(comps) > 1 else sub)
    return samples


@dataclass
class DivergenceRecord:
    cid: str
    jsd: dict
    per_sample: dict = field(default_factory=dict)
    n_samples: int = 1
    diversity_ratio: float = 1.0
    # sign of median(candidate) - median(reference) per metric, pooled over samples
    shift: dict = field(default_factory=dict)

    def __getitem__(self, metric):
        return self.jsd[metric]

    def total(self) -> float:
        return float(sum(self.jsd[m] for m in METRICS))

    def to_dict(self) -> dict:
        return {"cid": self.cid, "jsd": dict(self.jsd), "per_sample": dict(self.per_sample),
                "n_samples": self.n_samples, "diversity_ratio": self.diversity_ratio,
                "median_shift": dict(self.shift)}


def divergence_profile(c, bundle: MetricBundle, samples, background_diversity: float,
                       n_bins: int = DEFAULT_BINS, sample_bundles=None,
                       histograms: dict | None = None) -> DivergenceRecord:
    """Mean JSD of each metric of ``c`` against every background sample.

    ``sample_bundles`` may carry precomputed metrics for ``samples``. When
    ``histograms`` is a dict it is filled with ``(metric, sample_index) ->
    (candidate_hist, reference_hist)``.
    """
    if not samples:
        raise ValueError("divergence_profile needs at least one background sample")
    if sample_bundles is None:
        sample_bundles = [compute_metrics(s) for s in samples]
    cid = getattr(c, "cid", "")
    means, per_sample, shift = {}, {}, {}
    for m in METRICS:
        cand_vals = bundle.values(m)
        scores = []
        ref_pool = []
        for j, sb in enumerate(sample_bundles):
            ref_vals = sb.values(m)
            ref_pool.extend(ref_vals)
            if not cand_vals or not ref_vals:
                logger.debug("%s: no %s values on one side; divergence 0", cid, m)
                scores.append(0.0)
                continue
            value, hists, _ = compare_histograms(cand_vals, ref_vals, n_bins)
            scores.append(value)
            if histograms is not None:
                histograms[m, j] = hists
        means[m] = float(np.mean(scores))
        per_sample[m] = scores
        if cand_vals and ref_pool:
            diff = float(np.median(cand_vals) - np.median(ref_pool))
            shift[m] = (diff > 0) - (diff < 0)
        else:
            shift[m] = 0
    ratio = bundle.diversity / background_diversity if background_diversity > 0 else 1.0
    return DivergenceRecord(cid, means, per_sample, len(samples), float(ratio), shift)
