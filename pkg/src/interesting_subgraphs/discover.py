"""Pairwise tallying of divergence records into influence, navigability,
propagativeness and repartition verdicts."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .metrics import tokenize

VECTORS = ("v1", "v2", "v3")
WHY = {
    "v1": "holds more influential nodes than the background (eigenvector centrality)",
    "v2": "is more navigable than the background (edge betweenness)",
    "v3": "propagates faster than the background (node betweenness + neighbour degree)",
}
REPARTITION_NOTE = "uninterpretable - repartition"


@dataclass
class Verdict:
    v1: dict
    v2: dict
    v3: dict
    l: set
    top_k: dict
    interesting: set
    diversity_flags: dict
    notes: dict = field(default_factory=dict)

    def why(self, cid: str) -> list[str]:
        return [WHY[v] for v in VECTORS if cid in self.top_k[v]]

    def to_dict(self) -> dict:
        ids = sorted(self.v1)
        return {
            "scores": {cid: {v: getattr(self, v)[cid] for v in VECTORS} for cid in ids},
            "top_k": {v: list(self.top_k[v]) for v in VECTORS},
            "interesting": sorted(self.interesting),
            "repartition": sorted(self.l),
            "diversity_flags": {cid: self.diversity_flags[cid] for cid in ids},
            "notes": {cid: self.notes[cid] for cid in sorted(self.notes)},
        }


def discover(records, k: int = 3, diversity_threshold: float = 0.5) -> Verdict:
    """Score every ordered pair of records and pick the top-k of each vector.

    For a pair (a, b), b gains a v1 point when its eigenvector divergence is
    higher; given that, a v2 point when its edge-betweenness divergence is
    also higher; given both, a v3 point when nc + z is higher, and it joins
    the repartition list when sc + mu is higher. Interesting candidates sit
    in all three top-k lists and pass the diversity check.
    """
    records = list(records)
    if len(records) < 2:
        raise ValueError("discover needs at least two divergence records")
    if k < 1:
        raise ValueError("k must be positive")
    ids = [r.cid for r in records]
    if len(set(ids)) != len(ids):
        raise ValueError("divergence records must have distinct candidate ids")

    v1, v2, v3 = Counter(), Counter(), Counter()
    repartition = set()
    for a in records:
        for b in records:
            if a is b or not b["ev"] > a["ev"]:
                continue
            v1[b.cid] += 1
            if not b["ec"] > a["ec"]:
                continue
            v2[b.cid] += 1
            if b["nc"] + b["z"] > a["nc"] + a["z"]:
                v3[b.cid] += 1
            if b["sc"] + b["mu"] > a["sc"] + a["mu"]:
                repartition.add(b.cid)

    totals = {r.cid: r.total() for r in records}
    scores = {"v1": {c: v1[c] for c in ids}, "v2": {c: v2[c] for c in ids},
              "v3": {c: v3[c] for c in ids}}
    top_k = {}
    for v in VECTORS:
        ranked = sorted((c for c in ids if scores[v][c] > 0),
                        key=lambda c: (-scores[v][c], -totals[c], c))
        top_k[v] = ranked[:k]
    flags = {r.cid: bool(r.diversity_ratio <= diversity_threshold) for r in records}
    interesting = set(top_k["v1"]) & set(top_k["v2"]) & set(top_k["v3"])
    interesting = {c for c in interesting if flags[c]}
    notes = {c: REPARTITION_NOTE for c in repartition}
    return Verdict(scores["v1"], scores["v2"], scores["v3"], repartition, top_k,
                   interesting, flags, notes)


def recommend_repartition(c, original_keywords: list[str]) -> list[list[str]]:
    """Singleton keyword subsets ordered by how often each keyword occurs in
    the candidate's corpus; the original list when none occurs."""
    corpus = getattr(c, "corpus", c)
    if len(original_keywords) <= 1:
        return [list(original_keywords)]
    counts = Counter()
    for text in corpus:
        toks = tokenize(text or "")
        for kw in original_keywords:
            kt = tokenize(kw.lstrip("#"))
            if not kt:
                continue
            w = len(kt)
            counts[kw] += sum(1 for i in range(len(toks) - w + 1) if toks[i:i + w] == kt)
    if not any(counts.values()):
        return [list(original_keywords)]
    order = sorted(range(len(original_keywords)),
                   key=lambda i: (-counts[original_keywords[i]], i))
    return [[original_keywords[i]] for i in order]
