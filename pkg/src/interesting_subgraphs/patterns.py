"""Parsers for grouping patterns and edge-construction rules.

Two tiny Cypher-like languages, both restricted to linear paths::

    (:tweet{date})-[:uses]->(:hashtag{text})          grouping pattern
    (:tweet{popularity})                              single-node grouping

    (a:user)-[:mentions]->(b:user) if (a)-[:authors]->(t:tweet)-[:mentions]->(b:user)

Every parse either returns a structure or raises :class:`PatternSyntaxError`
carrying the character offset of the problem.
"""
from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .errors import PatternSyntaxError
from .graph import Edge, PropertyGraph

logger = logging.getLogger(__name__)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_ARROWS = ("<-", "->", "-")


@dataclass(frozen=True)
class NodeTerm:
    var: str | None
    label: str | None
    keys: tuple[str, ...] = ()

    def __str__(self):
        keys = "{" + ",".join(self.keys) + "}" if self.keys else ""
        return f"({self.var or ''}:{self.label}{keys})" if self.label else f"({self.var})"


@dataclass(frozen=True)
class EdgeTerm:
    label: str
    direction: str = "out"  # "out": left->right, "in": left<-right

    def __str__(self):
        if self.direction == "out":
            return f"-[:{self.label}]->"
        return f"<-[:{self.label}]-"


@dataclass(frozen=True)
class GroupPattern:
    left: NodeTerm
    edge: EdgeTerm | None = None
    right: NodeTerm | None = None

    @property
    def keys(self) -> list[tuple[str, str]]:
        """``(side, key)`` pairs in declaration order."""
        out = [("left", k) for k in self.left.keys]
        if self.right is not None:
            out += [("right", k) for k in self.right.keys]
        return out

    def __str__(self):
        if self.edge is None:
            return str(self.left)
        return f"{self.left}{self.edge}{self.right}"


@dataclass(frozen=True)
class ConstructionRule:
    """Derive ``head`` edges from every binding of the ``body`` path."""

    head_source: NodeTerm
    head_edge: EdgeTerm
    head_target: NodeTerm
    body_nodes: tuple[NodeTerm, ...]
    body_edges: tuple[EdgeTerm, ...]

    @property
    def body(self) -> list[tuple[NodeTerm, EdgeTerm | None]]:
        """Body as ordered ``(node, edge-leaving-it)`` steps; the last edge is None."""
        edges = list(self.body_edges) + [None]
        return list(zip(self.body_nodes, edges))

    def __str__(self):
        body = str(self.body_nodes[0]) + "".join(
            f"{e}{n}" for e, n in zip(self.body_edges, self.body_nodes[1:]))
        return f"{self.head_source}{self.head_edge}{self.head_target} if {body}"


class _Lexer:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s):
        self.skip()
        return self.text.startswith(s, self.pos)

    def at_end(self):
        self.skip()
        return self.pos >= len(self.text)

    def expect(self, s, what=None):
        self.skip()
        if not self.text.startswith(s, self.pos):
            self.fail(f"expected {what or repr(s)}")
        self.pos += len(s)

    def ident(self, what="identifier"):
        self.skip()
        m = _IDENT.match(self.text, self.pos)
        if not m:
            self.fail(f"expected {what}")
        self.pos = m.end()
        return m.group()

    def fail(self, msg):
        self.skip()
        found = repr(self.text[self.pos]) if self.pos < len(self.text) else "end of input"
        raise PatternSyntaxError(f"{msg}, found {found}", self.pos)


def _normalize(text):
    if not isinstance(text, str):
        raise PatternSyntaxError("pattern must be a string", 0)
    # unicode arrow is one char; "->" is two, so offsets after it shift by one
    return text.replace("→", "->")


def _node(lx: _Lexer, allow_keys: bool) -> NodeTerm:
    lx.expect("(", "'('")
    var = label = None
    keys: list[str] = []
    lx.skip()
    if _IDENT.match(lx.text, lx.pos):
        var = lx.ident()
    if lx.peek(":"):
        lx.expect(":")
        label = lx.ident("node label")
    if lx.peek("{"):
        if not allow_keys:
            lx.fail("property keys not allowed here")
        lx.expect("{")
        keys.append(lx.ident("property key"))
        while lx.peek(","):
            lx.expect(",")
            keys.append(lx.ident("property key"))
        lx.expect("}", "'}'")
    if var is None and label is None:
        lx.fail("expected variable or ':label'")
    lx.expect(")", "')'")
    return NodeTerm(var, label, tuple(keys))


def _edge(lx: _Lexer) -> EdgeTerm:
    lx.skip()
    incoming = lx.peek("<-")
    lx.expect("<-" if incoming else "-", "edge '-['")
    lx.expect("[", "'['")
    if lx.peek(":"):
        lx.expect(":")
    label = lx.ident("edge label")
    lx.expect("]", "']'")
    lx.expect("-" if incoming else "->", "'-'" if incoming else "'->'")
    return EdgeTerm(label, "in" if incoming else "out")


def parse_group_pattern(text: str) -> GroupPattern:
    lx = _Lexer(_normalize(text))
    left = _node(lx, allow_keys=True)
    edge = right = None
    if not lx.at_end():
        edge = _edge(lx)
        right = _node(lx, allow_keys=True)
    if not lx.at_end():
        lx.fail("unexpected trailing input")
    for term in (left, right):
        if term is not None and not term.label:
            raise PatternSyntaxError("grouping pattern nodes need a label", 0)
    pattern = GroupPattern(left, edge, right)
    if not pattern.keys:
        raise PatternSyntaxError("grouping pattern needs at least one property key", len(lx.text))
    return pattern


def parse_construction_rule(text: str) -> ConstructionRule:
    lx = _Lexer(_normalize(text))
    src = _node(lx, allow_keys=False)
    head_edge = _edge(lx)
    tgt = _node(lx, allow_keys=False)
    lx.skip()
    if not re.match(r"if\b", lx.text[lx.pos:], flags=re.IGNORECASE):
        lx.fail("expected 'if'")
    lx.pos += 2
    nodes = [_node(lx, allow_keys=False)]
    edges = []
    while not lx.at_end():
        edges.append(_edge(lx))
        nodes.append(_node(lx, allow_keys=False))
    if not edges:
        raise PatternSyntaxError("rule body needs at least one edge", lx.pos)

    labels: dict[str, str] = {}
    for term in [src, tgt] + nodes:
        if term.var and term.label:
            if labels.setdefault(term.var, term.label) != term.label:
                raise PatternSyntaxError(
                    f"variable {term.var} used with labels {labels[term.var]} and {term.label}", 0)
    body_vars = {n.var for n in nodes if n.var}
    for term in (src, tgt):
        if not term.var:
            raise PatternSyntaxError("head nodes need a variable", 0)
        if term.var not in body_vars:
            raise PatternSyntaxError(f"unbound variable {term.var}", 0)

    def resolve(term):
        return NodeTerm(term.var, term.label or labels.get(term.var))

    return ConstructionRule(resolve(src), head_edge, resolve(tgt),
                            tuple(resolve(n) for n in nodes), tuple(edges))


def load_rules(path) -> list[ConstructionRule]:
    """Read a rule file: one rule per line, ``#`` starts a comment."""
    rules = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rules.append(parse_construction_rule(line))
    return rules


def _steps(g: PropertyGraph, v: str, edge: EdgeTerm) -> Iterator[str]:
    direction = "out" if edge.direction == "out" else "in"
    for _, w in g.incident(v, edge.label, direction):
        yield w


def match_path(g: PropertyGraph, nodes, edges) -> Iterator[tuple[str, ...]]:
    """Yield every homomorphic binding of a linear path as a node-id tuple."""
    first = nodes[0]
    starts = g.nodes_of(first.label) if first.label else list(g.nodes)

    def extend(path, i):
        if i == len(edges):
            yield tuple(path)
            return
        term = nodes[i + 1]
        for w in _steps(g, path[-1], edges[i]):
            if term.label and g.nodes[w].label != term.label:
                continue
            if term.var:
                bound = [path[j] for j, t in enumerate(nodes[:i + 1]) if t.var == term.var]
                if bound and bound[0] != w:
                    continue
            path.append(w)
            yield from extend(path, i + 1)
            path.pop()

    for s in starts:
        yield from extend([s], 0)


def apply_rule(g: PropertyGraph, rule: ConstructionRule) -> list[Edge]:
    """Derive the head edges of ``rule``; repeated bindings raise the weight.

    Bindings whose head endpoints coincide are skipped. Unknown labels give
    an empty result and a warning.
    """
    node_labels, edge_labels = g.node_labels(), g.edge_labels()
    unknown = [t.label for t in rule.body_nodes if t.label and t.label not in node_labels]
    unknown += [e.label for e in rule.body_edges if e.label not in edge_labels]
    if unknown:
        if g.nodes:
            logger.warning("rule %s references labels absent from the graph: %s",
                           rule, sorted(set(unknown)))
        return []
    vars_ = [n.var for n in rule.body_nodes]
    si, ti = vars_.index(rule.head_source.var), vars_.index(rule.head_target.var)
    counts: Counter = Counter()
    for binding in match_path(g, rule.body_nodes, rule.body_edges):
        a, b = binding[si], binding[ti]
        if a == b:
            continue
        for end, term in ((a, rule.head_source), (b, rule.head_target)):
            if term.label and g.nodes[end].label != term.label:
                break
        else:
            counts[a, b] += 1
    return [Edge(a, b, rule.head_edge.label, {"weight": w, "derived": True})
            for (a, b), w in counts.items()]


def with_derived_edges(g: PropertyGraph, rules) -> PropertyGraph:
    """Copy of ``g`` extended with the edges derived by ``rules``."""
    out = g.copy()
    for rule in rules:
        for e in apply_rule(g, rule):
            out.add_edge(e.source, e.target, e.label, dict(e.props),
                         edge_id=f"{e.label}*|{e.source}|{e.target}")
    return out
