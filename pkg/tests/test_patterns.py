import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import tweet
from interesting_subgraphs.errors import PatternSyntaxError
from interesting_subgraphs.graph import PropertyGraph, ingest_tweets
from interesting_subgraphs.patterns import (apply_rule, load_rules, parse_construction_rule,
                                            parse_group_pattern, with_derived_edges)

MENTION_RULE = "(a:user)-[:mentions]->(b:user) if (a)-[:authors]->(t:tweet)-[:mentions]->(b:user)"


def test_group_pattern_with_edge():
    p = parse_group_pattern("(:tweet{date})-[:uses]->(:hashtag{text})")
    assert (p.left.label, p.left.keys) == ("tweet", ("date",))
    assert p.edge.label == "uses" and p.edge.direction == "out"
    assert (p.right.label, p.right.keys) == ("hashtag", ("text",))


def test_group_pattern_single_node_round_trip():
    p = parse_group_pattern("(:tweet{popularity})")
    assert p.edge is None and p.right is None and p.left.keys == ("popularity",)
    assert parse_group_pattern(str(p)) == p


def test_group_pattern_whitespace_insensitive():
    a = parse_group_pattern("(:tweet{date})-[:uses]->(:hashtag{text})")
    b = parse_group_pattern("  ( :tweet { date } ) -[ :uses ]-> ( :hashtag{ text } )  ")
    assert a == b


def test_group_pattern_error_offset():
    with pytest.raises(PatternSyntaxError) as err:
        parse_group_pattern("(:tweet{)")
    assert err.value.position == 8


@pytest.mark.parametrize("text", ["", "(", "(:tweet)", "(:tweet{a})-[:x]", "(:tweet{a}) junk",
                                  "(:tweet{a}).[:x]->(:y)", "(:tweet{a,})"])
def test_group_pattern_rejects(text):
    with pytest.raises(PatternSyntaxError):
        parse_group_pattern(text)


def test_construction_rule():
    r = parse_construction_rule(MENTION_RULE)
    assert (r.head_source.label, r.head_edge.label, r.head_target.label) == \
        ("user", "mentions", "user")
    assert len(r.body_edges) == 2
    assert [n.label for n in r.body_nodes] == ["user", "tweet", "user"]
    assert [e.label for e in r.body_edges] == ["authors", "mentions"]


def test_rule_without_colon_in_body_edge():
    r = parse_construction_rule("(a:user)-[:mentions]->(b:user) if (a)-[authors]->(t:tweet)-[:mentions]->(b)")
    assert r.body_edges[0].label == "authors"


def test_rule_unbound_variable():
    with pytest.raises(PatternSyntaxError, match="unbound variable c"):
        parse_construction_rule("(a:user)-[:x]->(c:user) if (a)-[:authors]->(t:tweet)")


def test_rule_round_trip():
    r = parse_construction_rule(MENTION_RULE)
    assert parse_construction_rule(str(r)) == r


def test_rule_file(tmp_path):
    p = tmp_path / "rules.txt"
    p.write_text(f"# derived views\n\n{MENTION_RULE}  # user mention view\n")
    assert load_rules(p) == [parse_construction_rule(MENTION_RULE)]


def test_apply_rule_empty_graph():
    assert apply_rule(PropertyGraph(), parse_construction_rule(MENTION_RULE)) == []


def test_apply_rule_enumerates_bindings():
    g = ingest_tweets([tweet("1", "a", mentions=["b", "c"])])
    edges = apply_rule(g, parse_construction_rule(MENTION_RULE))
    assert sorted((e.source, e.target, e.props["weight"]) for e in edges) == \
        [("user:a", "user:b", 1), ("user:a", "user:c", 1)]


def test_apply_rule_multiplicity():
    g = ingest_tweets([tweet("1", "a", mentions=["b"]), tweet("2", "a", mentions=["b"])])
    (e,) = apply_rule(g, parse_construction_rule(MENTION_RULE))
    assert (e.source, e.target, e.label, e.props["weight"]) == ("user:a", "user:b", "mentions", 2)


def test_apply_rule_skips_self_loops():
    g = ingest_tweets([tweet("1", "a", mentions=["a", "b"])])
    edges = apply_rule(g, parse_construction_rule(MENTION_RULE))
    assert [(e.source, e.target) for e in edges] == [("user:a", "user:b")]


def test_apply_rule_unknown_label_is_empty(caplog):
    g = ingest_tweets([tweet("1", "a", mentions=["b"])])
    r = parse_construction_rule("(a:user)-[:x]->(b:user) if (a)-[:likes]->(b)")
    assert apply_rule(g, r) == []
    assert "absent" in caplog.text


def test_with_derived_edges_adds_view_edges():
    g = ingest_tweets([tweet("1", "a", mentions=["b"])])
    h = with_derived_edges(g, [parse_construction_rule(MENTION_RULE)])
    assert len(h.edges) == len(g.edges) + 1
    assert "user:b" in h.neighbors("user:a", "mentions", "out")
    assert len(g.edges) == 2


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="():{}[]-<>ab_ ,:ifx→", max_size=40))
def test_parsers_are_total(text):
    for parse in (parse_group_pattern, parse_construction_rule):
        try:
            parse(text)
        except PatternSyntaxError as err:
            assert isinstance(err.position, int)


labels = st.sampled_from(["user", "tweet", "hashtag"])
keys = st.lists(st.sampled_from(["date", "text", "popularity"]), min_size=1, max_size=2)


@settings(max_examples=100, deadline=None)
@given(labels, keys, st.sampled_from(["uses", "mentions"]), labels, st.booleans())
def test_group_pattern_print_parse_stable(left, lkeys, edge, right, single):
    text = f"(:{left}{{{','.join(lkeys)}}})"
    if not single:
        text += f"-[:{edge}]->(:{right})"
    p = parse_group_pattern(text)
    assert parse_group_pattern(str(p)) == p


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("abcd"), st.lists(st.sampled_from("abcd"), max_size=3)),
                max_size=6))
def test_apply_rule_edges_stay_in_graph(spec):
    recs = [tweet(str(i), a, mentions=ms) for i, (a, ms) in enumerate(spec)]
    g = ingest_tweets(recs)
    for e in apply_rule(g, parse_construction_rule(MENTION_RULE)):
        assert e.source in g.nodes and e.target in g.nodes and e.source != e.target
