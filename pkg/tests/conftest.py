import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from interesting_subgraphs.graph import TweetRecord, ingest_tweets  # noqa: E402


def tweet(id, author, mentions=(), hashtags=(), text="", urls=(), created_at="2019-03-01",
          popularity=0):
    return TweetRecord(id=id, author=author, text=text, created_at=created_at,
                       hashtags=list(hashtags), mentions=list(mentions), urls=list(urls),
                       popularity=popularity)


@pytest.fixture
def one_tweet():
    """One tweet by alice mentioning bob and carol, tagged #ados."""
    return ingest_tweets([tweet("1", "alice", ["bob", "carol"], ["ADOS"], "hello world")])


@pytest.fixture
def small_corpus():
    return [
        tweet("1", "alice", ["bob", "carol"], ["ados", "vote"], "ados reparations now"),
        tweet("2", "bob", ["alice"], ["ados"], "ados reparations matter", created_at="2019-03-02"),
        tweet("3", "dave", ["erin"], ["music"], "new album out today", created_at="2019-03-01"),
        tweet("4", "erin", [], ["vote"], "remember to vote", created_at="2018-12-30"),
    ]


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
