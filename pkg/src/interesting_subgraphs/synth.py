"""Synthetic tweet corpora: a preferential-attachment mention network with
planted archetypes.

Archetypes
----------
dense-core
    Members mention each other pairwise and write from a tiny vocabulary.
broad-star
    Tweets mention many popular, mutually unrelated background users.
bridge
    Tweets co-mention the hubs of two dense regions.

Every text starts with the seed term so that one keyword query selects the
whole corpus; each planted group carries its own hashtag.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import asdict, dataclass, field
from datetime import date, timedelta
from pathlib import Path

from .errors import ConfigError
from .graph import TweetRecord, write_jsonl

ARCHETYPES = ("dense-core", "broad-star", "bridge")
_ONSETS = ("b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z",
           "br", "gr", "kl", "st", "tr", "sh")
_VOWELS = ("a", "e", "i", "o", "u")


@dataclass
class Planted:
    archetype: str
    size: int
    p_internal: float = 1.0
    vocabulary: int = 5

    def __post_init__(self):
        if self.archetype not in ARCHETYPES:
            raise ConfigError(f"unknown archetype {self.archetype!r}; expected one of {ARCHETYPES}")
        if self.size < 2:
            raise ConfigError("planted size must be at least 2")
        if not 0.0 <= self.p_internal <= 1.0:
            raise ConfigError("p_internal must lie in [0, 1]")
        if self.vocabulary < 1:
            raise ConfigError("vocabulary size must be at least 1")


@dataclass
class SynthSpec:
    nodes: int = 1000
    attachment: int = 2
    planted: list = field(default_factory=list)
    seed: int = 0
    topics: int = 25
    second_hashtag_prob: float = 0.2
    url_prob: float = 0.1
    seed_term: str = "ados"
    background_vocabulary: int = 5000
    text_length: tuple = (6, 12)
    star_hubs: int = 40
    start_date: str = "2019-01-01"
    days: int = 180

    def __post_init__(self):
        self.planted = [p if isinstance(p, Planted) else Planted(**p) for p in self.planted]
        if self.nodes < 1 or self.attachment < 1 or self.topics < 1:
            raise ConfigError("nodes, attachment and topics must be positive")
        self.text_length = tuple(self.text_length)

    @classmethod
    def from_dict(cls, data: dict) -> "SynthSpec":
        data = dict(data)
        bg = data.pop("background", None)
        if bg is not None:
            data.setdefault("nodes", bg.get("nodes", cls.nodes))
            data.setdefault("attachment", bg.get("attachment", cls.attachment))
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(f"bad synth spec: {exc}") from None

    @classmethod
    def load(cls, path) -> "SynthSpec":
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read synth spec {path}: {exc}") from None

    def to_dict(self) -> dict:
        return asdict(self)


def _words(prefix_index: int, count: int, banned) -> list[str]:
    """Deterministic pronounceable pseudo-words; ``prefix_index`` separates pools."""
    out = []
    syllables = [o + v for o, v in itertools.product(_ONSETS, _VOWELS)]
    lead = syllables[prefix_index % len(syllables)] + syllables[(prefix_index * 7 + 3) % len(syllables)]
    for i in itertools.count():
        if len(out) == count:
            break
        word, j = lead, i
        while True:
            word += syllables[j % len(syllables)]
            j //= len(syllables)
            if j == 0:
                break
        if word not in banned:
            out.append(word)
    return out


class _Builder:
    def __init__(self, spec: SynthSpec):
        self.spec = spec
        self.rng = random.Random(spec.seed)
        self.records: list[TweetRecord] = []
        self.mentioned: dict[str, int] = {}
        self.start = date.fromisoformat(spec.start_date)
        banned = {spec.seed_term}
        self.bg_words = _words(0, spec.background_vocabulary, banned)
        weights = [1.0 / (r + 1) ** 1.1 for r in range(len(self.bg_words))]
        acc = list(itertools.accumulate(weights))
        self.bg_cum = acc
        self.topics = [f"topic{i:03d}" for i in range(spec.topics)]
        self.urls = [f"https://example.org/a/{i}" for i in range(200)]

    def day(self):
        return (self.start + timedelta(days=self.rng.randrange(self.spec.days))).isoformat()

    def text(self, words, cum=None, length=None):
        lo, hi = self.spec.text_length
        n = length if length is not None else self.rng.randint(lo, hi)
        toks = self.rng.choices(words, cum_weights=cum, k=n)
        return " ".join([self.spec.seed_term] + toks)

    def popularity(self, scale=1.0):
        return min(int(scale * (self.rng.paretovariate(1.2) - 1.0) * 3), 100000)

    def emit(self, author, text, mentions, hashtags, urls=(), popularity=0):
        for m in mentions:
            self.mentioned[m] = self.mentioned.get(m, 0) + 1
        rec = TweetRecord(
            id=f"t{len(self.records):06d}", author=author, text=text, created_at=self.day(),
            hashtags=list(hashtags), mentions=list(mentions), urls=list(urls),
            popularity=popularity, author_followers=0)
        self.records.append(rec)

    def background(self):
        spec, rng = self.spec, self.rng
        users = [f"u{i:05d}" for i in range(spec.nodes)]
        pool: list[str] = []  # one entry per unit of degree, plus one per user
        for i, u in enumerate(users):
            targets = []
            want = min(spec.attachment, i)
            while len(targets) < want:
                cand = rng.choice(pool)
                if cand not in targets:
                    targets.append(cand)
            tags = [rng.choice(self.topics)]
            if rng.random() < spec.second_hashtag_prob:
                other = rng.choice(self.topics)
                if other != tags[0]:
                    tags.append(other)
            urls = [rng.choice(self.urls)] if rng.random() < spec.url_prob else []
            self.emit(u, self.text(self.bg_words, self.bg_cum), targets, tags, urls,
                      self.popularity())
            pool.append(u)
            pool.extend(targets)
            pool.extend([u] * len(targets))
        self.users = users

    def hubs(self, n):
        ranked = sorted(self.mentioned.items(), key=lambda kv: (-kv[1], kv[0]))
        return [u for u, _ in ranked[:n]]

    def plant(self, index, p: Planted):
        rng = self.rng
        members = [f"{p.archetype.replace('-', '')}{index}m{i:03d}" for i in range(p.size)]
        vocab = [self.spec.seed_term] + _words(index + 1, p.vocabulary - 1, {self.spec.seed_term})
        tag = f"{p.archetype.replace('-', '')}{index}"
        if p.archetype == "dense-core":
            self.cores.append(members)
            for a in members:
                mentions = [b for b in members if b != a and rng.random() < p.p_internal]
                if self.users and rng.random() < 0.1:
                    mentions.append(rng.choice(self.users))
                self.emit(a, self.text(vocab, length=4), mentions, [tag],
                          popularity=self.popularity(5.0))
        elif p.archetype == "broad-star":
            hubs = self.hubs(max(self.spec.star_hubs, 2))
            for a in members:
                mentions = [h for h in hubs if rng.random() < p.p_internal] or [rng.choice(hubs)]
                self.emit(a, self.text(vocab), mentions, [tag], popularity=self.popularity(2.0))
        else:
            if len(self.cores) >= 2:
                left, right = self.cores[0], self.cores[1]
            else:
                hubs = self.hubs(2) or [self.users[0]]
                left, right = [hubs[0]], [hubs[-1]]
            for a in members:
                mentions = [left[0], right[0]]
                mentions += [u for u in left[1:] + right[1:] if rng.random() < p.p_internal * 0.1]
                self.emit(a, self.text(vocab), mentions, [tag], popularity=self.popularity())

    def build(self):
        self.cores: list[list[str]] = []
        self.background()
        order = sorted(range(len(self.spec.planted)),
                       key=lambda i: ARCHETYPES.index(self.spec.planted[i].archetype))
        for i in order:
            self.plant(i, self.spec.planted[i])
        for rec in self.records:
            rec.author_followers = 10 * self.mentioned.get(rec.author, 0) + self.rng.randrange(50)
        return self.records


def generate_records(spec: SynthSpec) -> list[TweetRecord]:
    return _Builder(spec).build()


def synth_generate(spec: SynthSpec, path) -> Path:
    """Write the synthetic corpus of ``spec`` as JSON lines and return the path."""
    path = Path(path)
    write_jsonl(generate_records(spec), path)
    return path


def planted_tag(spec: SynthSpec, index: int) -> str:
    """Hashtag carried by planted group ``index``."""
    return f"{spec.planted[index].archetype.replace('-', '')}{index}"
