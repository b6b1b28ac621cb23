"""Plain-text ingestion: boilerplate stripping, sentence segmentation, vocabulary."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import EmptyCorpus

_TOKEN_RE = re.compile(r"[a-z0-9]+(?:['-][a-z0-9]+)*")
_SENTENCE_SPLIT_RE = re.compile(r"[.!?]+")
_START_MARKER_RE = re.compile(r"\*{3}\s*START OF[^\n]*(?:\n|$)")
_END_MARKER_RE = re.compile(r"\*{3}\s*END OF")


def strip_boilerplate(raw_text: str) -> str:
    """Cut an ebook file down to its body text.

    Returns the text between the conventional ``*** START OF ...`` and
    ``*** END OF ...`` marker lines when both are present in that order;
    otherwise returns the input unchanged.
    """
    start = _START_MARKER_RE.search(raw_text)
    if start is None:
        return raw_text
    end = _END_MARKER_RE.search(raw_text, start.end())
    if end is None:
        return raw_text
    return raw_text[start.end():end.start()]


def tokenize(text: str) -> list[str]:
    """Lowercase and split into word tokens.

    A token is a maximal run of ASCII letters/digits, possibly joined by
    internal apostrophes or hyphens ("don't", "mother-in-law"). Everything
    else separates tokens. No further normalization is applied.
    """
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class Sentence:
    """One segmented sentence: its tokens, origin, and content-word count."""

    tokens: tuple[str, ...]
    source_id: str = ""
    nonstop_count: int = 0


def tokenize_sentences(
    body: str,
    stopwords: frozenset[str] | set[str],
    source_id: str = "",
) -> list[Sentence]:
    """Segment ``body`` on terminal punctuation and tokenize each piece.

    Fragments that yield no tokens (punctuation runs, blank stretches) are
    dropped. Trailing text without a terminator still forms a sentence.
    """
    sentences = []
    for fragment in _SENTENCE_SPLIT_RE.split(body):
        tokens = tokenize(fragment)
        if not tokens:
            continue
        nonstop = sum(1 for t in tokens if t not in stopwords)
        sentences.append(Sentence(tuple(tokens), source_id, nonstop))
    return sentences


@dataclass
class Vocabulary:
    """Dense id-indexed lexicon with per-word and total token counts."""

    word_to_id: dict[str, int] = field(default_factory=dict)
    id_to_word: list[str] = field(default_factory=list)
    counts: list[int] = field(default_factory=list)
    total_tokens: int = 0

    def __len__(self) -> int:
        return len(self.id_to_word)

    def id_of(self, word: str) -> int | None:
        return self.word_to_id.get(word)

    def word_of(self, word_id: int) -> str:
        return self.id_to_word[word_id]


def build_vocabulary(sentences: list[Sentence]) -> Vocabulary:
    """Assign dense ids in first-occurrence order and tally counts."""
    vocab = Vocabulary()
    ids = vocab.word_to_id
    words = vocab.id_to_word
    counts = vocab.counts
    total = 0
    for sent in sentences:
        for tok in sent.tokens:
            wid = ids.get(tok)
            if wid is None:
                wid = len(words)
                ids[tok] = wid
                words.append(tok)
                counts.append(0)
            counts[wid] += 1
            total += 1
    if total == 0:
        raise EmptyCorpus("no tokens in any sentence")
    vocab.total_tokens = total
    return vocab


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Load a stopword list (one word per line, '#' comments allowed).

    With no path, the bundled ~150-word English list is used.
    """
    if path is None:
        text = resources.files("lexblend").joinpath("data/stopwords.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    words = (line.strip() for line in text.splitlines())
    return frozenset(w for w in words if w and not w.startswith("#"))
