"""Corpus compressibility analytics: n-gram mass, entropy, mutual information.

Conventions, declared here because they pin the numbers the reports emit:

- "word" means a maximal run of non-whitespace characters (Unicode
  whitespace split); punctuation stays attached to its word.
- char-granularity tokens are single BYTES of the corpus, so l_avg is
  exactly 1 and h_byte equals the byte entropy.
- subword granularity uses a pair-merge vocabulary trained on the analyzed
  corpus itself (deterministic: highest pair count first, ties broken by
  lexicographic pair order), applied within words.
- entropies are plug-in (maximum-likelihood) estimates with no bias
  correction; mutual information uses positional marginals (first vs second
  element of each adjacent pair).
"""

from __future__ import annotations

import heapq
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import EmptyCorpus

CHAR = "char"
SUBWORD = "subword"
WORD = "word"
GRANULARITIES = (CHAR, SUBWORD, WORD)

DEFAULT_MERGES = 8000


def _as_bytes(data: bytes | str) -> bytes:
    return data.encode("utf-8") if isinstance(data, str) else bytes(data)


def _as_text(data: bytes | str) -> str:
    return data if isinstance(data, str) else data.decode("utf-8", errors="replace")


def words_of(data: bytes | str) -> list[str]:
    return _as_text(data).split()


# --- n-gram profiles ---------------------------------------------------------

@dataclass(frozen=True)
class NGramProfile:
    n: int
    top_items: tuple[tuple[str, int], ...]
    total_grams: int
    top10_mass_percent: float

    def as_record(self) -> dict:
        return {
            "format": 1,
            "kind": "ngram_profile",
            "n": self.n,
            "total_grams": self.total_grams,
            "top10_mass_percent": round(self.top10_mass_percent, 4),
            "top_items": [[g, c] for g, c in self.top_items],
        }


def ngram_profile(data: bytes | str, n: int, top_n: int = 10) -> NGramProfile:
    """Sliding-window n-gram counts over the whitespace word stream."""
    if not 1 <= n <= 4:
        raise ValueError(f"n must be in 1..4, got {n}")
    tokens = words_of(data)
    grams = Counter(
        " ".join(tokens[i : i + n]) for i in range(len(tokens) - n + 1)
    )
    total = sum(grams.values())
    if total == 0:
        raise EmptyCorpus(f"no {n}-grams: corpus has {len(tokens)} words")
    ranked = sorted(grams.items(), key=lambda kv: (-kv[1], kv[0]))[:top_n]
    mass = 100.0 * sum(c for _, c in ranked[:10]) / total
    return NGramProfile(n, tuple(ranked), total, mass)


# --- entropy at three granularities ------------------------------------------

@dataclass(frozen=True)
class EntropyReport:
    granularity: str
    h_token: float
    l_avg: float
    h_byte: float
    token_count: int

    def as_record(self) -> dict:
        return {
            "format": 1,
            "kind": "entropy_report",
            "granularity": self.granularity,
            "h_token": self.h_token,
            "l_avg": self.l_avg,
            "h_byte": self.h_byte,
            "token_count": self.token_count,
        }


def _plugin_entropy(counts: Iterable[int], total: int) -> float:
    return -sum(c / total * math.log2(c / total) for c in counts)


def _report_from_tokens(granularity: str, counts: Counter, lengths: dict) -> EntropyReport:
    total = sum(counts.values())
    if total == 0:
        raise EmptyCorpus("no tokens at granularity " + granularity)
    h_token = _plugin_entropy(counts.values(), total)
    l_avg = sum(lengths[t] * c for t, c in counts.items()) / total
    return EntropyReport(granularity, h_token, l_avg, h_token / l_avg, total)


def entropy_report(
    data: bytes | str,
    granularity: str,
    merges: int = DEFAULT_MERGES,
) -> EntropyReport:
    """Plug-in entropy per token and per byte at the chosen granularity."""
    if granularity == CHAR:
        raw = _as_bytes(data)
        if not raw:
            raise EmptyCorpus("empty input")
        counts = Counter(raw)
        return _report_from_tokens(CHAR, counts, {b: 1 for b in counts})
    if granularity == WORD:
        counts = Counter(words_of(data))
        return _report_from_tokens(
            WORD, counts, {w: len(w.encode("utf-8")) for w in counts}
        )
    if granularity == SUBWORD:
        word_counts = Counter(words_of(data))
        if not word_counts:
            raise EmptyCorpus("no words to train the pair-merge vocabulary on")
        merged = train_merges(word_counts, merges)
        counts: Counter = Counter()
        for word, c in word_counts.items():
            for piece in encode_word(word, merged):
                counts[piece] += c
        return _report_from_tokens(
            SUBWORD, counts, {t: len(t.encode("utf-8")) for t in counts}
        )
    raise ValueError(f"unknown granularity {granularity!r}")


# --- pair-merge (BPE-style) vocabulary ----------------------------------------

def train_merges(word_counts: Counter, num_merges: int, min_count: int = 2):
    """Learn up to num_merges symbol-pair merges from word type counts.

    Greedy highest-count pair first; count ties resolve to the
    lexicographically smallest pair, so training is order-independent.
    """
    seqs = {w: tuple(w) for w in word_counts}
    pair_counts: Counter = Counter()
    pair_words: dict[tuple, set] = {}
    for w, seq in seqs.items():
        f = word_counts[w]
        for pair in zip(seq, seq[1:]):
            pair_counts[pair] += f
            pair_words.setdefault(pair, set()).add(w)

    heap = [(-c, p) for p, c in pair_counts.items()]
    heapq.heapify(heap)
    merges: list[tuple[str, str]] = []
    while heap and len(merges) < num_merges:
        neg, pair = heapq.heappop(heap)
        count = pair_counts.get(pair, 0)
        if count != -neg:
            if count > 0:
                heapq.heappush(heap, (-count, pair))  # stale entry, refresh
            continue
        if count < min_count:
            break
        merges.append(pair)
        joined = pair[0] + pair[1]
        touched = set()
        for w in pair_words.get(pair, ()):  # merge inside every affected word
            seq = seqs[w]
            f = word_counts[w]
            for old in zip(seq, seq[1:]):
                pair_counts[old] -= f
                if pair_counts[old] <= 0:
                    del pair_counts[old]
            new_seq = []
            i = 0
            while i < len(seq):
                if i + 1 < len(seq) and seq[i] == pair[0] and seq[i + 1] == pair[1]:
                    new_seq.append(joined)
                    i += 2
                else:
                    new_seq.append(seq[i])
                    i += 1
            seqs[w] = tuple(new_seq)
            for new in zip(new_seq, new_seq[1:]):
                pair_counts[new] += f
                pair_words.setdefault(new, set()).add(w)
                touched.add(new)
        pair_words.pop(pair, None)
        for new in touched:
            heapq.heappush(heap, (-pair_counts[new], new))
    return merges


def encode_word(word: str, merges: Sequence[tuple[str, str]]) -> list[str]:
    """Apply learned merges to one word, lowest merge rank first."""
    rank = {pair: i for i, pair in enumerate(merges)}
    pieces = list(word)
    while len(pieces) > 1:
        best_idx = -1
        best_rank = len(merges)
        for i in range(len(pieces) - 1):
            r = rank.get((pieces[i], pieces[i + 1]), -1)
            if r >= 0 and r < best_rank:
                best_rank = r
                best_idx = i
        if best_idx < 0:
            break
        pieces[best_idx : best_idx + 2] = [pieces[best_idx] + pieces[best_idx + 1]]
    return pieces


# --- mutual information -------------------------------------------------------

@dataclass(frozen=True)
class MutualInfoReport:
    mi_bits: float
    pair_count: int

    def as_record(self) -> dict:
        return {"format": 1, "kind": "mutual_info", "mi_bits": self.mi_bits,
                "pair_count": self.pair_count}


def mutual_information(data: bytes | str) -> MutualInfoReport:
    """Plug-in MI between adjacent words, positional marginals."""
    tokens = words_of(data)
    if len(tokens) < 2:
        raise EmptyCorpus("mutual information needs at least 2 words")
    pairs = list(zip(tokens, tokens[1:]))
    n = len(pairs)
    joint = Counter(pairs)
    first = Counter(a for a, _ in pairs)
    second = Counter(b for _, b in pairs)
    mi = 0.0
    for (a, b), c in joint.items():
        p = c / n
        mi += p * math.log2(p * n * n / (first[a] * second[b]))
    return MutualInfoReport(max(mi, 0.0), n)
