"""Cognate alignment and sound-change outcome rates.

Reflex forms arrive pre-segmented as lists of IPA tokens.  Pairwise alignment
is global dynamic programming with flat scoring; multiple alignment is
progressive over a pairwise-similarity guide order with the usual "once a
gap, always a gap" rule.  Outcome rates count, per language, the reflexes
whose material aligned against a queried etymon span falls in a named
segment class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .cartography import FeatureOverlay

GAP = "-"

Segments = tuple[str, ...]


@dataclass(frozen=True)
class Scoring:
    match: float = 1.0
    mismatch: float = -1.0
    gap: float = -1.0

    def pair(self, a: str, b: str) -> float:
        return self.match if a == b else self.mismatch


@dataclass(frozen=True)
class Alignment:
    """Equal-length rows over segments and GAP; stripping gaps restores inputs."""

    rows: tuple[Segments, ...]
    score: float


@dataclass(frozen=True)
class CognateSet:
    """An etymon with its per-language reflex forms (doublets allowed)."""

    etymon_id: str
    etymon: Segments
    reflexes: Mapping[str, tuple[Segments, ...]]

    def __post_init__(self) -> None:
        if not self.etymon:
            raise ValueError(f"cognate set {self.etymon_id}: empty etymon")


@dataclass(frozen=True)
class SoundChangeQuery:
    """A span of etymon segments and the disjoint outcome classes to count.

    ``classes`` is ordered; the first class is the queried outcome unless one
    is named explicitly.
    """

    span: tuple[int, int]  # [start, end)
    classes: Mapping[str, frozenset[str]]

    def __post_init__(self) -> None:
        start, end = self.span
        if start < 0 or end <= start:
            raise ValueError(f"malformed span {self.span}")
        if not self.classes:
            raise ValueError("query needs at least one outcome class")
        seen: set[str] = set()
        for name, tokens in self.classes.items():
            overlap = seen & set(tokens)
            if overlap:
                raise ValueError(f"outcome classes overlap on {sorted(overlap)}")
            seen |= set(tokens)

    @classmethod
    def from_spec(cls, raw: Mapping) -> "SoundChangeQuery":
        span = tuple(raw["span"])
        classes = {name: frozenset(tokens) for name, tokens in raw["classes"].items()}
        return cls(span, classes)


def align_pair(a: Sequence[str], b: Sequence[str], scoring: Scoring = Scoring()) -> Alignment:
    """Optimal global alignment; traceback ties prefer diagonal, then a-gap."""
    if not a or not b:
        raise ValueError("sequences must be non-empty")
    m, n = len(a), len(b)
    score = [[0.0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        score[i][0] = i * scoring.gap
    for j in range(1, n + 1):
        score[0][j] = j * scoring.gap
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            score[i][j] = max(
                score[i - 1][j - 1] + scoring.pair(a[i - 1], b[j - 1]),
                score[i - 1][j] + scoring.gap,
                score[i][j - 1] + scoring.gap,
            )
    row_a: list[str] = []
    row_b: list[str] = []
    i, j = m, n
    while i > 0 or j > 0:
        if i > 0 and j > 0 and score[i][j] == score[i - 1][j - 1] + scoring.pair(a[i - 1], b[j - 1]):
            row_a.append(a[i - 1])
            row_b.append(b[j - 1])
            i, j = i - 1, j - 1
        elif i > 0 and score[i][j] == score[i - 1][j] + scoring.gap:
            row_a.append(a[i - 1])
            row_b.append(GAP)
            i -= 1
        else:
            row_a.append(GAP)
            row_b.append(b[j - 1])
            j -= 1
    return Alignment((tuple(reversed(row_a)), tuple(reversed(row_b))), score[m][n])


def sp_score(rows: Sequence[Segments], scoring: Scoring = Scoring()) -> float:
    """Sum-of-pairs score over all row pairs; gap-gap columns score zero."""
    total = 0.0
    k = len(rows)
    width = len(rows[0])
    for i in range(k):
        for j in range(i + 1, k):
            for col in range(width):
                x, y = rows[i][col], rows[j][col]
                if x == GAP and y == GAP:
                    continue
                total += scoring.gap if GAP in (x, y) else scoring.pair(x, y)
    return total


def _align_to_profile(profile: list[list[str]], seq: Sequence[str], scoring: Scoring) -> tuple[list[list[str]], list[str]]:
    """Align one sequence against existing columns; old gaps never reopen."""
    cols = list(zip(*profile))
    m, n = len(cols), len(seq)

    def col_score(col: tuple[str, ...], token: str) -> float:
        return sum(scoring.gap if sym == GAP else scoring.pair(sym, token) for sym in col) / len(col)

    score = [[0.0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        score[i][0] = i * scoring.gap
    for j in range(1, n + 1):
        score[0][j] = j * scoring.gap
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            score[i][j] = max(
                score[i - 1][j - 1] + col_score(cols[i - 1], seq[j - 1]),
                score[i - 1][j] + scoring.gap,  # seq skips this profile column
                score[i][j - 1] + scoring.gap,  # new gap column in the profile
            )
    new_cols: list[tuple[str, ...]] = []
    new_row: list[str] = []
    i, j = m, n
    k = len(profile)
    while i > 0 or j > 0:
        if i > 0 and j > 0 and score[i][j] == score[i - 1][j - 1] + col_score(cols[i - 1], seq[j - 1]):
            new_cols.append(cols[i - 1])
            new_row.append(seq[j - 1])
            i, j = i - 1, j - 1
        elif i > 0 and score[i][j] == score[i - 1][j] + scoring.gap:
            new_cols.append(cols[i - 1])
            new_row.append(GAP)
            i -= 1
        else:
            new_cols.append((GAP,) * k)
            new_row.append(seq[j - 1])
            j -= 1
    new_cols.reverse()
    new_row.reverse()
    merged = [list(row) for row in zip(*new_cols)]
    return merged, new_row


def align_multi(seqs: Sequence[Sequence[str]], scoring: Scoring = Scoring()) -> Alignment:
    """Progressive multiple alignment, guided by pairwise similarity."""
    if len(seqs) < 2:
        raise ValueError("multiple alignment needs at least two sequences")
    k = len(seqs)
    pair_scores: dict[tuple[int, int], float] = {}
    for i in range(k):
        for j in range(i + 1, k):
            pair_scores[(i, j)] = align_pair(seqs[i], seqs[j], scoring).score

    (first, second) = max(pair_scores, key=lambda ij: (pair_scores[ij], (-ij[0], -ij[1])))
    seed = align_pair(seqs[first], seqs[second], scoring)
    profile: list[list[str]] = [list(seed.rows[0]), list(seed.rows[1])]
    placed = [first, second]

    remaining = [i for i in range(k) if i not in placed]
    while remaining:
        def affinity(i: int) -> float:
            return max(pair_scores[tuple(sorted((i, p)))] for p in placed)

        nxt = max(remaining, key=lambda i: (affinity(i), -i))
        profile, new_row = _align_to_profile(profile, seqs[nxt], scoring)
        profile.append(new_row)
        placed.append(nxt)
        remaining.remove(nxt)

    ordered = [tuple(profile[placed.index(i)]) for i in range(k)]
    return Alignment(tuple(ordered), sp_score(ordered, scoring))


def aligned_span_segments(
    etymon: Segments, reflex: Segments, span: tuple[int, int], scoring: Scoring = Scoring()
) -> Segments:
    """Reflex segments in the columns where the etymon holds the target span."""
    alignment = align_pair(etymon, reflex, scoring)
    top, bottom = alignment.rows
    start, end = span
    collected = []
    pos = 0
    for a_sym, b_sym in zip(top, bottom):
        if a_sym == GAP:
            continue
        if start <= pos < end and b_sym != GAP:
            collected.append(b_sym)
        pos += 1
    return tuple(collected)


def outcome_rate(
    sets: Sequence[CognateSet],
    query: SoundChangeQuery,
    language_id: str,
    outcome: str | None = None,
) -> float | None:
    """Share of a language's reflexes whose span outcome matches the class.

    Doublets count as separate reflexes and pooling across cognate sets is by
    reflex count.  Full deletion of the span stays in the denominator as a
    non-matching outcome.  Returns None when the language has no reflexes in
    any applicable set.
    """
    if outcome is None:
        outcome = next(iter(query.classes))
    allowed = query.classes[outcome]
    start, end = query.span
    total = 0
    hits = 0
    for cognate_set in sets:
        if end > len(cognate_set.etymon):
            continue  # this etymon has no such span
        for reflex in cognate_set.reflexes.get(language_id, ()):
            total += 1
            segments = aligned_span_segments(cognate_set.etymon, tuple(reflex), (start, end))
            if segments and all(s in allowed for s in segments):
                hits += 1
    if total == 0:
        return None
    return hits / total


def overlay_from_rates(
    sets: Sequence[CognateSet],
    query: SoundChangeQuery,
    languages: Sequence[str],
    outcome: str | None = None,
    feature_id: str | None = None,
) -> FeatureOverlay:
    """Continuous overlay of per-language outcome rates; no-data stays absent."""
    if outcome is None:
        outcome = next(iter(query.classes))
    if feature_id is None:
        feature_id = f"outcome:{outcome}"
    values: dict[str, float] = {}
    for language_id in languages:
        rate = outcome_rate(sets, query, language_id, outcome)
        if rate is not None:
            values[language_id] = rate
    return FeatureOverlay(feature_id=feature_id, kind="continuous", values=values)


def load_cognate_sets(raw: Sequence[Mapping]) -> list[CognateSet]:
    """Parse the cognate input document: a list of etymon records."""
    sets = []
    for record in raw:
        reflexes = {
            lang: tuple(tuple(form) for form in forms)
            for lang, forms in record["reflexes"].items()
        }
        sets.append(CognateSet(record["etymon_id"], tuple(record["etymon"]), reflexes))
    return sets
