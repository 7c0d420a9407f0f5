import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lectatlas.philology import (
    GAP,
    CognateSet,
    SoundChangeQuery,
    align_multi,
    align_pair,
    aligned_span_segments,
    load_cognate_sets,
    outcome_rate,
    overlay_from_rates,
)

ALPHABET = ["p", "t", "k", "a", "i"]


def enumerate_best_score(a, b, match=1.0, mismatch=-1.0, gap=-1.0):
    """Exhaustive alignment enumeration, written independently of the DP."""

    def best(i, j):
        if i == len(a) and j == len(b):
            return 0.0
        options = []
        if i < len(a) and j < len(b):
            options.append((match if a[i] == b[j] else mismatch) + best(i + 1, j + 1))
        if i < len(a):
            options.append(gap + best(i + 1, j))
        if j < len(b):
            options.append(gap + best(i, j + 1))
        return max(options)

    return best(0, 0)


def enumerate_best_sp3(s1, s2, s3, match=1.0, mismatch=-1.0, gap=-1.0):
    """Exhaustive three-way lattice DP over all column compositions."""

    def pair(x, y):
        if x is None and y is None:
            return 0.0
        if x is None or y is None:
            return gap
        return match if x == y else mismatch

    neg = float("-inf")
    l1, l2, l3 = len(s1), len(s2), len(s3)
    dp = [[[neg] * (l3 + 1) for _ in range(l2 + 1)] for _ in range(l1 + 1)]
    dp[0][0][0] = 0.0
    for i in range(l1 + 1):
        for j in range(l2 + 1):
            for k in range(l3 + 1):
                cur = dp[i][j][k]
                if cur == neg:
                    continue
                for di, dj, dk in itertools.product((0, 1), repeat=3):
                    if (di, dj, dk) == (0, 0, 0):
                        continue
                    ni, nj, nk = i + di, j + dj, k + dk
                    if ni > l1 or nj > l2 or nk > l3:
                        continue
                    x = s1[i] if di else None
                    y = s2[j] if dj else None
                    z = s3[k] if dk else None
                    col = pair(x, y) + pair(x, z) + pair(y, z)
                    if cur + col > dp[ni][nj][nk]:
                        dp[ni][nj][nk] = cur + col
    return dp[l1][l2][l3]


def strip_gaps(row):
    return tuple(s for s in row if s != GAP)


class TestAlignPair:
    def test_identical_sequences_align_gap_free(self):
        alignment = align_pair(["k", "a"], ["k", "a"])
        assert alignment.rows == (("k", "a"), ("k", "a"))
        assert alignment.score == 2.0

    def test_trailing_gap(self):
        alignment = align_pair(["k"], ["k", "a"])
        assert alignment.rows == (("k", GAP), ("k", "a"))
        assert alignment.score == 0.0

    def test_empty_sequence_rejected(self):
        with pytest.raises(ValueError):
            align_pair([], ["k"])

    def test_reflex_example_matches_enumeration(self):
        a = ["k", "ʂ", "aː", "r", "ə"]
        b = ["kʰ", "aː", "r"]
        assert align_pair(a, b).score == enumerate_best_score(a, b)

    def test_oracle_on_random_pairs(self):
        rng = random.Random(99)
        for _ in range(200):
            a = [rng.choice(ALPHABET) for _ in range(rng.randint(1, 6))]
            b = [rng.choice(ALPHABET) for _ in range(rng.randint(1, 6))]
            assert align_pair(a, b).score == enumerate_best_score(a, b)

    @given(
        a=st.lists(st.sampled_from(ALPHABET), min_size=1, max_size=6),
        b=st.lists(st.sampled_from(ALPHABET), min_size=1, max_size=6),
    )
    @settings(max_examples=100, deadline=None)
    def test_gap_strip_round_trip(self, a, b):
        alignment = align_pair(a, b)
        assert strip_gaps(alignment.rows[0]) == tuple(a)
        assert strip_gaps(alignment.rows[1]) == tuple(b)
        assert len(alignment.rows[0]) == len(alignment.rows[1])

    def test_no_all_gap_columns(self):
        alignment = align_pair(["p", "t"], ["a", "i"])
        for col in zip(*alignment.rows):
            assert any(s != GAP for s in col)


class TestAlignMulti:
    def test_identical_sequences_gap_free(self):
        alignment = align_multi([["k", "a"], ["k", "a"], ["k", "a"]])
        assert alignment.rows == (("k", "a"),) * 3

    def test_rows_keep_input_order(self):
        seqs = [["k", "a"], ["t", "a"], ["k", "a", "r"]]
        alignment = align_multi(seqs)
        for row, seq in zip(alignment.rows, seqs):
            assert strip_gaps(row) == tuple(seq)

    def test_column_bound(self):
        seqs = [["p", "t", "k", "a"], ["t", "a"], ["k", "i", "a"]]
        alignment = align_multi(seqs)
        assert len(alignment.rows[0]) <= sum(len(s) for s in seqs)

    def test_no_all_gap_columns(self):
        seqs = [["p", "a"], ["t", "i"], ["k"]]
        alignment = align_multi(seqs)
        for col in zip(*alignment.rows):
            assert any(s != GAP for s in col)

    @pytest.mark.parametrize(
        "seqs",
        [
            (("k", "a"), ("k", "a"), ("k",)),
            (("k", "a", "r"), ("k", "a"), ("t", "a", "r")),
            (("p", "a", "t"), ("p", "a", "t", "a"), ("p", "t", "a")),
            (("k", "i"), ("a", "k", "i"), ("k", "i", "a")),
        ],
    )
    def test_matches_exhaustive_three_way_optimum(self, seqs):
        alignment = align_multi([list(s) for s in seqs])
        assert alignment.score == enumerate_best_sp3(*seqs)

    def test_needs_two_sequences(self):
        with pytest.raises(ValueError):
            align_multi([["k"]])


KSARA = CognateSet(
    "ksara",
    ("k", "ʂ", "aː", "r", "ə"),
    {"hindi": (("tʃʰ", "aː", "r"), ("kʰ", "aː", "r"))},
)
KH_QUERY = SoundChangeQuery((0, 2), {"kh": frozenset({"kʰ", "kːʰ"})})


class TestOutcomeRate:
    def test_doublet_splits_the_rate(self):
        assert outcome_rate([KSARA], KH_QUERY, "hindi") == 0.5

    def test_language_absent_from_all_sets_is_no_data(self):
        assert outcome_rate([KSARA], KH_QUERY, "bengali") is None

    def test_single_matching_reflex_is_one(self):
        cs = CognateSet("aksi", ("k", "ʂ", "i"), {"hindi": (("kʰ", "i"),)})
        assert outcome_rate([cs], KH_QUERY, "hindi") == 1.0

    def test_geminate_class_member_matches(self):
        cs = CognateSet("x", ("k", "ʂ", "a"), {"panjabi": (("kːʰ", "a"),)})
        assert outcome_rate([cs], KH_QUERY, "panjabi") == 1.0

    def test_full_deletion_counts_in_denominator(self):
        cs = CognateSet("x", ("k", "ʂ", "aː"), {"hindi": (("aː",),)})
        assert outcome_rate([cs], KH_QUERY, "hindi") == 0.0

    def test_sets_without_the_span_are_skipped(self):
        short = CognateSet("short", ("a",), {"hindi": (("a",),)})
        assert outcome_rate([short], KH_QUERY, "hindi") is None
        assert outcome_rate([short, KSARA], KH_QUERY, "hindi") == 0.5

    def test_invariant_under_reordering(self):
        other = CognateSet("aksi", ("k", "ʂ", "i"), {"hindi": (("kʰ", "i"),)})
        assert outcome_rate([KSARA, other], KH_QUERY, "hindi") == outcome_rate(
            [other, KSARA], KH_QUERY, "hindi"
        )

    def test_pooling_weighs_by_reflex_count(self):
        # 2 matching reflexes in one set, 1 non-matching in another: 2/3, not
        # the mean of per-set rates (0.5).
        many = CognateSet(
            "many", ("k", "ʂ", "a"), {"hindi": (("kʰ", "a"), ("kʰ", "aː"))}
        )
        one = CognateSet("one", ("k", "ʂ", "i"), {"hindi": (("tʃʰ", "i"),)})
        assert outcome_rate([many, one], KH_QUERY, "hindi") == pytest.approx(2 / 3)

    def test_rates_stay_in_unit_interval(self):
        rng = random.Random(5)
        tokens = ["k", "ʂ", "kʰ", "tʃʰ", "a"]
        sets = []
        for i in range(20):
            reflexes = tuple(
                tuple(rng.choice(tokens) for _ in range(rng.randint(1, 4)))
                for _ in range(rng.randint(1, 3))
            )
            sets.append(CognateSet(f"s{i}", ("k", "ʂ", "a"), {"hindi": reflexes}))
        rate = outcome_rate(sets, KH_QUERY, "hindi")
        assert 0.0 <= rate <= 1.0


class TestQueryValidation:
    def test_bad_span_rejected(self):
        with pytest.raises(ValueError):
            SoundChangeQuery((2, 2), {"kh": frozenset({"kʰ"})})
        with pytest.raises(ValueError):
            SoundChangeQuery((-1, 1), {"kh": frozenset({"kʰ"})})

    def test_overlapping_classes_rejected(self):
        with pytest.raises(ValueError):
            SoundChangeQuery((0, 2), {"a": frozenset({"kʰ"}), "b": frozenset({"kʰ", "g"})})

    def test_from_spec(self):
        q = SoundChangeQuery.from_spec({"span": [0, 2], "classes": {"kh": ["kʰ", "kːʰ"]}})
        assert q.span == (0, 2)
        assert q.classes["kh"] == frozenset({"kʰ", "kːʰ"})


class TestOverlayFromRates:
    def test_empty_sets_give_empty_values(self):
        overlay = overlay_from_rates([], KH_QUERY, ["hindi"])
        assert overlay.values == {}
        assert overlay.kind == "continuous"

    def test_doublet_fixture_value(self):
        overlay = overlay_from_rates([KSARA], KH_QUERY, ["hindi", "bengali"])
        assert overlay.values == {"hindi": 0.5}  # bengali has no data and is omitted

    def test_pooled_rate_across_sets(self):
        s1 = CognateSet("a", ("k", "ʂ", "a"), {"hindi": (("kʰ", "a"),)})
        s2 = CognateSet("b", ("k", "ʂ", "i"), {"hindi": (("tʃʰ", "i"),)})
        overlay = overlay_from_rates([s1, s2], KH_QUERY, ["hindi"])
        assert overlay.values == {"hindi": 0.5}


class TestSpanSegments:
    def test_collects_material_aligned_to_span(self):
        segments = aligned_span_segments(("k", "ʂ", "aː", "r", "ə"), ("kʰ", "aː", "r"), (0, 2))
        assert segments == ("kʰ",)

    def test_identity_alignment_collects_span_itself(self):
        segments = aligned_span_segments(("k", "ʂ", "a"), ("k", "ʂ", "a"), (0, 2))
        assert segments == ("k", "ʂ")


def test_load_cognate_sets_parses_document():
    raw = [
        {
            "etymon_id": "ksara",
            "etymon": ["k", "ʂ", "aː", "r", "ə"],
            "reflexes": {"hindi": [["tʃʰ", "aː", "r"], ["kʰ", "aː", "r"]]},
        }
    ]
    (cs,) = load_cognate_sets(raw)
    assert cs == KSARA
