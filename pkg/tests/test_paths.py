"""
Tests for block words, the bounding conditions and the word search.
"""

import random
import warnings
from math import gcd

import pytest

from rootmult.lattice import LatticeVector, Shape, vectors_of_height
from rootmult.paths import (
    Block,
    BlockWord,
    BruteForceCapError,
    Condition,
    EmitMode,
    EnumOptions,
    GcdWarning,
    NotImaginaryWarning,
    TouchRule,
    Verdict,
    WordParseError,
    brute_enumerate,
    check_basic,
    check_refined,
    check_word,
    count_bounds,
    enumerate_words,
    lattice_points,
    parse_word,
    pointwise_dyck,
    refined_quantities,
    warn_if_not_bounding,
)


V = LatticeVector

BASIC_WORDS_432 = [
    "111122233",
    "111223123",
    "112123123",
    "112211233",
    "112311223",
    "112312123",
]

# The five words for (4, 3, 3), s=2, t=1; 1123311223 fails R1, 1123123123 is an over-count
BASIC_WORDS_433 = [
    "1111222333",
    "1112233123",
    "1123123123",
    "1123311223",
    "1123312123",
]

LIST = EmitMode.LIST_WORDS


def word(text: str, target: tuple[int, int, int], shape: tuple[int, int] = (2, 1)) -> BlockWord:
    return parse_word(text, V(*target), Shape(*shape))


def targets_up_to(max_height: int, min_height: int = 1):
    for h in range(min_height, max_height + 1):
        for x in vectors_of_height(h):
            if x.a >= 1:
                yield x


class TestParseWord:
    """Test splitting letter strings into blocks."""

    def test_blocks(self):
        w = word("112312123", (4, 3, 2))
        assert w.blocks == (Block(2, 1, 1), Block(1, 1, 0), Block(1, 1, 1))
        assert w.text == "112312123"

    def test_trailing_ones_form_their_own_block(self):
        w = word("1231", (2, 1, 1))
        assert w.blocks == (Block(1, 1, 1), Block(1, 0, 0))

    @pytest.mark.parametrize("text,match", [
        ("", "empty"),
        ("2113", "start with 1"),
        ("11323", "2 after 3"),
        ("112x", "unexpected character"),
        ("1123", "letter counts"),
    ])
    def test_malformed(self, text, match):
        with pytest.raises(WordParseError, match=match):
            word(text, (4, 3, 2))

    def test_lattice_points(self):
        w = word("123", (1, 1, 1))
        assert lattice_points(w) == [(0, 0), (0, 1), (2, 1), (3, 1)]


class TestCheckBasic:
    """Test conditions C1 to C6 on hand-checked words."""

    def test_passing_word(self):
        assert check_basic(word("112211233", (4, 3, 2))).verdict == Verdict.PASS

    def test_empty_trailing_block_fails_c1(self):
        report = check_basic(word("1231", (2, 1, 1)))
        assert report.failed_condition == Condition.C1
        assert report.position == 2

    def test_dyck_failure_reported_before_local_failure(self):
        report = check_basic(word("11223122312", (4, 5, 2)))
        assert report.failed_condition == Condition.C2_DYCK
        assert report.position == 2
        assert "(10, 3)" in report.detail

    def test_touch_point_ratio(self):
        report = check_basic(word("112331122", (4, 3, 2)))
        assert report.failed_condition == Condition.C3_TOUCH
        assert report.position == 1

    def test_touch_with_no_threes_passes(self):
        # the prefix 1122 touches the diagonal with c' = 0
        assert check_basic(word("112211233", (4, 3, 2))).passed

    def test_block_ratio(self):
        report = check_basic(parse_word("1222", V(1, 3, 0), Shape(2, 1)))
        assert report.failed_condition == Condition.C4_RATIO
        assert report.position == 1

    def test_local_cap(self):
        report = check_basic(word("112122", (3, 3, 0)))
        assert report.failed_condition == Condition.C5_LOCAL
        assert report.position == 1

    def test_surd_cap(self):
        report = check_basic(word("11223111122222233", (6, 8, 3)))
        assert report.failed_condition == Condition.C6_SURD
        assert report.position == 1

    def test_touch_rules_diverge_on_non_primitive_target(self):
        w = word("123123", (2, 2, 2))
        assert check_basic(w, TouchRule.WEAK).passed
        strict = check_basic(w, TouchRule.STRICT)
        assert strict.failed_condition == Condition.C3_TOUCH
        assert strict.position == 1
        assert check_refined(w).passed


class TestCheckRefined:
    """Test conditions R1 and R2."""

    def test_rejects_one_of_six_words(self):
        report = check_refined(word("112311223", (4, 3, 2)))
        assert report.failed_condition == Condition.R1_REFINED_RATIO
        assert report.position == (1, 1)

    def test_quantities_of_failing_pair(self):
        report = check_refined(word("1123311223", (4, 3, 3)))
        assert report.failed_condition == Condition.R1_REFINED_RATIO
        assert report.position == (1, 1)
        q = report.quantities
        assert (q.n_a, q.n_b, q.n_c) == (2, 1, 1)
        assert (q.a_tilde, q.b_tilde, q.c_tilde) == (1, 1, 1)

    def test_known_over_count_passes_both(self):
        w = word("1123123123", (4, 3, 3))
        assert check_basic(w).passed
        assert check_refined(w).passed

    def test_tie_break(self):
        w = word("11111222312", (6, 4, 1))
        assert check_basic(w).passed
        report = check_refined(w)
        assert report.failed_condition == Condition.R2_REFINED_TIE
        assert report.position == (1, 1)
        assert (report.quantities.b_tilde, report.quantities.c_tilde) == (1, 1)

    def test_equality_without_threes_passes(self):
        w = word("111221123122", (6, 5, 1), (2, 2))
        q = refined_quantities(w, 1, 1)
        assert q.c_tilde == 0
        assert check_basic(w).passed
        assert check_refined(w).passed

    def test_refined_quantities_range(self):
        w = word("112311223", (4, 3, 2))
        with pytest.raises(ValueError, match="need 1 <= i <= j"):
            refined_quantities(w, 1, 2)

    def test_check_word_respects_options(self):
        w = word("112311223", (4, 3, 2))
        assert check_word(w, EnumOptions(refined=False)).passed
        assert not check_word(w, EnumOptions(refined=True)).passed


class TestEnumerate:
    """Test the pruned word search."""

    def test_word_list_fixture(self, sh21):
        basic = enumerate_words(V(4, 3, 2), sh21, EnumOptions(refined=False, emit=LIST))
        refined = enumerate_words(V(4, 3, 2), sh21, EnumOptions(refined=True, emit=LIST))

        assert [w.text for w in basic.words] == BASIC_WORDS_432
        assert sorted(set(BASIC_WORDS_432) - {w.text for w in refined.words}) == ["112311223"]
        assert refined.count == 5

    def test_count_only_has_no_words(self, sh21):
        result = enumerate_words(V(4, 3, 2), sh21)
        assert result.words is None
        assert result.count == 5

    def test_refined_micro_fixture(self, sh21):
        basic = enumerate_words(V(4, 3, 3), sh21, EnumOptions(refined=False, emit=LIST))
        refined = enumerate_words(V(4, 3, 3), sh21, EnumOptions(refined=True, emit=LIST))

        assert basic.count == 5
        assert [w.text for w in basic.words] == BASIC_WORDS_433
        refined_texts = [w.text for w in refined.words]
        assert "1123311223" not in refined_texts
        assert "1123123123" in refined_texts

    @pytest.mark.parametrize("shape,root,basic,refined", [
        ((2, 1), (2, 2, 1), 2, 2),
        ((2, 1), (3, 3, 1), 3, 3),
        ((2, 1), (4, 3, 2), 6, 5),
        ((2, 1), (4, 4, 1), 6, 5),
        ((2, 1), (5, 4, 2), 15, 11),
        ((2, 1), (6, 5, 3), 46, 33),
        ((2, 2), (1, 1, 1), 1, 1),
        ((2, 2), (3, 2, 1), 5, 4),
        ((2, 2), (4, 1, 3), 11, 7),
        ((2, 2), (5, 4, 1), 19, 13),
        ((2, 2), (6, 5, 1), 35, 22),
    ])
    def test_count_bounds(self, shape, root, basic, refined):
        assert count_bounds(V(*root), Shape(*shape)) == (basic, refined)

    def test_words_are_sorted_and_pass_checks(self, sh21):
        result = enumerate_words(V(6, 5, 3), sh21, EnumOptions(refined=True, emit=LIST))
        texts = [w.text for w in result.words]
        assert texts == sorted(texts)
        assert all(check_word(w).passed for w in result.words)

    def test_workers_do_not_change_result(self, sh21):
        single = enumerate_words(V(6, 5, 3), sh21, EnumOptions(emit=LIST, workers=1))
        pooled = enumerate_words(V(6, 5, 3), sh21, EnumOptions(emit=LIST, workers=2))
        assert pooled.count == single.count
        assert [w.text for w in pooled.words] == [w.text for w in single.words]

    def test_touch_rules_agree_on_primitive_targets(self, sh21, sh22):
        for sh in (sh21, sh22):
            for x in targets_up_to(9):
                if x.b + x.c == 0:
                    continue
                weak = enumerate_words(x, sh, EnumOptions(refined=False, touch_rule=TouchRule.WEAK)).count
                strict = enumerate_words(x, sh, EnumOptions(refined=False, touch_rule=TouchRule.STRICT)).count
                if gcd(gcd(x.a, x.b), x.c) == 1:
                    assert weak == strict, x
                else:
                    assert weak >= strict, x

    def test_divergent_word_only_under_weak(self, sh21):
        weak = enumerate_words(V(2, 2, 2), sh21, EnumOptions(refined=False, emit=LIST))
        strict = enumerate_words(
            V(2, 2, 2), sh21, EnumOptions(refined=False, touch_rule=TouchRule.STRICT, emit=LIST)
        )
        assert "123123" in [w.text for w in weak.words]
        assert "123123" not in [w.text for w in strict.words]

    def test_target_without_first_node_rejected(self, sh21):
        with pytest.raises(ValueError, match="a ≥ 1"):
            enumerate_words(V(0, 1, 1), sh21)

    def test_invalid_workers(self):
        with pytest.raises(ValueError, match="workers"):
            EnumOptions(workers=0)


class TestBruteForce:
    """Test the pruned search against exhaustive enumeration."""

    @pytest.mark.parametrize("shape", [(2, 1), (2, 2)])
    def test_counts_agree_up_to_height_9(self, shape):
        sh = Shape(*shape)
        for x in targets_up_to(9):
            for refined in (False, True):
                opts = EnumOptions(refined=refined)
                assert enumerate_words(x, sh, opts).count == brute_enumerate(x, sh, opts).count, (x, refined)

    @pytest.mark.slow
    @pytest.mark.parametrize("shape", [(2, 1), (2, 2)])
    def test_counts_agree_up_to_height_12(self, shape):
        sh = Shape(*shape)
        for x in targets_up_to(12, min_height=10):
            for refined in (False, True):
                opts = EnumOptions(refined=refined)
                assert enumerate_words(x, sh, opts).count == brute_enumerate(x, sh, opts).count, (x, refined)

    @pytest.mark.parametrize("rule", [TouchRule.WEAK, TouchRule.STRICT])
    def test_word_lists_agree(self, sh21, rule):
        for x in targets_up_to(7):
            opts = EnumOptions(refined=True, touch_rule=rule, emit=LIST)
            pruned = [w.text for w in enumerate_words(x, sh21, opts).words]
            brute = [w.text for w in brute_enumerate(x, sh21, opts).words]
            assert pruned == brute, x

    def test_height_cap(self, sh21):
        with pytest.raises(BruteForceCapError, match="exceeds the cap 14"):
            brute_enumerate(V(6, 6, 3), sh21)
        assert brute_enumerate(V(2, 2, 1), sh21, cap=5).count == 2


class TestProperties:
    """Randomized structural properties."""

    def test_refined_words_are_basic_words(self):
        rng = random.Random(7)
        for _ in range(200):
            sh = Shape(*rng.choice([(2, 1), (2, 2), (3, 1)]))
            a = rng.randint(1, 5)
            target = V(a, rng.randint(0, 4), rng.randint(0, 3))
            basic = enumerate_words(target, sh, EnumOptions(refined=False, emit=LIST))
            refined = enumerate_words(target, sh, EnumOptions(refined=True, emit=LIST))
            assert {w.text for w in refined.words} <= {w.text for w in basic.words}

    def test_block_boundary_dyck_matches_pointwise(self):
        rng = random.Random(11)
        for _ in range(10_000):
            s, t = rng.choice([(2, 1), (2, 2), (1, 3)])
            blocks = []
            for _ in range(rng.randint(1, 6)):
                b = rng.randint(0, 3)
                c = rng.randint(0 if b else 1, 3)
                blocks.append(Block(rng.randint(1, 3), b, c))
            target = V(sum(x.a for x in blocks), sum(x.b for x in blocks), sum(x.c for x in blocks))
            w = BlockWord(tuple(blocks), target, Shape(s, t))
            fails_dyck = check_basic(w).failed_condition == Condition.C2_DYCK
            assert fails_dyck == (not pointwise_dyck(w)), w.text


class TestWarnings:
    """Test soft diagnostics for targets the count does not bound."""

    def test_non_primitive_target(self, sh21):
        with pytest.warns(GcdWarning, match="gcd"):
            warn_if_not_bounding(V(2, 2, 2), sh21)

    def test_real_root_target(self, sh21):
        with pytest.warns(NotImaginaryWarning, match="RealRoot"):
            warn_if_not_bounding(V(1, 0, 0), sh21)

    def test_imaginary_primitive_target_is_silent(self, sh21):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            warn_if_not_bounding(V(2, 2, 1), sh21)
