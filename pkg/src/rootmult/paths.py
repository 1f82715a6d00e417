"""
Block words 1^{a_1}2^{b_1}3^{c_1}1^{a_2}⋯ and the conditions that bound root multiplicities.

A word is drawn as a lattice path: each 1 is a vertical step of length 1,
each 2 a horizontal step of length s, each 3 a horizontal step of length t.
The basic conditions (C1–C6) and the refined conditions (R1, R2) are
decided with integer cross-multiplication only. Counting is a depth-first
search over blocks that applies every condition as soon as the blocks it
depends on are fixed.
"""

import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional, Union

from rootmult.arith import SurdWindow, leq_upper_surd
from rootmult.lattice import LatticeVector, RootTag, Shape, classify, gcd3


DEFAULT_BRUTE_CAP = 14


class Condition(str, Enum):
    """Identifiers of the conditions a word can fail."""
    C1 = "C1"
    C2_DYCK = "C2-dyck"
    C3_TOUCH = "C3-touch"
    C4_RATIO = "C4-ratio"
    C5_LOCAL = "C5-local"
    C6_SURD = "C6-surd"
    R1_REFINED_RATIO = "R1-refined-ratio"
    R2_REFINED_TIE = "R2-refined-tie"


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"


class TouchRule(str, Enum):
    """How a prefix touching the diagonal compares its 2s-to-3s ratio with the target's."""
    WEAK = "weak"
    STRICT = "strict"


class EmitMode(str, Enum):
    COUNT_ONLY = "countOnly"
    LIST_WORDS = "listWords"


class WordParseError(ValueError):
    """Raised when a letter string is not a well-formed block word for its target."""
    pass


class BruteForceCapError(ValueError):
    """Raised when exhaustive enumeration is asked for a target above the height cap."""
    pass


class GcdWarning(UserWarning):
    """The target is not primitive, so the count bounds a sum of multiplicity products."""
    pass


class NotImaginaryWarning(UserWarning):
    """The target is not an imaginary root, so the count bounds nothing."""
    pass


@dataclass(frozen=True)
class Block:
    """One run 1^a 2^b 3^c."""
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a < 0 or self.b < 0 or self.c < 0:
            raise ValueError(f"block sizes must be nonnegative, got {self}")

    @property
    def letters(self) -> str:
        return "1" * self.a + "2" * self.b + "3" * self.c


@dataclass(frozen=True)
class BlockWord:
    """A sequence of blocks whose letter counts equal the target."""
    blocks: tuple[Block, ...]
    target: LatticeVector
    shape: Shape

    def __post_init__(self):
        totals = (
            sum(bl.a for bl in self.blocks),
            sum(bl.b for bl in self.blocks),
            sum(bl.c for bl in self.blocks),
        )
        if totals != self.target.as_tuple():
            raise WordParseError(
                f"word has letter counts {totals}, target is {self.target.as_tuple()}"
            )

    @property
    def text(self) -> str:
        return "".join(bl.letters for bl in self.blocks)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class RefinedQuantities:
    """The integers entering the refined conditions for one pair (i, j)."""
    i: int
    j: int
    n_a: int
    n_b: int
    n_c: int
    a_tilde: int
    b_tilde: int
    c_tilde: int


@dataclass(frozen=True)
class CheckReport:
    """Outcome of checking one word. Positions are 1-based block indices or (i, j) pairs."""
    verdict: Verdict
    failed_condition: Optional[Condition] = None
    position: Optional[Union[int, tuple[int, int]]] = None
    detail: str = ""
    quantities: Optional[RefinedQuantities] = None

    @property
    def passed(self) -> bool:
        return self.verdict == Verdict.PASS

    @classmethod
    def ok(cls) -> "CheckReport":
        return cls(verdict=Verdict.PASS)

    @classmethod
    def fail(
        cls,
        condition: Condition,
        position: Union[int, tuple[int, int]],
        detail: str = "",
        quantities: Optional[RefinedQuantities] = None,
    ) -> "CheckReport":
        return cls(Verdict.FAIL, condition, position, detail, quantities)


@dataclass(frozen=True)
class EnumOptions:
    refined: bool = True
    touch_rule: TouchRule = TouchRule.WEAK
    emit: EmitMode = EmitMode.COUNT_ONLY
    workers: int = 1

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")


@dataclass
class EnumResult:
    count: int
    words: Optional[list[BlockWord]] = None


# ============================================================================
# Parsing and drawing
# ============================================================================

def parse_word(text: str, target: LatticeVector, sh: Shape) -> BlockWord:
    """
    Split a letter string into blocks at each maximal run of 1s.

    Args:
        text: String over 1, 2, 3 of the form (1+2*3*)+
        target: Expected letter counts (a, b, c)
        sh: The shape

    Returns:
        The parsed word

    Raises:
        WordParseError: On an empty string, a stray character, a leading 2 or 3,
            a 2 after a 3 inside a block, or letter counts differing from the target
    """
    if not text:
        raise WordParseError("word is empty")
    if text[0] != "1":
        raise WordParseError(f"word must start with 1, got {text!r}")

    blocks: list[Block] = []
    counts = [0, 0, 0]
    phase = 1
    for pos, letter in enumerate(text):
        if letter == "1":
            if phase > 1:
                blocks.append(Block(*counts))
                counts = [0, 0, 0]
            phase = 1
        elif letter == "2":
            if phase == 3:
                raise WordParseError(f"2 after 3 inside a block at position {pos + 1} of {text!r}")
            phase = 2
        elif letter == "3":
            phase = 3
        else:
            raise WordParseError(f"unexpected character {letter!r} at position {pos + 1}")
        counts[int(letter) - 1] += 1
    blocks.append(Block(*counts))

    return BlockWord(tuple(blocks), target, sh)


def lattice_points(w: BlockWord) -> list[tuple[int, int]]:
    """Every point (x, y) visited by the drawn path, one per letter, origin first."""
    s, t = w.shape.s, w.shape.t
    x = y = 0
    points = [(0, 0)]
    for letter in w.text:
        if letter == "1":
            y += 1
        elif letter == "2":
            x += s
        else:
            x += t
        points.append((x, y))
    return points


def pointwise_dyck(w: BlockWord) -> bool:
    """Dyck condition evaluated after every letter instead of at block boundaries."""
    A = w.target.a
    W = w.shape.s * w.target.b + w.shape.t * w.target.c
    return all(y * W - A * x >= 0 for x, y in lattice_points(w))


# ============================================================================
# Condition primitives (shared by the checkers and the search)
# ============================================================================

def _touch_ok(bp: int, cp: int, B: int, C: int, rule: TouchRule) -> bool:
    if cp == 0 and bp > 0:
        return True
    if rule == TouchRule.STRICT:
        return bp * C > B * cp
    return bp * C >= B * cp


def _caps(prev_b: int, prev_c: int, a: int, b: int, c: int, s: int, t: int) -> tuple[int, int]:
    return min(prev_b, s * a - b), min(prev_c, t * a - c)


def _local_ok(a_next: int, n_b: int, n_c: int, s: int, t: int) -> bool:
    # a + max(n_B/s, n_C/t) ≤ s·n_B + t·n_C, scaled by s·t
    return s * t * a_next + max(t * n_b, s * n_c) <= s * t * (s * n_b + t * n_c)


def _surd_ok(a_next: int, n_b: int, n_c: int, s: int, t: int, window: SurdWindow) -> bool:
    den = s * n_b + t * n_c
    return den > 0 and leq_upper_surd(a_next, den, window)


def _refined(
    pa: list[int], pb: list[int], pc: list[int], i: int, j: int, s: int, t: int
) -> RefinedQuantities:
    # p* are prefix sums with p[0] = 0, so p[m] covers blocks 1..m
    n_a = pa[j + 1] - pa[i]
    n_b = min(pb[j] - pb[i - 1], s * n_a - (pb[j + 1] - pb[i]))
    n_c = min(pc[j] - pc[i - 1], t * n_a - (pc[j + 1] - pc[i]))
    return RefinedQuantities(
        i=i,
        j=j,
        n_a=n_a,
        n_b=n_b,
        n_c=n_c,
        a_tilde=pa[i - 1] + s * n_b + t * n_c - n_a,
        b_tilde=pb[i - 1] + n_b,
        c_tilde=pc[i - 1] + n_c,
    )


def _refined_failure(
    q: RefinedQuantities, target: LatticeVector, s: int, t: int
) -> Optional[Condition]:
    A, B, C = target.a, target.b, target.c
    W = s * B + t * C
    lhs = q.a_tilde * W
    rhs = A * (s * q.b_tilde + t * q.c_tilde)
    if lhs < rhs:
        return Condition.R1_REFINED_RATIO
    if lhs == rhs and q.c_tilde > 0 and q.b_tilde * C < B * q.c_tilde:
        return Condition.R2_REFINED_TIE
    return None


def _prefix_sums(blocks: tuple[Block, ...]) -> tuple[list[int], list[int], list[int]]:
    pa, pb, pc = [0], [0], [0]
    for bl in blocks:
        pa.append(pa[-1] + bl.a)
        pb.append(pb[-1] + bl.b)
        pc.append(pc[-1] + bl.c)
    return pa, pb, pc


# ============================================================================
# Checkers
# ============================================================================

def check_basic(w: BlockWord, touch_rule: TouchRule = TouchRule.WEAK) -> CheckReport:
    """
    Evaluate conditions C1 to C6 in order and report the first failure.

    Args:
        w: The word
        touch_rule: Comparison used at proper prefixes touching the diagonal

    Returns:
        A passing report, or the failed condition with its block position
    """
    blocks = w.blocks
    s, t = w.shape.s, w.shape.t
    A, B, C = w.target.a, w.target.b, w.target.c
    W = s * B + t * C
    k = len(blocks)

    for idx, bl in enumerate(blocks, start=1):
        if bl.a < 1 or bl.b + bl.c < 1:
            return CheckReport.fail(Condition.C1, idx, f"block {idx} is {bl.letters!r}")

    h = pb = pc = 0
    boundaries = []
    for idx, bl in enumerate(blocks[:-1], start=1):
        h, pb, pc = h + bl.a, pb + bl.b, pc + bl.c
        x = s * pb + t * pc
        boundaries.append((idx, h, pb, pc, h * W - A * x))
    for idx, h, pb, pc, slack in boundaries:
        if slack < 0:
            x = s * pb + t * pc
            return CheckReport.fail(
                Condition.C2_DYCK, idx, f"path dips below the diagonal at ({x}, {h})"
            )
    for idx, h, pb, pc, slack in boundaries:
        if slack == 0 and not _touch_ok(pb, pc, B, C, touch_rule):
            return CheckReport.fail(
                Condition.C3_TOUCH,
                idx,
                f"prefix touches the diagonal with 2s:3s = {pb}:{pc} against {B}:{C}",
            )

    for idx, bl in enumerate(blocks, start=1):
        if bl.b > s * bl.a or bl.c > t * bl.a:
            return CheckReport.fail(Condition.C4_RATIO, idx, f"block {idx} is {bl.letters!r}")

    caps = []
    for idx in range(1, k):
        prev, nxt = blocks[idx - 1], blocks[idx]
        caps.append((idx, nxt.a, *_caps(prev.b, prev.c, nxt.a, nxt.b, nxt.c, s, t)))
    for idx, a_next, n_b, n_c in caps:
        if not _local_ok(a_next, n_b, n_c, s, t):
            return CheckReport.fail(Condition.C5_LOCAL, idx, f"n_B={n_b}, n_C={n_c}, a={a_next}")
    window = w.shape.window
    for idx, a_next, n_b, n_c in caps:
        if not _surd_ok(a_next, n_b, n_c, s, t, window):
            return CheckReport.fail(
                Condition.C6_SURD, idx, f"{a_next}/{s * n_b + t * n_c} is above the window"
            )

    return CheckReport.ok()


def refined_quantities(w: BlockWord, i: int, j: int) -> RefinedQuantities:
    """
    The integers n_A, n_B, n_C, ã, b̃, c̃ for the pair 1 ≤ i ≤ j < k.

    Raises:
        ValueError: If (i, j) is out of range
    """
    k = len(w.blocks)
    if not 1 <= i <= j < k:
        raise ValueError(f"need 1 <= i <= j < {k}, got i={i}, j={j}")
    pa, pb, pc = _prefix_sums(w.blocks)
    return _refined(pa, pb, pc, i, j, w.shape.s, w.shape.t)


def check_refined(w: BlockWord) -> CheckReport:
    """
    Evaluate the refined conditions R1 and R2 for every pair 1 ≤ i ≤ j < k.

    The word is expected to pass `check_basic`.
    """
    s, t = w.shape.s, w.shape.t
    k = len(w.blocks)
    pa, pb, pc = _prefix_sums(w.blocks)
    for i in range(1, k):
        for j in range(i, k):
            q = _refined(pa, pb, pc, i, j, s, t)
            failed = _refined_failure(q, w.target, s, t)
            if failed is not None:
                detail = (
                    f"ã={q.a_tilde}, b̃={q.b_tilde}, c̃={q.c_tilde} "
                    f"(n_A={q.n_a}, n_B={q.n_b}, n_C={q.n_c})"
                )
                return CheckReport.fail(failed, (i, j), detail, q)
    return CheckReport.ok()


def check_word(w: BlockWord, opts: EnumOptions = EnumOptions()) -> CheckReport:
    """`check_basic`, followed by `check_refined` when the options ask for it."""
    report = check_basic(w, opts.touch_rule)
    if report.passed and opts.refined:
        return check_refined(w)
    return report


# ============================================================================
# Pruned search
# ============================================================================

class _Search:
    """Depth-first search over blocks with thread-local state."""

    def __init__(self, target: LatticeVector, sh: Shape, opts: EnumOptions):
        self.target = target
        self.shape = sh
        self.opts = opts
        self.s, self.t = sh.s, sh.t
        self.window = sh.window
        self.W = sh.s * target.b + sh.t * target.c
        self.blocks: list[Block] = []
        self.pa, self.pb, self.pc = [0], [0], [0]
        self.count = 0
        self.words: list[str] = []

    def candidates(self) -> Iterator[tuple[Block, bool]]:
        """Next blocks passing every condition decidable once they are placed."""
        s, t, W = self.s, self.t, self.W
        A, B, C = self.target.a, self.target.b, self.target.c
        k = len(self.blocks)
        ha, hb, hc = self.pa[-1], self.pb[-1], self.pc[-1]
        ra, rb, rc = A - ha, B - hb, C - hc
        prev = self.blocks[-1] if k else None

        for a in range(1, ra + 1):
            if prev is not None:
                # caps can only shrink once b and c are chosen
                cap_b, cap_c = min(prev.b, s * a), min(prev.c, t * a)
                if not _local_ok(a, cap_b, cap_c, s, t):
                    continue
                if not _surd_ok(a, cap_b, cap_c, s, t, self.window):
                    continue
            ra2 = ra - a
            h = ha + a
            for b in range(min(rb, s * a) + 1):
                rb2 = rb - b
                if rb2 > s * ra2:
                    continue
                for c in range(min(rc, t * a) + 1):
                    if b + c == 0:
                        continue
                    rc2 = rc - c
                    final = ra2 == 0 and rb2 == 0 and rc2 == 0
                    if not final:
                        slack = h * W - A * (s * (hb + b) + t * (hc + c))
                        if slack < 0:
                            break
                        if ra2 == 0 or rb2 + rc2 == 0 or rc2 > t * ra2:
                            continue
                        if slack == 0 and not _touch_ok(hb + b, hc + c, B, C, self.opts.touch_rule):
                            continue
                    if prev is not None:
                        n_b, n_c = _caps(prev.b, prev.c, a, b, c, s, t)
                        if not _local_ok(a, n_b, n_c, s, t):
                            continue
                        if not _surd_ok(a, n_b, n_c, s, t, self.window):
                            continue
                    yield Block(a, b, c), final

    def push(self, block: Block) -> bool:
        """Append a block; False when a refined pair ending at it fails."""
        self.blocks.append(block)
        self.pa.append(self.pa[-1] + block.a)
        self.pb.append(self.pb[-1] + block.b)
        self.pc.append(self.pc[-1] + block.c)
        if not self.opts.refined:
            return True
        j = len(self.blocks) - 1
        for i in range(1, j + 1):
            q = _refined(self.pa, self.pb, self.pc, i, j, self.s, self.t)
            if _refined_failure(q, self.target, self.s, self.t) is not None:
                return False
        return True

    def pop(self) -> None:
        self.blocks.pop()
        self.pa.pop()
        self.pb.pop()
        self.pc.pop()

    def extend(self) -> None:
        for block, final in list(self.candidates()):
            if self.push(block):
                if final:
                    self.count += 1
                    if self.opts.emit == EmitMode.LIST_WORDS:
                        self.words.append("".join(bl.letters for bl in self.blocks))
                else:
                    self.extend()
            self.pop()


def _search_subtree(
    target: LatticeVector, sh: Shape, opts: EnumOptions, first: Block, final: bool
) -> tuple[int, list[str]]:
    search = _Search(target, sh, opts)
    if search.push(first):
        if final:
            search.count = 1
            if opts.emit == EmitMode.LIST_WORDS:
                search.words.append(first.letters)
        else:
            search.extend()
    return search.count, search.words


def _validate_target(target: LatticeVector) -> None:
    if not target.is_nonnegative():
        raise ValueError(f"target coefficients must be nonnegative, got {target}")
    if target.is_zero():
        raise ValueError("target must be nonzero")
    if target.a < 1:
        raise ValueError(f"target must contain α1 (a ≥ 1), got {target}")


def _finish(target: LatticeVector, sh: Shape, opts: EnumOptions, count: int, texts: list[str]) -> EnumResult:
    if opts.emit != EmitMode.LIST_WORDS:
        return EnumResult(count=count)
    words = [parse_word(text, target, sh) for text in sorted(texts)]
    return EnumResult(count=count, words=words)


def enumerate_words(
    target: LatticeVector, sh: Shape, opts: EnumOptions = EnumOptions()
) -> EnumResult:
    """
    Count (and optionally list) the block words passing the basic conditions,
    and the refined ones when `opts.refined` is set.

    With `opts.workers > 1` the first-block subtrees run in a process pool;
    counts are summed and words merged in lexicographic order, so the result
    does not depend on the worker count.

    Args:
        target: The root (a, b, c), with a ≥ 1
        sh: The shape
        opts: Search options

    Returns:
        The count, and the sorted words when `opts.emit` is LIST_WORDS

    Raises:
        ValueError: If the target is zero, negative or has a = 0
    """
    _validate_target(target)
    roots = list(_Search(target, sh, opts).candidates())

    count = 0
    texts: list[str] = []
    if opts.workers > 1 and len(roots) > 1:
        with ProcessPoolExecutor(max_workers=opts.workers) as pool:
            futures = [
                pool.submit(_search_subtree, target, sh, opts, block, final)
                for block, final in roots
            ]
            for future in futures:
                sub_count, sub_words = future.result()
                count += sub_count
                texts.extend(sub_words)
    else:
        for block, final in roots:
            sub_count, sub_words = _search_subtree(target, sh, opts, block, final)
            count += sub_count
            texts.extend(sub_words)

    return _finish(target, sh, opts, count, texts)


def _all_block_sequences(ra: int, rb: int, rc: int) -> Iterator[list[Block]]:
    # every word of the form (1+2*3*)+ with these letter counts; blocks are maximal runs
    for a in range(1, ra + 1):
        for b in range(rb + 1):
            for c in range(rc + 1):
                rest = (ra - a, rb - b, rc - c)
                if rest == (0, 0, 0):
                    yield [Block(a, b, c)]
                elif b + c > 0 and rest[0] > 0:
                    for tail in _all_block_sequences(*rest):
                        yield [Block(a, b, c), *tail]


def brute_enumerate(
    target: LatticeVector,
    sh: Shape,
    opts: EnumOptions = EnumOptions(),
    cap: int = DEFAULT_BRUTE_CAP,
) -> EnumResult:
    """
    Generate every well-formed word for the target and filter it with the checkers.

    Testing oracle for `enumerate_words`; no condition is used to prune.

    Raises:
        BruteForceCapError: If the target height exceeds `cap`
    """
    _validate_target(target)
    if target.height > cap:
        raise BruteForceCapError(f"target height {target.height} exceeds the cap {cap}")

    count = 0
    texts: list[str] = []
    for blocks in _all_block_sequences(target.a, target.b, target.c):
        word = BlockWord(tuple(blocks), target, sh)
        if check_word(word, opts).passed:
            count += 1
            texts.append(word.text)
    return _finish(target, sh, opts, count, texts)


def count_bounds(
    target: LatticeVector, sh: Shape, opts: EnumOptions = EnumOptions()
) -> tuple[int, int]:
    """(basic, refined) counts for the target, one pruned search each."""
    basic = enumerate_words(
        target, sh, EnumOptions(False, opts.touch_rule, EmitMode.COUNT_ONLY, opts.workers)
    ).count
    refined = enumerate_words(
        target, sh, EnumOptions(True, opts.touch_rule, EmitMode.COUNT_ONLY, opts.workers)
    ).count
    return basic, refined


def warn_if_not_bounding(target: LatticeVector, sh: Shape) -> None:
    """
    Warn when the word count is not an upper bound for the multiplicity of target alone.

    Emits GcdWarning for non-primitive targets and NotImaginaryWarning when the
    target is not an imaginary root.
    """
    g = gcd3(target)
    if g > 1:
        warnings.warn(
            f"gcd{target} = {g}: the count bounds a sum over the multiples of "
            f"{target.scaled_down(g)}, not the multiplicity of {target} alone",
            GcdWarning,
            stacklevel=2,
        )
    if target.is_nonnegative() and not target.is_zero():
        tag = classify(target, sh).tag
        if tag != RootTag.IMAGINARY:
            warnings.warn(
                f"{target} is classified {tag.value} for s={sh.s}, t={sh.t}; "
                "the count is not a multiplicity bound",
                NotImaginaryWarning,
                stacklevel=2,
            )
