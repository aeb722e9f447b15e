"""
Word-Overlap Similarity Metrics

Sentence-level d(y, r) scores computed on token sequences:
- Smoothed sentence BLEU with multi-reference clipping
- METEOR with staged exact/stem alignment and fragmentation penalty
- ROUGE-L F-measure over the longest common subsequence
"""

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

from src.config import METEOR_SEARCH_BUDGET
from src.corpus.text import ngrams
from src.errors import MetricError
from src.metrics.params import BleuParams, MeteorParams, MeteorStage, RougeParams
from src.metrics.stemming import porter_stem
from src.utils.logger import logger

Tokens = Sequence[str]


# ============================================================================
# LONGEST COMMON SUBSEQUENCE / ROUGE-L
# ============================================================================

def lcs_length(a: Tokens, b: Tokens) -> int:
    """Length of a longest common subsequence of two token sequences."""
    if not a or not b:
        return 0
    if len(b) > len(a):
        a, b = b, a

    previous = [0] * (len(b) + 1)
    for token_a in a:
        current = [0] * (len(b) + 1)
        for j, token_b in enumerate(b, start=1):
            if token_a == token_b:
                current[j] = previous[j - 1] + 1
            else:
                current[j] = max(previous[j], current[j - 1])
        previous = current
    return previous[-1]


def rouge_l(hyp: Tokens, ref: Tokens, params: RougeParams = RougeParams()) -> float:
    """
    ROUGE-L F-measure.

    P = LCS/|hyp|, R = LCS/|ref|, F = (1 + beta^2) P R / (R + beta^2 P)
    """
    if not hyp or not ref:
        raise MetricError("ROUGE-L is undefined for an empty sentence")

    lcs = lcs_length(hyp, ref)
    if lcs == 0:
        return 0.0

    precision = lcs / len(hyp)
    recall = lcs / len(ref)
    beta_sq = params.beta ** 2
    return ((1 + beta_sq) * precision * recall) / (recall + beta_sq * precision)


# ============================================================================
# BLEU
# ============================================================================

def _closest_ref_length(hyp_len: int, ref_lens: Sequence[int]) -> int:
    return min(ref_lens, key=lambda ref_len: (abs(ref_len - hyp_len), ref_len))


def brevity_penalty(hyp_len: int, ref_len: int) -> float:
    if hyp_len > ref_len:
        return 1.0
    return math.exp(1 - ref_len / hyp_len)


def modified_precision(hyp: Tokens, refs: Sequence[Tokens], n: int) -> Tuple[int, int]:
    """
    Clipped n-gram matches and total hypothesis n-grams.

    Each hypothesis n-gram count is clipped by its maximum count in any
    single reference.
    """
    hyp_counts = ngrams(hyp, n)
    max_ref_counts: Counter = Counter()
    for ref in refs:
        for gram, count in ngrams(ref, n).items():
            if count > max_ref_counts[gram]:
                max_ref_counts[gram] = count

    matched = sum(min(count, max_ref_counts[gram]) for gram, count in hyp_counts.items())
    return matched, sum(hyp_counts.values())


def sentence_bleu(hyp: Tokens, refs: Sequence[Tokens], params: BleuParams = BleuParams()) -> float:
    """
    Smoothed sentence-level BLEU against one or more references.

    Zero match counts are replaced by ``params.epsilon`` in the numerator;
    the denominator of an order with no hypothesis n-grams is taken as 1.

    Args:
        hyp: Hypothesis tokens
        refs: One or more reference token sequences
        params: Maximum order and smoothing constant

    Returns:
        BP * (p_1 * ... * p_N) ** (1/N)
    """
    if not hyp:
        raise MetricError("BLEU is undefined for an empty hypothesis")
    if not refs:
        raise MetricError("BLEU requires at least one reference")
    if any(not ref for ref in refs):
        raise MetricError("BLEU is undefined for an empty reference")

    precisions: List[float] = []
    for n in range(1, params.max_n + 1):
        matched, total = modified_precision(hyp, refs, n)
        numerator = matched if matched > 0 else params.epsilon
        precisions.append(numerator / max(1, total))

    geometric_mean = math.prod(precisions) ** (1.0 / params.max_n)
    ref_len = _closest_ref_length(len(hyp), [len(ref) for ref in refs])
    return brevity_penalty(len(hyp), ref_len) * geometric_mean


# ============================================================================
# METEOR
# ============================================================================

_STAGE_KEYS: Dict[MeteorStage, Callable[[str], str]] = {
    MeteorStage.EXACT: lambda token: token,
    MeteorStage.STEM: porter_stem,
}

Alignment = Dict[int, int]
Score = Tuple[int, int]


@dataclass
class _Frame:
    """Search node at hypothesis position ``i`` with the moves still to try."""

    i: int
    prev: Optional[int]
    matches: int
    chunks: int
    moves: List[Optional[int]]
    cursor: int = 0
    placed: Optional[int] = None


def _greedy_stage(
    hyp_len: int, fixed: Alignment, candidates: Dict[int, List[int]]
) -> Tuple[Score, Tuple[Tuple[int, int], ...]]:
    """Left-to-right alignment that extends the current chunk when it can."""
    used: Set[int] = set()
    pairs: List[Tuple[int, int]] = []
    prev: Optional[int] = None
    matches = chunks = 0
    for i in range(hyp_len):
        if i in fixed:
            j = fixed[i]
        else:
            free = [j for j in candidates.get(i, ()) if j not in used]
            if not free:
                prev = None
                continue
            j = prev + 1 if prev is not None and prev + 1 in free else free[0]
            used.add(j)
            pairs.append((i, j))
            matches += 1
        chunks += int(prev is None or j != prev + 1)
        prev = j
    return (matches, -chunks), tuple(pairs)


def _align_stage(
    hyp_len: int,
    fixed: Alignment,
    candidates: Dict[int, List[int]],
    budget: int = METEOR_SEARCH_BUDGET,
) -> Alignment:
    """
    One-to-one alignment for a single stage.

    Maximizes new matches, then minimizes the chunk count of the combined
    alignment; remaining ties go to the alignment that matches earlier
    hypothesis positions to earlier reference positions.

    Depth-first branch and bound over hypothesis positions, seeded with the
    greedy alignment. A subtree is cut when its best possible match count
    and its chunks so far cannot beat the incumbent. When ``budget`` node
    expansions are spent the incumbent is returned as is.
    """
    # Positions at or after i that still have a candidate
    open_after = [0] * (hyp_len + 1)
    for i in range(hyp_len - 1, -1, -1):
        open_after[i] = open_after[i + 1] + int(i in candidates)
    free_refs = len({j for js in candidates.values() for j in js})

    best, best_pairs = _greedy_stage(hyp_len, fixed, candidates)
    # The greedy seed gives way to any search leaf that ties it
    seeded = True

    used: Set[int] = set()
    pairs: List[Tuple[int, int]] = []
    stack: List[_Frame] = []

    def moves(i: int) -> List[Optional[int]]:
        if i in fixed:
            return [fixed[i]]
        return [j for j in candidates.get(i, ()) if j not in used] + [None]

    def hopeless(i: int, matches: int, chunks: int) -> bool:
        bound = (matches + min(open_after[i], free_refs - len(used)), -chunks)
        return bound < best or (bound == best and not seeded)

    def enter(i: int, prev: Optional[int], matches: int, chunks: int) -> None:
        nonlocal best, best_pairs, seeded
        if i < hyp_len:
            stack.append(_Frame(i, prev, matches, chunks, moves(i)))
            return
        score = (matches, -chunks)
        if score > best or (seeded and score == best):
            best, best_pairs, seeded = score, tuple(pairs), False

    enter(0, None, 0, 0)
    expansions = 0
    while stack:
        frame = stack[-1]
        if frame.placed is not None:
            used.discard(frame.placed)
            pairs.pop()
            frame.placed = None
        if frame.cursor == len(frame.moves) or expansions >= budget:
            stack.pop()
            continue

        j = frame.moves[frame.cursor]
        frame.cursor += 1
        expansions += 1

        if j is None:
            prev, matches, chunks = None, frame.matches, frame.chunks
        else:
            prev = j
            matches = frame.matches
            chunks = frame.chunks + int(frame.prev is None or j != frame.prev + 1)
            if frame.i not in fixed:
                used.add(j)
                pairs.append((frame.i, j))
                frame.placed = j
                matches += 1

        if not hopeless(frame.i + 1, matches, chunks):
            enter(frame.i + 1, prev, matches, chunks)

    if expansions >= budget:
        logger.debug(f"METEOR alignment search stopped after {expansions} expansions")
    return dict(best_pairs)


def _positions(keys: Sequence[str]) -> Dict[str, List[int]]:
    positions: Dict[str, List[int]] = defaultdict(list)
    for j, key in enumerate(keys):
        positions[key].append(j)
    return positions


def meteor_alignment(hyp: Tokens, ref: Tokens, params: MeteorParams = MeteorParams()) -> Alignment:
    """Staged alignment mapping hypothesis positions to reference positions."""
    alignment: Alignment = {}
    for stage in params.stages:
        key = _STAGE_KEYS[MeteorStage(stage)]
        ref_positions = _positions([key(token) for token in ref])
        used = set(alignment.values())
        candidates: Dict[int, List[int]] = {}
        for i, token in enumerate(hyp):
            if i in alignment:
                continue
            matching = [j for j in ref_positions.get(key(token), ()) if j not in used]
            if matching:
                candidates[i] = matching
        if candidates:
            alignment.update(_align_stage(len(hyp), dict(alignment), candidates))
    return alignment


def count_chunks(alignment: Alignment) -> int:
    """Maximal runs of matches contiguous in both hypothesis and reference."""
    chunks = 0
    previous: Optional[Tuple[int, int]] = None
    for i, j in sorted(alignment.items()):
        if previous is None or i != previous[0] + 1 or j != previous[1] + 1:
            chunks += 1
        previous = (i, j)
    return chunks


def meteor(hyp: Tokens, ref: Tokens, params: MeteorParams = MeteorParams()) -> float:
    """
    METEOR score of a hypothesis against a single reference.

    F = P R / (alpha P + (1 - alpha) R), penalty = gamma (chunks / m) ** beta,
    score = F (1 - penalty); 0 when nothing aligns.
    """
    if not hyp or not ref:
        raise MetricError("METEOR is undefined for an empty sentence")

    alignment = meteor_alignment(hyp, ref, params)
    matches = len(alignment)
    if matches == 0:
        return 0.0

    precision = matches / len(hyp)
    recall = matches / len(ref)
    f_mean = (precision * recall) / (params.alpha * precision + (1 - params.alpha) * recall)
    penalty = params.gamma * (count_chunks(alignment) / matches) ** params.beta
    return f_mean * (1 - penalty)
