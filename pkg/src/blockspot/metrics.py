"""Character-level string similarity metrics for evaluation.

Three classic measures over unicode code points:

* normalized Levenshtein distance (edit distance / longer length, lower is
  better),
* Jaro-Winkler similarity (canonical parameters: prefix scale 0.1, prefix
  length capped at 4; the prefix boost is always applied),
* Ratcliff-Obershelp similarity (gestalt pattern matching: recursive
  leftmost-longest common substring decomposition).
"""

from __future__ import annotations

from dataclasses import dataclass

from .fuzzy import levenshtein

_WINKLER_PREFIX_SCALE = 0.1
_WINKLER_MAX_PREFIX = 4


@dataclass(frozen=True)
class MetricVector:
    """Similarity metrics for one (prediction, reference) string pair."""

    nld: float
    jaro_winkler: float
    ratcliff_obershelp: float

    def __post_init__(self) -> None:
        for name in ("nld", "jaro_winkler", "ratcliff_obershelp"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} out of [0, 1]: {v}")


def compute_metrics(a: str, b: str) -> MetricVector:
    return MetricVector(
        nld=normalized_levenshtein(a, b),
        jaro_winkler=jaro_winkler(a, b),
        ratcliff_obershelp=ratcliff_obershelp(a, b),
    )


def normalized_levenshtein(a: str, b: str) -> float:
    """Edit distance divided by the longer string's length; 0.0 for two empties."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 0.0
    return levenshtein(a, b) / longest


def jaro(a: str, b: str) -> float:
    """Jaro similarity with the standard match window floor(max/2) - 1."""
    if a == b:
        return 1.0
    la, lb = len(a), len(b)
    if la == 0 or lb == 0:
        return 0.0

    window = max(max(la, lb) // 2 - 1, 0)
    a_matched = [False] * la
    b_matched = [False] * lb
    matches = 0
    for i, ca in enumerate(a):
        lo = max(0, i - window)
        hi = min(lb, i + window + 1)
        for j in range(lo, hi):
            if not b_matched[j] and b[j] == ca:
                a_matched[i] = True
                b_matched[j] = True
                matches += 1
                break
    if matches == 0:
        return 0.0

    # transpositions: matched characters compared in order of appearance
    transpositions = 0
    k = 0
    for i in range(la):
        if a_matched[i]:
            while not b_matched[k]:
                k += 1
            if a[i] != b[k]:
                transpositions += 1
            k += 1
    t = transpositions / 2

    m = matches
    return (m / la + m / lb + (m - t) / m) / 3


def jaro_winkler(a: str, b: str) -> float:
    """Jaro similarity boosted by the length of the common prefix (up to 4)."""
    sim = jaro(a, b)
    prefix = 0
    for ca, cb in zip(a, b):
        if ca != cb or prefix >= _WINKLER_MAX_PREFIX:
            break
        prefix += 1
    return sim + prefix * _WINKLER_PREFIX_SCALE * (1.0 - sim)


def _longest_common_substring(
    a: str, a_lo: int, a_hi: int, b: str, b_lo: int, b_hi: int
) -> tuple[int, int, int]:
    """Leftmost-longest common substring of a[a_lo:a_hi] and b[b_lo:b_hi].

    Returns (start_in_a, start_in_b, length); ties go to the smallest
    start in ``a``, then the smallest start in ``b``.
    """
    best_i, best_j, best_len = a_lo, b_lo, 0
    # row[j] = length of common suffix of a[..i] and b[..j]
    row = [0] * (b_hi - b_lo + 1)
    for i in range(a_lo, a_hi):
        prev_diag = 0
        ca = a[i]
        for j in range(b_lo, b_hi):
            cur = row[j - b_lo + 1]
            if ca == b[j]:
                length = prev_diag + 1
                row[j - b_lo + 1] = length
                if length > best_len:
                    best_len = length
                    best_i = i - length + 1
                    best_j = j - length + 1
            else:
                row[j - b_lo + 1] = 0
            prev_diag = cur
    return best_i, best_j, best_len


def ratcliff_obershelp(a: str, b: str) -> float:
    """Gestalt similarity 2M/T; 1.0 when both strings are empty."""
    total = len(a) + len(b)
    if total == 0:
        return 1.0

    matched = 0
    stack = [(0, len(a), 0, len(b))]
    while stack:
        a_lo, a_hi, b_lo, b_hi = stack.pop()
        if a_lo >= a_hi or b_lo >= b_hi:
            continue
        i, j, length = _longest_common_substring(a, a_lo, a_hi, b, b_lo, b_hi)
        if length == 0:
            continue
        matched += length
        stack.append((a_lo, i, b_lo, j))
        stack.append((i + length, a_hi, j + length, b_hi))
    return 2.0 * matched / total
