"""Binary sequences, overlapping-substring counting, and De Bruijn sequences."""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Iterator

import numpy as np

__all__ = [
    "BitSequence",
    "CountTable",
    "count_substrings",
    "count_substrings_fast",
    "debruijn",
    "MAX_TABLE_ENTRIES",
    "DEBRUIJN_BUDGET_BITS",
]

# Dense count tables hold 2^(L+1) integers; refuse lengths that would not fit
# comfortably in memory.
MAX_TABLE_ENTRIES = 1 << 27

# Default ceiling on generated De Bruijn sequence length (in bits).
DEBRUIJN_BUDGET_BITS = 1 << 26

_VALID_BITS = frozenset("01")


class BitSequence:
    """Immutable sequence of 0/1 symbols.

    Stored as a compact character string; converts to a numpy 0/1 array on
    demand for the vectorised counting path.
    """

    __slots__ = ("_bits",)

    def __init__(self, bits: str | Iterable[int] = ""):
        if not isinstance(bits, str):
            bits = "".join("1" if b else "0" for b in bits)
        if not set(bits) <= _VALID_BITS:
            bad = sorted(set(bits) - _VALID_BITS)
            raise ValueError(f"bit sequence may contain only '0' and '1', got {bad}")
        self._bits = bits

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "BitSequence":
        """Build from a numpy array of 0/1 integers."""
        arr = np.asarray(arr)
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ValueError("array elements must be 0 or 1")
        return cls((arr.astype(np.uint8) + ord("0")).tobytes().decode("ascii"))

    @property
    def bits(self) -> str:
        return self._bits

    def to_array(self) -> np.ndarray:
        """Return the bits as an int64 array of 0s and 1s."""
        raw = np.frombuffer(self._bits.encode("ascii"), dtype=np.uint8)
        return (raw - ord("0")).astype(np.int64)

    def __len__(self) -> int:
        return len(self._bits)

    def __iter__(self) -> Iterator[int]:
        return (ord(c) - ord("0") for c in self._bits)

    def __getitem__(self, idx):
        if isinstance(idx, slice):
            return BitSequence(self._bits[idx])
        return ord(self._bits[idx]) - ord("0")

    def __add__(self, other: "BitSequence") -> "BitSequence":
        return BitSequence(self._bits + other._bits)

    def __eq__(self, other) -> bool:
        return isinstance(other, BitSequence) and self._bits == other._bits

    def __hash__(self) -> int:
        return hash(self._bits)

    def __str__(self) -> str:
        return self._bits

    def __repr__(self) -> str:
        if len(self._bits) <= 32:
            return f"BitSequence({self._bits!r})"
        return f"BitSequence({self._bits[:29]!r}..., len={len(self._bits)})"


class CountTable:
    """Occurrence counts of every binary pattern of length 1..max_len.

    Occurrences overlap.  In linear mode the end of the sequence does not
    wrap; in cyclic mode the last position is followed by the first.  Counts
    are stored per length as a dense array indexed by the pattern value
    (first bit most significant), so "0" and "00" are distinct keys.
    """

    __slots__ = ("max_len", "mode", "source_len", "_levels")

    def __init__(self, max_len: int, mode: str, source_len: int,
                 levels: list[np.ndarray]):
        if mode not in ("linear", "cyclic"):
            raise ValueError(f"mode must be 'linear' or 'cyclic', got {mode!r}")
        if len(levels) != max_len:
            raise ValueError("one counts array per pattern length expected")
        for h, lvl in enumerate(levels, start=1):
            if lvl.shape != (1 << h,):
                raise ValueError(f"length-{h} level must have {1 << h} entries")
            lvl.flags.writeable = False
        self.max_len = max_len
        self.mode = mode
        self.source_len = source_len
        self._levels = levels

    def level(self, length: int) -> np.ndarray:
        """All counts for patterns of the given length, indexed by value."""
        if not 1 <= length <= self.max_len:
            raise ValueError(
                f"pattern length {length} outside table range 1..{self.max_len}")
        return self._levels[length - 1]

    def count(self, pattern: str) -> int:
        """Occurrences of a concrete pattern such as "01"."""
        if not pattern or not set(pattern) <= _VALID_BITS:
            raise ValueError(f"pattern must be a non-empty string of 0/1, got {pattern!r}")
        return int(self.level(len(pattern))[int(pattern, 2)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, CountTable):
            return NotImplemented
        return (self.max_len == other.max_len
                and self.mode == other.mode
                and self.source_len == other.source_len
                and all(np.array_equal(a, b)
                        for a, b in zip(self._levels, other._levels)))

    def __repr__(self) -> str:
        return (f"CountTable(max_len={self.max_len}, mode={self.mode!r}, "
                f"source_len={self.source_len})")


def _check_max_len(max_len: int) -> None:
    if max_len < 1:
        raise ValueError(f"pattern length bound must be >= 1, got {max_len}")
    if (1 << (max_len + 1)) > MAX_TABLE_ENTRIES:
        raise ValueError(
            f"pattern length bound {max_len} needs {1 << (max_len + 1)} table "
            f"entries, over the budget of {MAX_TABLE_ENTRIES}")


def count_substrings(s: BitSequence, max_len: int, mode: str = "linear") -> CountTable:
    """Count every pattern of length 1..max_len by direct substring extraction.

    Straightforward reference counter: for each length, slide a window over
    the text (extended by a wrapped prefix in cyclic mode) and tally slices.
    """
    if mode not in ("linear", "cyclic"):
        raise ValueError(f"mode must be 'linear' or 'cyclic', got {mode!r}")
    _check_max_len(max_len)
    text = s.bits
    n = len(text)
    levels = []
    for h in range(1, max_len + 1):
        counts = np.zeros(1 << h, dtype=np.int64)
        if h <= n:
            window_text = text if mode == "linear" else text + text[: h - 1]
            tally = Counter(window_text[i:i + h]
                            for i in range(len(window_text) - h + 1))
            for pattern, cnt in tally.items():
                counts[int(pattern, 2)] = cnt
        levels.append(counts)
    return CountTable(max_len, mode, n, levels)


def count_substrings_fast(s: BitSequence, max_len: int) -> CountTable:
    """Optimised linear-mode counter; output equals count_substrings(s, L, linear).

    Windows are encoded as machine integers built by shifting in one bit at a
    time.  For each length only the patterns starting with 0 are tallied from
    the sequence; counts of patterns starting with 1 follow from the
    prefix-extension identity

        count(1w) = count(w) - count(0w) - [sequence starts with w]

    using the already-complete table one length shorter.
    """
    _check_max_len(max_len)
    bits = s.to_array()
    n = bits.size
    levels: list[np.ndarray] = []
    window_vals = bits  # values of all length-h windows, updated per level
    prev_full: np.ndarray | None = None
    for h in range(1, max_len + 1):
        if h > n:
            levels.append(np.zeros(1 << h, dtype=np.int64))
            continue
        if h > 1:
            window_vals = (window_vals[: n - h + 1] << 1) | bits[h - 1:]
        zero_start = window_vals[bits[: n - h + 1] == 0]
        low = np.bincount(zero_start, minlength=1 << (h - 1)).astype(np.int64)
        if h == 1:
            high = np.array([n - low[0]], dtype=np.int64)
        else:
            high = prev_full - low
            high[int(s.bits[: h - 1], 2)] -= 1  # the pattern opening the sequence
        full = np.concatenate([low, high])
        levels.append(full)
        prev_full = full
    return CountTable(max_len, "linear", n, levels)


def debruijn(order: int, *, max_bits: int = DEBRUIJN_BUDGET_BITS) -> BitSequence:
    """Lexicographically least binary De Bruijn sequence of the given order.

    The result has length 2**order and, read cyclically, contains every
    binary pattern of that length exactly once.  Built by concatenating the
    Lyndon words whose lengths divide the order, in lexicographic order.
    """
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if (1 << order) > max_bits:
        raise ValueError(
            f"order {order} yields {1 << order} bits, over the budget of {max_bits}")
    out: list[str] = []
    word = [0] * (order + 1)

    def extend(t: int, p: int) -> None:
        if t > order:
            if order % p == 0:
                out.extend("01"[b] for b in word[1:p + 1])
            return
        word[t] = word[t - p]
        extend(t + 1, p)
        for b in range(word[t - p] + 1, 2):
            word[t] = b
            extend(t + 1, t)

    extend(1, 1)
    return BitSequence("".join(out))
