"""Finite-window integer sets backed by big-int bitsets.

A WindowSet holds a subset of [1, N] (1-based, 0 excluded).  Bit x of
``bits`` is the membership indicator of x; bit 0 is always clear.  All
operations are pure and WindowSets are immutable by convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np


class ValidationError(ValueError):
    """A malformed spec or out-of-range argument; names the offending field."""


def window_mask(window_len: int) -> int:
    """Bitmask with bits 1..window_len set."""
    return (1 << (window_len + 1)) - 2


class WindowSet:
    __slots__ = ("window_len", "bits", "label", "_indicator", "_counts")

    def __init__(self, window_len: int, bits: int = 0, label: str = ""):
        if window_len < 1:
            raise ValidationError(f"window_len must be positive, got {window_len}")
        self.window_len = window_len
        self.bits = bits & window_mask(window_len)
        self.label = label
        self._indicator: Optional[np.ndarray] = None
        self._counts: Optional[np.ndarray] = None

    @classmethod
    def from_members(cls, members: Iterable[int], window_len: int, label: str = "") -> "WindowSet":
        bits = 0
        for x in members:
            if not 1 <= x <= window_len:
                raise ValidationError(f"member {x} outside window [1, {window_len}]")
            bits |= 1 << x
        return cls(window_len, bits, label)

    @property
    def cardinality(self) -> int:
        return self.bits.bit_count()

    def __len__(self) -> int:
        return self.cardinality

    def __contains__(self, x: int) -> bool:
        return 1 <= x <= self.window_len and (self.bits >> x) & 1 == 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WindowSet):
            return NotImplemented
        return self.window_len == other.window_len and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.window_len, self.bits))

    def __repr__(self) -> str:
        return f"WindowSet(N={self.window_len}, |A|={self.cardinality}, label={self.label!r})"

    def members(self) -> list[int]:
        return [int(x) for x in np.flatnonzero(self.indicator())]

    def indicator(self) -> np.ndarray:
        """uint8 array of length window_len + 1; entry x is the membership of x."""
        if self._indicator is None:
            nbytes = self.window_len // 8 + 1
            raw = np.frombuffer(self.bits.to_bytes(nbytes, "little"), dtype=np.uint8)
            self._indicator = np.unpackbits(raw, bitorder="little")[: self.window_len + 1]
        return self._indicator

    def prefix_counts(self) -> np.ndarray:
        """int64 array where entry x is |A ∩ [1, x]|; cached, shared by scans."""
        if self._counts is None:
            self._counts = np.cumsum(self.indicator(), dtype=np.int64)
        return self._counts

    def min_element(self) -> Optional[int]:
        if self.bits == 0:
            return None
        return (self.bits & -self.bits).bit_length() - 1

    def next_member(self, after: int) -> Optional[int]:
        """Smallest member strictly greater than ``after``, or None."""
        rest = self.bits >> (after + 1)
        if rest == 0:
            return None
        return after + 1 + (rest & -rest).bit_length() - 1

    def intersection(self, other: "WindowSet") -> "WindowSet":
        n = min(self.window_len, other.window_len)
        return WindowSet(n, self.bits & other.bits)

    def restrict(self, upto: int) -> "WindowSet":
        """The same memberships on the smaller window [1, upto]."""
        if not 1 <= upto <= self.window_len:
            raise ValidationError(f"upto={upto} outside [1, {self.window_len}]")
        return WindowSet(upto, self.bits, self.label)


@dataclass(frozen=True)
class GeneratorSpec:
    """Deterministic recipe for a WindowSet.

    kind is one of bernoulli, periodic, interval_blocks, explicit, file.
    Only the parameters of the chosen kind are consulted.
    """

    kind: str
    window_len: int = 0
    seed: int = 0
    p: float = 0.0
    modulus: int = 0
    residues: tuple[int, ...] = ()
    block_len: int = 0
    gap_len: int = 0
    members: tuple[int, ...] = ()
    path: str = ""

    def validate(self) -> None:
        if self.kind != "file" and self.window_len < 1:
            raise ValidationError(f"window_len must be positive, got {self.window_len}")
        if self.kind == "bernoulli":
            if not 0.0 <= self.p <= 1.0:
                raise ValidationError(f"p={self.p} outside [0, 1]")
        elif self.kind == "periodic":
            if self.modulus < 1:
                raise ValidationError(f"modulus must be positive, got {self.modulus}")
            for r in self.residues:
                if not 0 <= r < self.modulus:
                    raise ValidationError(f"residue {r} outside [0, {self.modulus})")
        elif self.kind == "interval_blocks":
            if self.block_len < 1 or self.gap_len < 0:
                raise ValidationError(
                    f"need block_len >= 1 and gap_len >= 0, got ({self.block_len}, {self.gap_len})"
                )
        elif self.kind == "explicit":
            prev = 0
            for x in self.members:
                if x <= prev:
                    raise ValidationError("explicit members must be sorted, positive, deduplicated")
                prev = x
            if self.members and self.members[-1] > self.window_len:
                raise ValidationError(
                    f"member {self.members[-1]} outside window [1, {self.window_len}]"
                )
        elif self.kind == "file":
            if not self.path:
                raise ValidationError("file kind needs a path")
        else:
            raise ValidationError(f"unknown kind {self.kind!r}")


def generate(spec: GeneratorSpec) -> WindowSet:
    """Build the WindowSet described by ``spec``; pure for a fixed spec.

    Bernoulli membership uses a counter-based Philox stream indexed by
    position, so the bit of each x is reproducible across platforms and
    independent of iteration order.
    """
    spec.validate()
    n = spec.window_len
    if spec.kind == "bernoulli":
        rng = np.random.Generator(np.random.Philox(key=spec.seed))
        ind = np.zeros(n + 1, dtype=np.uint8)
        ind[1:] = rng.random(n) < spec.p
        return _from_indicator(ind, n, label=f"bernoulli(p={spec.p},seed={spec.seed})")
    if spec.kind == "periodic":
        xs = np.arange(n + 1)
        ind = np.isin(xs % spec.modulus, np.asarray(spec.residues, dtype=np.int64)).astype(np.uint8)
        ind[0] = 0
        return _from_indicator(ind, n, label=f"periodic({spec.modulus},{sorted(spec.residues)})")
    if spec.kind == "interval_blocks":
        period = spec.block_len + spec.gap_len
        xs = np.arange(n + 1)
        ind = ((xs - 1) % period < spec.block_len).astype(np.uint8)
        ind[0] = 0
        return _from_indicator(ind, n, label=f"interval_blocks({spec.block_len},{spec.gap_len})")
    if spec.kind == "explicit":
        return WindowSet.from_members(spec.members, n, label="explicit")
    if spec.kind == "file":
        return read_set(spec.path)
    raise AssertionError("unreachable")


def _from_indicator(ind: np.ndarray, window_len: int, label: str = "") -> WindowSet:
    bits = int.from_bytes(np.packbits(ind, bitorder="little").tobytes(), "little")
    ws = WindowSet(window_len, bits, label)
    ws._indicator = ind
    return ws


def shift(a: WindowSet, k: int) -> tuple[WindowSet, int]:
    """Translate by k and clip to [1, N]; returns (set, dropped count)."""
    if abs(k) >= a.window_len:
        raise ValidationError(f"|k|={abs(k)} must be < window_len={a.window_len}")
    if k >= 0:
        bits = a.bits << k
    else:
        bits = a.bits >> (-k)
    out = WindowSet(a.window_len, bits, a.label)
    return out, a.cardinality - out.cardinality


def intersect_translate(a: WindowSet, shifts: Sequence[int]) -> WindowSet:
    """A ∩ ⋂_{s}(A − s) over [1, N − max(shifts)], where (A − s) = {x : x + s ∈ A}."""
    for s in shifts:
        if not 0 <= s < a.window_len:
            raise ValidationError(f"shift {s} outside [0, {a.window_len})")
    if not shifts:
        return a
    bits = a.bits
    for s in shifts:
        bits &= a.bits >> s
    n = a.window_len - max(shifts)
    if n < 1:
        n = 1
        bits = 0
    return WindowSet(n, bits)


# --- set file format -------------------------------------------------------
#
# Line 1: N=<window_len>.  Then either whitespace-separated ascending positive
# integers (possibly across lines), or a single line "RLE: s1:l1 s2:l2 ..."
# encoding runs [s, s+l-1].  '#' starts a comment.  Duplicate or descending
# members are a hard error, as are members outside [1, N].


def write_set(a: WindowSet, path: str, rle: bool = False) -> None:
    with open(path, "w") as fh:
        fh.write(f"N={a.window_len}\n")
        mem = a.members()
        if rle:
            runs = []
            i = 0
            while i < len(mem):
                j = i
                while j + 1 < len(mem) and mem[j + 1] == mem[j] + 1:
                    j += 1
                runs.append(f"{mem[i]}:{j - i + 1}")
                i = j + 1
            fh.write("RLE: " + " ".join(runs) + "\n")
        else:
            for i in range(0, len(mem), 16):
                fh.write(" ".join(str(x) for x in mem[i : i + 16]) + "\n")


def read_set(path: str) -> WindowSet:
    with open(path) as fh:
        lines = fh.readlines()
    window_len = None
    bits = 0
    prev = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if window_len is None:
            if not line.startswith("N="):
                raise ValidationError(f"line {lineno}: expected header N=<window_len>")
            try:
                window_len = int(line[2:])
            except ValueError:
                raise ValidationError(f"line {lineno}: bad window length {line[2:]!r}") from None
            if window_len < 1:
                raise ValidationError(f"line {lineno}: window_len must be positive")
            continue
        if line.startswith("RLE:"):
            for tok in line[4:].split():
                try:
                    start_s, len_s = tok.split(":")
                    start, length = int(start_s), int(len_s)
                except ValueError:
                    raise ValidationError(f"line {lineno}: bad RLE token {tok!r}") from None
                if start <= prev:
                    raise ValidationError(f"line {lineno}: RLE runs must ascend without overlap")
                if start < 1 or start + length - 1 > window_len or length < 1:
                    raise ValidationError(f"line {lineno}: run {tok} outside window [1, {window_len}]")
                bits |= ((1 << length) - 1) << start
                prev = start + length - 1
            continue
        for tok in line.split():
            try:
                x = int(tok)
            except ValueError:
                raise ValidationError(f"line {lineno}: bad integer {tok!r}") from None
            if x < 1:
                raise ValidationError(f"line {lineno}: {x} is not a positive integer (0 is excluded)")
            if x > window_len:
                raise ValidationError(f"line {lineno}: member {x} outside window [1, {window_len}]")
            if x <= prev:
                raise ValidationError(f"line {lineno}: members must be strictly ascending (saw {x})")
            bits |= 1 << x
            prev = x
    if window_len is None:
        raise ValidationError("empty set file: missing N=<window_len> header")
    return WindowSet(window_len, bits)
