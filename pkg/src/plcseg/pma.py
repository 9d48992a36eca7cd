"""Aho-Corasick pattern matching automaton on a compacted double-array.

States are slots of the ``base``/``check`` arrays.  The child of state ``s``
on symbol code ``c`` lives in slot ``base[s] ^ c`` and is valid iff
``check[base[s] ^ c] == s``, so a transition costs two array reads no matter
how large the alphabet is.  Symbols are mapped to dense codes ``1..K`` in
descending order of frequency among the registered patterns.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, replace
from operator import add
from typing import Hashable, NamedTuple, Sequence

ROOT = 0
_FREE = -1
_ROOT_CHECK = -2


class DuplicatePatternError(ValueError):
    pass


class EmptyPatternError(ValueError):
    pass


class MatchEvent(NamedTuple):
    pattern_id: int
    start: int
    end: int


class Payload(NamedTuple):
    """Score array added at ``k + start_offset`` when a match ends at ``k``."""

    weights: tuple[int, ...]
    start_offset: int


@dataclass(frozen=True)
class PatternAutomaton:
    patterns: tuple[Sequence[Hashable], ...]
    code_table: dict
    base: list[int]
    check: list[int]
    fail: list[int]
    # per slot: (pattern_id, length) for every registered suffix, longest first
    outputs: list[tuple[tuple[int, int], ...]]
    depth: list[int]
    payload: list[Payload | None] | None = None

    @property
    def num_states(self) -> int:
        return sum(1 for c in self.check if c != _FREE)

    @property
    def size(self) -> int:
        return len(self.base)

    def goto(self, state: int, code: int) -> int:
        """Child of ``state`` on ``code``, or -1."""
        t = self.base[state] ^ code
        if t < len(self.check) and self.check[t] == state:
            return t
        return -1

    def step(self, state: int, symbol: Hashable) -> int:
        """Aho-Corasick transition including failure links."""
        code = self.code_table.get(symbol, 0)
        if not code:
            return ROOT
        while True:
            t = self.goto(state, code)
            if t >= 0:
                return t
            if state == ROOT:
                return ROOT
            state = self.fail[state]

    def states(self) -> list[int]:
        return [s for s, c in enumerate(self.check) if c != _FREE]

    def spell(self, state: int) -> tuple:
        """Symbol sequence on the path from the root to ``state``."""
        inverse = {c: sym for sym, c in self.code_table.items()}
        out = []
        while state != ROOT:
            parent = self.check[state]
            out.append(inverse[self.base[parent] ^ state])
            state = parent
        return tuple(reversed(out))

    def with_payload(self, payload: list[Payload | None]) -> "PatternAutomaton":
        if len(payload) != self.size:
            raise ValueError("payload must have one entry per slot")
        return replace(self, payload=payload)


class _FreeList:
    """Doubly linked list of free slots, kept in increasing slot order."""

    def __init__(self, reserved: int) -> None:
        # slots below ``reserved`` are never free
        self.next: list[int] = [-1] * reserved
        self.prev: list[int] = [-1] * reserved
        self.head = -1
        self.tail = -1

    def extend(self, new: int) -> None:
        for i in range(len(self.next), new):
            self.next.append(-1)
            self.prev.append(self.tail)
            if self.tail >= 0:
                self.next[self.tail] = i
            else:
                self.head = i
            self.tail = i

    def remove(self, i: int) -> None:
        p, n = self.prev[i], self.next[i]
        if p >= 0:
            self.next[p] = n
        else:
            self.head = n
        if n >= 0:
            self.prev[n] = p
        else:
            self.tail = p

    def __iter__(self):
        i = self.head
        while i >= 0:
            nxt = self.next[i]
            yield i
            i = nxt


def _make_code_table(patterns: Sequence[Sequence[Hashable]]) -> dict:
    freq: Counter = Counter()
    for p in patterns:
        freq.update(p)
    ordered = sorted(freq, key=lambda sym: (-freq[sym], repr(sym)))
    return {sym: code for code, sym in enumerate(ordered, 1)}


def build_automaton(patterns: Sequence[Sequence[Hashable]]) -> PatternAutomaton:
    """Build the automaton; pattern ids follow sorted pattern order."""
    plist = [tuple(p) if not isinstance(p, str) else p for p in patterns]
    for p in plist:
        if len(p) == 0:
            raise EmptyPatternError("patterns must be non-empty")
    if len(set(plist)) != len(plist):
        dup = next(p for p, n in Counter(plist).items() if n > 1)
        raise DuplicatePatternError(f"duplicate pattern {dup!r}")
    plist.sort()
    code_table = _make_code_table(plist)

    # plain trie first: node -> {code: node}
    children: list[dict[int, int]] = [{}]
    terminal: list[int] = [-1]
    for pid, p in enumerate(plist):
        node = 0
        for sym in p:
            c = code_table[sym]
            nxt = children[node].get(c)
            if nxt is None:
                nxt = len(children)
                children[node][c] = nxt
                children.append({})
                terminal.append(-1)
            node = nxt
        terminal[node] = pid

    base = [0]
    check = [_ROOT_CHECK]
    free = _FreeList(reserved=1)

    def grow(to: int) -> None:
        old = len(base)
        if to <= old:
            return
        base.extend([0] * (to - old))
        check.extend([_FREE] * (to - old))
        free.extend(to)

    slot_of = [0] * len(children)
    depth_of_node = [0] * len(children)
    queue = deque([0])
    while queue:
        node = queue.popleft()
        kids = children[node]
        if not kids:
            continue
        codes = sorted(kids)
        first = codes[0]
        b = -1
        for f in free:
            cand = f ^ first
            if all(cand ^ c >= len(check) or check[cand ^ c] == _FREE for c in codes[1:]):
                b = cand
                break
        if b < 0:
            # fresh block past the end: b ^ c == b + c for every code
            block = 1 << codes[-1].bit_length()
            b = -(-len(check) // block) * block
        grow(max(b ^ c for c in codes) + 1)
        s = slot_of[node]
        base[s] = b
        for c in codes:
            t = b ^ c
            check[t] = s
            free.remove(t)
            child = kids[c]
            slot_of[child] = t
            depth_of_node[child] = depth_of_node[node] + 1
            queue.append(child)

    size = len(base)
    fail = [ROOT] * size
    depth = [0] * size
    outputs: list[tuple[tuple[int, int], ...]] = [()] * size
    # BFS for failure links over slots
    queue = deque()
    for c, child in children[0].items():
        t = slot_of[child]
        fail[t] = ROOT
        queue.append((child, t))
    for node in range(len(children)):
        depth[slot_of[node]] = depth_of_node[node]
    while queue:
        node, s = queue.popleft()
        pid = terminal[node]
        own = ((pid, len(plist[pid])),) if pid >= 0 else ()
        outputs[s] = own + outputs[fail[s]]
        for c, child in children[node].items():
            t = slot_of[child]
            f = fail[s]
            while True:
                g = base[f] ^ c
                if g < size and check[g] == f:
                    fail[t] = g
                    break
                if f == ROOT:
                    fail[t] = ROOT
                    break
                f = fail[f]
            queue.append((child, t))

    return PatternAutomaton(
        patterns=tuple(plist),
        code_table=code_table,
        base=base,
        check=check,
        fail=fail,
        outputs=outputs,
        depth=depth,
    )


def iter_states(pma: PatternAutomaton, text: Sequence[Hashable]):
    """Yield ``(k, state)`` after consuming ``text[k-1]`` for ``k = 1..N``."""
    base, check, fail, codes = pma.base, pma.check, pma.fail, pma.code_table
    size = len(check)
    s = ROOT
    for k, sym in enumerate(text, 1):
        c = codes.get(sym, 0)
        if c:
            while True:
                t = base[s] ^ c
                if t < size and check[t] == s:
                    s = t
                    break
                if s == ROOT:
                    break
                s = fail[s]
        else:
            s = ROOT
        yield k, s


def find_overlapping(pma: PatternAutomaton, text: Sequence[Hashable]) -> list[MatchEvent]:
    """All occurrences, ordered by end position then decreasing length."""
    events = []
    outputs = pma.outputs
    for k, s in iter_states(pma, text):
        for pid, length in outputs[s]:
            events.append(MatchEvent(pid, k - length, k))
    return events


def add_clipped(y: list[int], n: int, p: int, weights: Sequence[int]) -> None:
    """``y[p + i] += weights[i]`` restricted to boundary indices ``1..n-1``."""
    hi = p + len(weights)
    if p >= 1 and hi <= n:
        y[p:hi] = map(add, y[p:hi], weights)
        return
    lo = p if p >= 1 else 1
    if hi > n:
        hi = n
    if lo < hi:
        y[lo:hi] = map(add, y[lo:hi], weights[lo - p : hi - p])


def run_with_payload(pma: PatternAutomaton, text: Sequence[Hashable], y: list[int]) -> int:
    """Add each visited state's payload into ``y``; returns the number of additions.

    ``y`` is indexed by boundary and has ``len(text) + 1`` slots; only
    ``y[1 .. N-1]`` is written.
    """
    payload = pma.payload
    if payload is None:
        raise ValueError("automaton has no payload attached")
    base, check, fail, codes = pma.base, pma.check, pma.fail, pma.code_table
    size = len(check)
    n = len(text)
    added = 0
    s = ROOT
    for k, sym in enumerate(text, 1):
        c = codes.get(sym, 0)
        if c:
            while True:
                t = base[s] ^ c
                if t < size and check[t] == s:
                    s = t
                    break
                if s == ROOT:
                    break
                s = fail[s]
        else:
            s = ROOT
        pl = payload[s]
        if pl is not None:
            weights, offset = pl
            p = k + offset
            hi = p + len(weights)
            if p >= 1 and hi <= n:
                y[p:hi] = map(add, y[p:hi], weights)
            else:
                add_clipped(y, n, p, weights)
            added += 1
    return added
