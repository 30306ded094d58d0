"""Common-subexpression elimination for binary matrix-vector products.

Greedy pair extraction: count, for every pair of slots, how many rows
contain both; materialize the most frequent pair as a new slot, substitute
it everywhere, repeat.  Pair counts live in a numpy Gram matrix that is
updated incrementally, so a step costs O(slots * touched rows) rather than
a full recount.  Ties are broken at random (seeded) and several restarts
are kept to the best, which is how the results vary run to run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .binmat import AdditionProgram, BinaryMatrix, naive_addition_count, naive_program

MODES = ("greedy-single", "greedy-multi")
TIE_BREAKS = ("random", "first")


@dataclass(frozen=True)
class CseConfig:
    restarts: int = 8
    seed: int = 0
    mode: str = "greedy-single"
    tie_break: str = "random"
    max_steps: int | None = None

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"unknown CSE mode {self.mode!r}; expected one of {MODES}")
        if self.tie_break not in TIE_BREAKS:
            raise ValueError(f"unknown tie-break rule {self.tie_break!r}")


class _PairState:
    """Row/column incidence plus pair counts, grown on demand.

    Columns are recycled: once a slot appears in no row its column is free
    for the next extracted pair, so memory follows the live slots rather
    than every slot ever created.  ``ids`` maps columns to program slots.
    """

    def __init__(self, rows: list[int], n: int):
        self.n_rows = len(rows)
        cap = max(16, 2 * n)
        self.M = np.zeros((self.n_rows, cap), dtype=np.uint8)
        for r, bits in enumerate(rows):
            j = 0
            while bits:
                if bits & 1:
                    self.M[r, j] = 1
                bits >>= 1
                j += 1
        self.s = n
        self.ids = list(range(n))
        self.free: list[int] = []
        self.next_id = n
        Mi = self.M[:, :n].astype(np.int32)
        G = np.zeros((cap, cap), dtype=np.int32)
        G[:n, :n] = Mi.T @ Mi
        np.fill_diagonal(G, 0)
        self.G = G
        self.rowmax = G.max(axis=1)

    def _grow(self):
        cap = self.M.shape[1]
        new = cap * 2
        M = np.zeros((self.n_rows, new), dtype=np.uint8)
        M[:, :cap] = self.M
        G = np.zeros((new, new), dtype=np.int32)
        G[:cap, :cap] = self.G
        rm = np.zeros(new, dtype=np.int32)
        rm[:cap] = self.rowmax
        self.M, self.G, self.rowmax = M, G, rm

    def best(self) -> int:
        return int(self.rowmax[: self.s].max()) if self.s else 0

    def pick(self, count: int, rng: np.random.Generator | None) -> tuple[int, int]:
        """One pair with the given count: a tied row, then a tied partner."""
        xs = np.flatnonzero(self.rowmax[: self.s] == count)
        x = int(xs[rng.integers(len(xs))]) if rng is not None else int(xs[0])
        ys = np.flatnonzero(self.G[x, : self.s] == count)
        y = int(ys[rng.integers(len(ys))]) if rng is not None else int(ys[0])
        return (x, y) if x < y else (y, x)

    def pick_disjoint(self, count: int, rng: np.random.Generator | None) -> list[tuple[int, int]]:
        """A maximal-by-greed set of slot-disjoint pairs with the given count."""
        xs = np.flatnonzero(self.rowmax[: self.s] == count)
        if rng is not None:
            xs = xs[rng.permutation(len(xs))]
        used = np.zeros(self.s, dtype=bool)
        out = []
        for x in xs.tolist():
            if used[x]:
                continue
            ys = np.flatnonzero((self.G[x, : self.s] == count) & ~used)
            if len(ys) == 0:
                continue
            y = int(ys[rng.integers(len(ys))]) if rng is not None else int(ys[0])
            used[x] = used[y] = True
            out.append((x, y) if x < y else (y, x))
        return out

    def extract(self, a: int, b: int) -> int:
        """Replace columns a, b by a new one wherever both occur; returns
        the program slot id of the new column."""
        if self.free:
            c = self.free.pop()
        else:
            if self.s == self.M.shape[1]:
                self._grow()
            c = self.s
            self.s += 1
            self.ids.append(-1)
        self.ids[c] = self.next_id
        self.next_id += 1
        R = np.flatnonzero(self.M[:, a] & self.M[:, b])
        self.M[R, a] = 0
        self.M[R, b] = 0
        s = self.s
        V = self.M[R, :s].sum(axis=0, dtype=np.int32)
        self.M[R, c] = 1
        G = self.G
        T = np.flatnonzero(V)
        rm = self.rowmax[T]
        # rows whose maximum may have sat on a or b need a rescan
        stale = T[(G[T, a] == rm) | (G[T, b] == rm)]
        G[a, :s] -= V
        G[:s, a] -= V
        G[b, :s] -= V
        G[:s, b] -= V
        G[a, b] -= len(R)
        G[b, a] -= len(R)
        G[c, :s] = V
        G[:s, c] = V
        self.rowmax[T] = np.maximum(rm, V[T])
        rescan = np.concatenate([stale, [a, b, c]])
        self.rowmax[rescan] = G[rescan, :s].max(axis=1)
        for x in (a, b):
            if not self.M[:, x].any():
                self.free.append(x)
        return self.ids[c]

    def row_slots(self) -> list[list[int]]:
        return [sorted(self.ids[j] for j in np.flatnonzero(self.M[r, : self.s]))
                for r in range(self.n_rows)]


def _run(m: BinaryMatrix, rng: np.random.Generator | None, multi: bool,
         max_steps: int | None) -> AdditionProgram:
    n = m.cols
    uniq: dict[int, int] = {}
    work = []
    for bits in m.rows_bits:
        if bits & (bits - 1) and bits not in uniq:
            uniq[bits] = len(work)
            work.append(bits)
    steps: list[tuple[int, int, int]] = []
    if work:
        st = _PairState(work, n)
        while max_steps is None or len(steps) < max_steps:
            best = st.best()
            if best < 2:
                break
            chosen = st.pick_disjoint(best, rng) if multi else [st.pick(best, rng)]
            for a, b in chosen:
                if max_steps is not None and len(steps) >= max_steps:
                    break
                ida, idb = st.ids[a], st.ids[b]
                c = st.extract(a, b)
                steps.append((c, ida, idb))
        final = st.row_slots()
    else:
        final = []
    nxt = n + len(steps)
    row_out: list[int] = []
    for slots in final:
        cur = slots[0]
        for j in slots[1:]:
            steps.append((nxt, cur, j))
            cur = nxt
            nxt += 1
        row_out.append(cur)
    outputs: list[int | None] = []
    for bits in m.rows_bits:
        if bits == 0:
            outputs.append(None)
        elif bits & (bits - 1) == 0:
            outputs.append(bits.bit_length() - 1)
        else:
            outputs.append(row_out[uniq[bits]])
    return AdditionProgram(n, tuple(steps), tuple(outputs))


def _optimize(m: BinaryMatrix, cfg: CseConfig, multi: bool) -> AdditionProgram:
    best = naive_program(m)
    for r in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, r]) if cfg.tie_break == "random" else None
        prog = _run(m, rng, multi, cfg.max_steps)
        if prog.additions < best.additions:
            best = prog
        if rng is None:
            break  # deterministic tie-break: restarts would repeat
    return best


def optimize(m: BinaryMatrix, cfg: CseConfig = CseConfig()) -> AdditionProgram:
    """Best single-pattern greedy program over cfg.restarts seeded runs."""
    return _optimize(m, cfg, multi=cfg.mode == "greedy-multi")


def optimize_multi(m: BinaryMatrix, cfg: CseConfig = CseConfig()) -> AdditionProgram:
    """Like optimize, but each round extracts a disjoint set of top pairs."""
    return _optimize(m, cfg, multi=True)


def best_of(m: BinaryMatrix, cfgs: Sequence[CseConfig]) -> AdditionProgram:
    if not cfgs:
        raise ValueError("best_of needs at least one config")
    best = None
    for cfg in cfgs:
        prog = optimize(m, cfg)
        if best is None or prog.additions < best.additions:
            best = prog
    return best


def savings(m: BinaryMatrix, prog: AdditionProgram) -> tuple[int, int]:
    """(naive count, program count)."""
    return naive_addition_count(m), prog.additions
