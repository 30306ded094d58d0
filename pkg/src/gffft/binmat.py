"""Dense GF(2) matrices and straight-line XOR programs.

A `BinaryMatrix` keeps each row as a Python int (bit j is column j).
Applying one to a vector of field elements costs only additions; the
naive cost of row i is weight(i) - 1.  An `AdditionProgram` is the
optimized form of the same product: a list of two-operand XOR steps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class DimensionError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class BinaryMatrix:
    rows_bits: tuple[int, ...]
    cols: int

    def __post_init__(self):
        if self.cols < 0:
            raise DimensionError("negative column count")
        limit = 1 << self.cols
        for r in self.rows_bits:
            if not 0 <= r < limit:
                raise DimensionError(f"row {r:#x} does not fit in {self.cols} columns")

    # -- construction ----------------------------------------------------

    @classmethod
    def from_lists(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> BinaryMatrix:
        if cols is None:
            cols = len(rows[0]) if rows else 0
        out = []
        for r in rows:
            if len(r) != cols:
                raise DimensionError("ragged rows")
            v = 0
            for j, b in enumerate(r):
                if b not in (0, 1):
                    raise ValueError(f"entry {b!r} is not binary")
                if b:
                    v |= 1 << j
            out.append(v)
        return cls(tuple(out), cols)

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> BinaryMatrix:
        """Rows written as '0101...' strings (spaces ignored)."""
        cleaned = [r.replace(" ", "") for r in rows]
        return cls.from_lists([[int(c) for c in r] for r in cleaned])

    @classmethod
    def identity(cls, n: int) -> BinaryMatrix:
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BinaryMatrix:
        return cls((0,) * rows, cols)

    @classmethod
    def from_numpy(cls, a: np.ndarray) -> BinaryMatrix:
        a = np.asarray(a, dtype=np.uint8) & 1
        _, cols = a.shape
        out = []
        for r in a:
            # little-endian bit packing then one int per row
            out.append(int.from_bytes(np.packbits(r, bitorder="little").tobytes(), "little"))
        return cls(tuple(out), cols)

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> BinaryMatrix:
        """Matrix P with (P v)[i] = v[perm[i]]."""
        return cls(tuple(1 << p for p in perm), len(perm))

    # -- views -----------------------------------------------------------

    @property
    def rows(self) -> int:
        return len(self.rows_bits)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def entry(self, i: int, j: int) -> int:
        return (self.rows_bits[i] >> j) & 1

    def row_support(self, i: int) -> list[int]:
        r = self.rows_bits[i]
        out = []
        j = 0
        while r:
            if r & 1:
                out.append(j)
            r >>= 1
            j += 1
        return out

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.cols)] for r in self.rows_bits]

    def to_numpy(self) -> np.ndarray:
        nbytes = (self.cols + 7) // 8
        buf = b"".join(r.to_bytes(nbytes, "little") for r in self.rows_bits)
        raw = np.frombuffer(buf, dtype=np.uint8).reshape(self.rows, nbytes)
        return np.unpackbits(raw, axis=1, bitorder="little")[:, : self.cols].copy()

    def row_weights(self) -> list[int]:
        return [_popcount(r) for r in self.rows_bits]

    def weight(self) -> int:
        return sum(self.row_weights())

    def is_identity(self) -> bool:
        return self.rows == self.cols and all(r == 1 << i for i, r in enumerate(self.rows_bits))

    def is_permutation(self) -> bool:
        if self.rows != self.cols:
            return False
        seen = 0
        for r in self.rows_bits:
            if _popcount(r) != 1 or seen & r:
                return False
            seen |= r
        return True

    def __str__(self):
        return "\n".join("".join(str(b) for b in row) for row in self.to_lists())

    # -- algebra ---------------------------------------------------------

    def transpose(self) -> BinaryMatrix:
        out = [0] * self.cols
        for i, r in enumerate(self.rows_bits):
            j = 0
            while r:
                if r & 1:
                    out[j] |= 1 << i
                r >>= 1
                j += 1
        return BinaryMatrix(tuple(out), self.rows)

    @property
    def T(self) -> BinaryMatrix:
        return self.transpose()

    def __matmul__(self, other: BinaryMatrix) -> BinaryMatrix:
        return mat_mul(self, other)

    def __add__(self, other: BinaryMatrix) -> BinaryMatrix:
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        return BinaryMatrix(tuple(a ^ b for a, b in zip(self.rows_bits, other.rows_bits)), self.cols)

    def select_rows(self, idx: Iterable[int]) -> BinaryMatrix:
        return BinaryMatrix(tuple(self.rows_bits[i] for i in idx), self.cols)

    def select_cols(self, idx: Sequence[int]) -> BinaryMatrix:
        out = []
        for r in self.rows_bits:
            v = 0
            for k, j in enumerate(idx):
                if (r >> j) & 1:
                    v |= 1 << k
            out.append(v)
        return BinaryMatrix(tuple(out), len(idx))

    def apply(self, v: Sequence[int]) -> tuple[list[int], int]:
        return apply(self, v)

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols,
                "data": [format(r, "x") for r in self.rows_bits]}

    @classmethod
    def from_json(cls, d: dict) -> BinaryMatrix:
        rows = tuple(int(h, 16) for h in d["data"])
        if len(rows) != d["rows"]:
            raise DimensionError("row count does not match data")
        return cls(rows, int(d["cols"]))


def mat_mul(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    """Product over GF(2)."""
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    brows = b.rows_bits
    out = []
    for r in a.rows_bits:
        acc = 0
        j = 0
        while r:
            if r & 1:
                acc ^= brows[j]
            r >>= 1
            j += 1
        out.append(acc)
    return BinaryMatrix(tuple(out), b.cols)


def invert(m: BinaryMatrix) -> BinaryMatrix:
    """Inverse over GF(2) by Gauss-Jordan elimination."""
    n = m.rows
    if n != m.cols:
        raise DimensionError("only square matrices can be inverted")
    work = list(m.rows_bits)
    inv = [1 << i for i in range(n)]
    for col in range(n):
        bit = 1 << col
        piv = next((r for r in range(col, n) if work[r] & bit), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular over GF(2)")
        work[col], work[piv] = work[piv], work[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        for r in range(n):
            if r != col and work[r] & bit:
                work[r] ^= work[col]
                inv[r] ^= inv[col]
    return BinaryMatrix(tuple(inv), n)


def rank(rows: Iterable[int]) -> int:
    """GF(2) rank of a set of bit-vectors."""
    basis: dict[int, int] = {}
    for v in rows:
        while v:
            top = v.bit_length() - 1
            if top in basis:
                v ^= basis[top]
            else:
                basis[top] = v
                break
    return len(basis)


def solve(a_cols: Sequence[int], b: int) -> int | None:
    """Find x with XOR_{k in x} a_cols[k] == b, or None.

    Columns and target are bit-vectors of equal length; the result is a
    bitmask over the columns.
    """
    basis: dict[int, tuple[int, int]] = {}
    for k, v in enumerate(a_cols):
        combo = 1 << k
        while v:
            top = v.bit_length() - 1
            if top in basis:
                bv, bc = basis[top]
                v ^= bv
                combo ^= bc
            else:
                basis[top] = (v, combo)
                break
    x = 0
    while b:
        top = b.bit_length() - 1
        if top not in basis:
            return None
        bv, bc = basis[top]
        b ^= bv
        x ^= bc
    return x


def kron(a: BinaryMatrix, b: BinaryMatrix) -> BinaryMatrix:
    """Kronecker product; row (i, k) -> i*b.rows + k, column (j, l) -> j*b.cols + l."""
    out = []
    for ra in a.rows_bits:
        for rb in b.rows_bits:
            v = 0
            j = 0
            r = ra
            while r:
                if r & 1:
                    v |= rb << (j * b.cols)
                r >>= 1
                j += 1
            out.append(v)
    return BinaryMatrix(tuple(out), a.cols * b.cols)


def block_diag(blocks: Sequence[BinaryMatrix]) -> BinaryMatrix:
    out = []
    off = 0
    for blk in blocks:
        out.extend(r << off for r in blk.rows_bits)
        off += blk.cols
    return BinaryMatrix(tuple(out), off)


def hstack(blocks: Sequence[BinaryMatrix]) -> BinaryMatrix:
    rows = blocks[0].rows
    if any(b.rows != rows for b in blocks):
        raise DimensionError("hstack needs equal row counts")
    out = [0] * rows
    off = 0
    for blk in blocks:
        for i, r in enumerate(blk.rows_bits):
            out[i] |= r << off
        off += blk.cols
    return BinaryMatrix(tuple(out), off)


def vstack(blocks: Sequence[BinaryMatrix]) -> BinaryMatrix:
    cols = blocks[0].cols
    if any(b.cols != cols for b in blocks):
        raise DimensionError("vstack needs equal column counts")
    return BinaryMatrix(tuple(r for b in blocks for r in b.rows_bits), cols)


def naive_addition_count(m: BinaryMatrix) -> int:
    return sum(max(0, w - 1) for w in m.row_weights())


def apply(m: BinaryMatrix, v: Sequence[int]) -> tuple[list[int], int]:
    """Multiply by a vector of field elements (ints); returns (result, additions)."""
    if m.cols != len(v):
        raise DimensionError(f"matrix has {m.cols} columns, vector has {len(v)} entries")
    out = []
    adds = 0
    for r in m.rows_bits:
        acc = 0
        w = 0
        j = 0
        while r:
            if r & 1:
                acc ^= v[j]
                w += 1
            r >>= 1
            j += 1
        out.append(acc)
        adds += max(0, w - 1)
    return out, adds


# -- straight-line programs -----------------------------------------------


class ProgramError(ValueError):
    pass


@dataclass(frozen=True)
class AdditionProgram:
    """Straight-line XOR program.

    Slots 0..n_inputs-1 hold the inputs; step k writes slot n_inputs+k.
    An output of None is the constant zero (an all-zero matrix row).
    """

    n_inputs: int
    steps: tuple[tuple[int, int, int], ...]
    outputs: tuple[int | None, ...]

    def __post_init__(self):
        nxt = self.n_inputs
        for tgt, a, b in self.steps:
            if tgt != nxt:
                raise ProgramError(f"step target {tgt} out of sequence (expected {nxt})")
            if not (0 <= a < tgt and 0 <= b < tgt):
                raise ProgramError(f"step {tgt} references an undefined slot ({a}, {b})")
            nxt += 1
        for o in self.outputs:
            if o is not None and not 0 <= o < nxt:
                raise ProgramError(f"output references undefined slot {o}")

    @property
    def additions(self) -> int:
        return len(self.steps)

    @property
    def n_slots(self) -> int:
        return self.n_inputs + len(self.steps)

    def run(self, v: Sequence[int]) -> list[int]:
        if len(v) != self.n_inputs:
            raise DimensionError(f"program takes {self.n_inputs} inputs, got {len(v)}")
        vals = list(v)
        push = vals.append
        for _, a, b in self.steps:
            push(vals[a] ^ vals[b])
        return [0 if o is None else vals[o] for o in self.outputs]

    def to_matrix(self) -> BinaryMatrix:
        """The matrix this program computes (evaluation on unit vectors)."""
        slots = [1 << i for i in range(self.n_inputs)]
        for _, a, b in self.steps:
            slots.append(slots[a] ^ slots[b])
        return BinaryMatrix(tuple(0 if o is None else slots[o] for o in self.outputs), self.n_inputs)

    def computes(self, m: BinaryMatrix) -> bool:
        return self.to_matrix() == m

    def to_json(self) -> dict:
        return {"n_inputs": self.n_inputs,
                "steps": [[a, b] for _, a, b in self.steps],
                "outputs": [-1 if o is None else o for o in self.outputs]}

    @classmethod
    def from_json(cls, d: dict) -> AdditionProgram:
        n = int(d["n_inputs"])
        steps = tuple((n + k, int(a), int(b)) for k, (a, b) in enumerate(d["steps"]))
        outs = tuple(None if o < 0 else int(o) for o in d["outputs"])
        return cls(n, steps, outs)


def naive_program(m: BinaryMatrix) -> AdditionProgram:
    """Row-by-row chain of additions; exactly naive_addition_count(m) steps."""
    steps: list[tuple[int, int, int]] = []
    outputs: list[int | None] = []
    nxt = m.cols
    for i in range(m.rows):
        sup = m.row_support(i)
        if not sup:
            outputs.append(None)
            continue
        cur = sup[0]
        for j in sup[1:]:
            steps.append((nxt, cur, j))
            cur = nxt
            nxt += 1
        outputs.append(cur)
    return AdditionProgram(m.cols, tuple(steps), tuple(outputs))


def run_program(prog: AdditionProgram, v: Sequence[int]) -> list[int]:
    return prog.run(v)


def concat_block_programs(progs: Sequence[AdditionProgram]) -> AdditionProgram:
    """Program for block_diag of the programs' matrices."""
    total_in = sum(p.n_inputs for p in progs)
    steps: list[tuple[int, int, int]] = []
    outputs: list[int | None] = []
    in_off = 0
    nxt = total_in
    for p in progs:
        remap = {}
        for s in range(p.n_inputs):
            remap[s] = in_off + s
        for tgt, a, b in p.steps:
            remap[tgt] = nxt
            steps.append((nxt, remap[a], remap[b]))
            nxt += 1
        outputs.extend(None if o is None else remap[o] for o in p.outputs)
        in_off += p.n_inputs
    return AdditionProgram(total_in, tuple(steps), tuple(outputs))
