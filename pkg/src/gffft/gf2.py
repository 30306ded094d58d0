"""Arithmetic in GF(2^l) for 2 <= l <= 13.

Elements are held as plain ints in polynomial basis (bit i is the
coefficient of x^i).  `FieldSpec` carries the modulus and does the
arithmetic on ints; `FieldElement` is a thin typed wrapper for scalar
work where mixing fields should be caught.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

MIN_DEGREE = 2
MAX_DEGREE = 13

# One primitive polynomial per degree (low-weight entries from the usual tables).
DEFAULT_MODULI = {
    2: 0b111,                 # x^2+x+1
    3: 0b1011,                # x^3+x+1
    4: 0b10011,               # x^4+x+1
    5: 0b100101,              # x^5+x^2+1
    6: 0b1101101,             # x^6+x^5+x^3+x^2+1
    7: 0b11111101,            # x^7+x^6+x^5+x^4+x^3+x^2+1
    8: 0b110101001,           # x^8+x^7+x^5+x^3+1
    9: 0x211,                 # x^9+x^4+1
    10: 0x409,                # x^10+x^3+1
    11: 0x805,                # x^11+x^2+1
    12: 0x1053,               # x^12+x^6+x^4+x+1
    13: 0x201B,               # x^13+x^4+x^3+x+1
}


class FieldError(ValueError):
    pass


def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit-polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, m: int) -> int:
    """Remainder of bit-polynomial a modulo m."""
    dm = m.bit_length() - 1
    while a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class FieldSpec:
    l: int
    modulus: int

    def __post_init__(self):
        if not MIN_DEGREE <= self.l <= MAX_DEGREE:
            raise FieldError(f"extension degree {self.l} outside {MIN_DEGREE}..{MAX_DEGREE}")
        if self.modulus.bit_length() - 1 != self.l:
            raise FieldError(f"modulus {self.modulus:#x} does not have degree {self.l}")
        if self._order_by_clmul(0b10) != self.size - 1:
            raise FieldError(f"modulus {self.modulus:#x} is not primitive")

    @classmethod
    def default(cls, l: int) -> FieldSpec:
        if l not in DEFAULT_MODULI:
            raise FieldError(f"no default modulus for l={l}")
        return cls(l, DEFAULT_MODULI[l])

    @property
    def size(self) -> int:
        return 1 << self.l

    @property
    def mask(self) -> int:
        return self.size - 1

    # -- reference arithmetic (no tables) --------------------------------

    def mul_clmul(self, a: int, b: int) -> int:
        return poly_mod(clmul(a, b), self.modulus)

    def _order_by_clmul(self, a: int) -> int:
        q = (1 << self.l) - 1
        if a == 0:
            raise FieldError("zero has no multiplicative order")
        n = q
        for p in _prime_factors(q):
            while n % p == 0 and self._pow_clmul(a, n // p) == 1:
                n //= p
        return n

    def _pow_clmul(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self.mul_clmul(r, a)
            a = self.mul_clmul(a, a)
            e >>= 1
        return r

    # -- table-driven fast path ------------------------------------------

    @cached_property
    def _tables(self) -> tuple[list[int], list[int]]:
        q = self.size - 1
        exp = [0] * (2 * q)
        log = [0] * self.size
        x = 1
        for i in range(q):
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & self.size:
                x ^= self.modulus
        exp[q:] = exp[:q]
        return exp, log

    @property
    def exp_table(self) -> list[int]:
        return self._tables[0]

    @property
    def log_table(self) -> list[int]:
        return self._tables[1]

    def check(self, a: int) -> int:
        if not 0 <= a < self.size:
            raise FieldError(f"{a:#x} is not an element of GF(2^{self.l})")
        return a

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        exp, log = self._tables
        return exp[log[a] + log[b]]

    def pow(self, a: int, e: int) -> int:
        q = self.size - 1
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 0
        exp, log = self._tables
        return exp[(log[a] * e) % q]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, self.size - 2)

    def square(self, a: int) -> int:
        return self.mul(a, a)

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise FieldError("zero has no multiplicative order")
        q = self.size - 1
        return q // math.gcd(q, self.log_table[a])

    @property
    def generator(self) -> int:
        """The fixed primitive element x."""
        return 0b10

    def element_of_order(self, n: int) -> int:
        q = self.size - 1
        if n < 1 or q % n:
            raise FieldError(f"{n} does not divide 2^{self.l}-1 = {q}")
        return self.pow(self.generator, q // n)

    def is_in_subfield(self, a: int, m: int) -> bool:
        if m < 1 or self.l % m:
            raise FieldError(f"{m} does not divide {self.l}")
        b = a
        for _ in range(m):
            b = self.mul(b, b)
        return b == a

    def subfield_elements(self, m: int) -> list[int]:
        """All elements of GF(2^m) inside this field, sorted."""
        if m < 1 or self.l % m:
            raise FieldError(f"{m} does not divide {self.l}")
        q = self.size - 1
        step = q // ((1 << m) - 1)
        return sorted([0] + [self.exp_table[k * step] for k in range((1 << m) - 1)])

    def element(self, bits: int) -> FieldElement:
        return FieldElement(self, self.check(bits))

    def to_json(self) -> dict:
        return {"l": self.l, "modulus": format(self.modulus, "x")}

    @classmethod
    def from_json(cls, d: dict) -> FieldSpec:
        return cls(int(d["l"]), int(d["modulus"], 16))


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    bits: int

    def __post_init__(self):
        self.spec.check(self.bits)

    def _same(self, other: FieldElement) -> FieldElement:
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.spec != self.spec:
            raise FieldError("elements belong to different fields")
        return other

    def __add__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.spec, self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.spec, self.spec.mul(self.bits, other.bits))

    def __pow__(self, e: int):
        return FieldElement(self.spec, self.spec.pow(self.bits, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.spec, self.spec.inv(self.bits))

    def __bool__(self):
        return self.bits != 0

    def __int__(self):
        return self.bits

    def hex(self) -> str:
        return format(self.bits, "x")

    def __repr__(self):
        return f"GF(2^{self.spec.l})({self.bits:#x})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def order(a: FieldElement) -> int:
    return a.spec.order(a.bits)


def element_of_order(spec: FieldSpec, n: int) -> FieldElement:
    return FieldElement(spec, spec.element_of_order(n))


def is_in_subfield(a: FieldElement, m: int) -> bool:
    return a.spec.is_in_subfield(a.bits, m)


def frobenius_fixed_subfield(spec: FieldSpec, m: int) -> set[FieldElement]:
    """Elements fixed by a -> a^(2^m), i.e. the copy of GF(2^m) inside the field."""
    if m < 1 or spec.l % m:
        raise FieldError(f"{m} does not divide {spec.l}")
    return {FieldElement(spec, a) for a in range(spec.size) if spec.is_in_subfield(a, m)}
