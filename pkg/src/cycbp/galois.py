"""GF(2^m) field arithmetic and polynomials over GF(2).

Polynomials over GF(2) are stored as integer bit masks, bit i holding the
coefficient of x^i (constant term in the lowest bit).  Field elements of
GF(2^m) are integers in [0, 2^m) whose bits are the coordinates in the
polynomial basis {1, alpha, ..., alpha^(m-1)}.
"""

from __future__ import annotations

from functools import reduce

# Default primitive polynomial per extension degree m (the conventional
# table, e.g. Matlab's primpoly defaults).  Bit mask, constant term first.
PRIMITIVE_POLYS = {
    2: 0b111,            # x^2 + x + 1
    3: 0b1011,           # x^3 + x + 1
    4: 0b10011,          # x^4 + x + 1
    5: 0b100101,         # x^5 + x^2 + 1
    6: 0b1000011,        # x^6 + x + 1
    7: 0b10001001,       # x^7 + x^3 + 1
    8: 0b100011101,      # x^8 + x^4 + x^3 + x^2 + 1
    9: 0b1000010001,     # x^9 + x^4 + 1
    10: 0b10000001001,   # x^10 + x^3 + 1
}


class BinaryPoly:
    """Immutable polynomial over GF(2), backed by an int bit mask."""

    __slots__ = ("bits",)

    def __init__(self, bits: int):
        if bits < 0:
            raise ValueError("polynomial bit mask must be non-negative")
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("BinaryPoly is immutable")

    @classmethod
    def from_coeffs(cls, coeffs) -> "BinaryPoly":
        """Build from a coefficient sequence, lowest degree first."""
        bits = 0
        for i, c in enumerate(coeffs):
            if c not in (0, 1):
                raise ValueError("coefficients must be 0 or 1")
            bits |= c << i
        return cls(bits)

    @classmethod
    def x_pow(cls, d: int) -> "BinaryPoly":
        """The monomial x^d."""
        return cls(1 << d)

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return self.bits.bit_length() - 1

    def coeffs(self) -> list[int]:
        """Coefficient list, lowest degree first ([0] for the zero poly)."""
        if self.bits == 0:
            return [0]
        return [(self.bits >> i) & 1 for i in range(self.degree + 1)]

    def is_zero(self) -> bool:
        return self.bits == 0

    def __add__(self, other: "BinaryPoly") -> "BinaryPoly":
        return BinaryPoly(self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other: "BinaryPoly") -> "BinaryPoly":
        a, b, acc = self.bits, other.bits, 0
        while b:
            if b & 1:
                acc ^= a
            a <<= 1
            b >>= 1
        return BinaryPoly(acc)

    def __mod__(self, other: "BinaryPoly") -> "BinaryPoly":
        return poly_divide(self, other)[1]

    def __floordiv__(self, other: "BinaryPoly") -> "BinaryPoly":
        return poly_divide(self, other)[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, BinaryPoly) and self.bits == other.bits

    def __hash__(self) -> int:
        return hash(("BinaryPoly", self.bits))

    def __repr__(self) -> str:
        if self.bits == 0:
            return "BinaryPoly(0)"
        terms = []
        for i in reversed(range(self.degree + 1)):
            if (self.bits >> i) & 1:
                terms.append("1" if i == 0 else ("x" if i == 1 else f"x^{i}"))
        return "BinaryPoly(" + " + ".join(terms) + ")"


ONE = BinaryPoly(1)


def poly_divide(num: BinaryPoly, den: BinaryPoly) -> tuple[BinaryPoly, BinaryPoly]:
    """Long division over GF(2)[x]: num = q*den + r with deg(r) < deg(den)."""
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    r = num.bits
    d = den.bits
    dd = den.degree
    q = 0
    while r.bit_length() - 1 >= dd:
        shift = r.bit_length() - 1 - dd
        r ^= d << shift
        q |= 1 << shift
    return BinaryPoly(q), BinaryPoly(r)


def poly_gcd(a: BinaryPoly, b: BinaryPoly) -> BinaryPoly:
    """Greatest common divisor over GF(2)[x] (monic by construction)."""
    while not b.is_zero():
        a, b = b, a % b
    return a


def poly_lcm(ps) -> BinaryPoly:
    """Least common multiple of a nonempty list of nonzero polynomials."""
    ps = list(ps)
    if not ps:
        raise ValueError("lcm of an empty list")
    if any(p.is_zero() for p in ps):
        raise ValueError("lcm of the zero polynomial")

    def lcm2(a: BinaryPoly, b: BinaryPoly) -> BinaryPoly:
        return (a * b) // poly_gcd(a, b)

    return reduce(lcm2, ps)


class GaloisField:
    """The finite field GF(2^m) with log/antilog tables over a primitive alpha.

    ``antilog_table[i]`` holds alpha^i for i in [0, 2^m-2]; ``log_table[a]``
    inverts it for nonzero a.  The defining primitive polynomial is fixed
    per m by PRIMITIVE_POLYS, so alpha (the element ``0b10``) generates the
    whole multiplicative group.  Instances are immutable after construction.
    """

    def __init__(self, m: int):
        if not 2 <= m <= 10:
            raise ValueError(f"extension degree m={m} outside supported range [2, 10]")
        self.m = m
        self.order = 1 << m
        self.n = self.order - 1  # multiplicative group size = cyclic code length
        self.primitive_poly = BinaryPoly(PRIMITIVE_POLYS[m])

        mod = PRIMITIVE_POLYS[m]
        antilog = [0] * self.n
        log = [0] * self.order
        v = 1
        for i in range(self.n):
            antilog[i] = v
            log[v] = i
            v <<= 1
            if v & self.order:
                v ^= mod
        if v != 1:
            raise ValueError(f"polynomial {mod:#b} is not primitive for m={m}")
        self.antilog_table = tuple(antilog)
        self.log_table = tuple(log)

    def log(self, a: int) -> int:
        """Discrete log base alpha of a nonzero element."""
        if not 0 < a < self.order:
            raise ValueError(f"element {a} has no discrete log in GF(2^{self.m})")
        return self.log_table[a]

    def antilog(self, i: int) -> int:
        """alpha^i (exponent taken mod 2^m - 1)."""
        return self.antilog_table[i % self.n]

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.antilog_table[(self.log_table[a] + self.log_table[b]) % self.n]

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def cyclotomic_coset(self, j: int) -> list[int]:
        """The 2-cyclotomic coset of j mod 2^m - 1, starting at j."""
        coset = []
        c = j % self.n
        while c not in coset:
            coset.append(c)
            c = (2 * c) % self.n
        return coset

    def __repr__(self) -> str:
        return f"GaloisField(m={self.m}, primitive_poly={self.primitive_poly!r})"


def field_new(m: int) -> GaloisField:
    """Construct GF(2^m) with the default primitive polynomial for m."""
    return GaloisField(m)


def minimal_polynomial(field: GaloisField, j: int) -> BinaryPoly:
    """Minimal polynomial of alpha^j over GF(2).

    Computed as the product of (x - alpha^i) over the cyclotomic coset of j;
    the result always collapses to coefficients in {0, 1}.
    """
    if not 1 <= j <= field.n - 1:
        raise ValueError(f"exponent j={j} outside [1, {field.n - 1}]")
    # Coefficients over GF(2^m), lowest degree first; multiply in one root
    # alpha^c at a time: p(x) <- p(x) * (x + alpha^c).
    coeffs = [1]
    for c in field.cyclotomic_coset(j):
        root = field.antilog(c)
        nxt = [0] * (len(coeffs) + 1)
        for t, pc in enumerate(coeffs):
            nxt[t] ^= field.mul(root, pc)
            nxt[t + 1] ^= pc
        coeffs = nxt
    if any(c not in (0, 1) for c in coeffs):
        raise AssertionError("minimal polynomial did not collapse to GF(2)")
    return BinaryPoly.from_coeffs(coeffs)
