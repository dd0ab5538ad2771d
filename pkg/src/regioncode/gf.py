"""GF(q) arithmetic and the length-2 kernel algebra used by linear codes.

Supported orders are primes up to 2**16 and binary extensions GF(2**m) with
m <= 16.  Extension fields multiply through log/antilog tables built from a
fixed primitive polynomial; prime fields reduce modulo q directly.

A kernel is a pair (c1, c2) of field elements describing the linear map
(X1, X2) -> c1*X1 + c2*X2.  The distinguished kernels (1, 0) and (0, 1)
carry the two messages unchanged.
"""

from __future__ import annotations

from math import isqrt
from typing import Iterable, Optional, Sequence

from .errors import InvalidSinkCountError, UnsupportedOrderError

Kernel = tuple[int, int]

ALPHA1: Kernel = (1, 0)
ALPHA2: Kernel = (0, 1)
ZERO_KERNEL: Kernel = (0, 0)

MAX_ORDER = 1 << 16

# x is a primitive element modulo each of these polynomials (bit i = coeff of x^i).
_PRIMITIVE_POLY = {
    1: 0x3, 2: 0x7, 3: 0xB, 4: 0x13, 5: 0x25, 6: 0x5B, 7: 0x83, 8: 0x11D,
    9: 0x211, 10: 0x46F, 11: 0x805, 12: 0x10EB, 13: 0x201B, 14: 0x40A9,
    15: 0x8035, 16: 0x1002D,
}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def is_supported_order(q: int) -> bool:
    """True for primes up to 2**16 and powers of two 2**m, m <= 16."""
    if not isinstance(q, int) or q < 2 or q > MAX_ORDER:
        return False
    if q & (q - 1) == 0:
        return True
    return _is_prime(q)


def smallest_supported_order(minimum: int) -> int:
    """Smallest supported field order >= minimum."""
    q = max(2, minimum)
    while not is_supported_order(q):
        q += 1
        if q > MAX_ORDER:
            raise UnsupportedOrderError(
                f"no supported field order >= {minimum}")
    return q


class FieldSpec:
    """Arithmetic in GF(q).  Construct via :func:`make_field`.

    Instances are immutable after construction and safe to share between
    threads.
    """

    def __init__(self, q: int):
        if not is_supported_order(q):
            raise UnsupportedOrderError(
                f"unsupported field order {q!r}: need a prime <= 2**16 "
                f"or 2**m with m <= 16")
        self.q = q
        if q & (q - 1) == 0 and q > 2:
            self.characteristic = 2
            self.degree = q.bit_length() - 1
            self.reduction_polynomial = _PRIMITIVE_POLY[self.degree]
            self._exp, self._log = self._build_tables()
        else:
            # GF(2) behaves identically under both views; treat it as prime.
            self.characteristic = q
            self.degree = 1
            self.reduction_polynomial = None
            self._exp = self._log = None

    def _build_tables(self) -> tuple[list[int], list[int]]:
        q, poly = self.q, self.reduction_polynomial
        exp = [0] * (q - 1)
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & q:
                x ^= poly
        if x != 1:
            raise AssertionError(f"polynomial {poly:#x} is not primitive")
        return exp, log

    @property
    def is_prime_field(self) -> bool:
        return self._exp is None

    def elements(self) -> range:
        return range(self.q)

    def nonzero_elements(self) -> range:
        return range(1, self.q)

    def add(self, a: int, b: int) -> int:
        if self.is_prime_field:
            return (a + b) % self.q
        return a ^ b

    def sub(self, a: int, b: int) -> int:
        if self.is_prime_field:
            return (a - b) % self.q
        return a ^ b

    def neg(self, a: int) -> int:
        if self.is_prime_field:
            return (-a) % self.q
        return a

    def mul(self, a: int, b: int) -> int:
        if self.is_prime_field:
            return (a * b) % self.q
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        if self.is_prime_field:
            return pow(a, self.q - 2, self.q)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    # -- kernel (length-2 vector) helpers -------------------------------

    def kernel_scale(self, c: int, k: Kernel) -> Kernel:
        return (self.mul(c, k[0]), self.mul(c, k[1]))

    def kernel_add(self, a: Kernel, b: Kernel) -> Kernel:
        return (self.add(a[0], b[0]), self.add(a[1], b[1]))

    def kernel_lincomb(self, terms: Iterable[tuple[int, Kernel]]) -> Kernel:
        out = ZERO_KERNEL
        for c, k in terms:
            out = self.kernel_add(out, self.kernel_scale(c, k))
        return out

    def kernel_det(self, a: Kernel, b: Kernel) -> int:
        return self.sub(self.mul(a[0], b[1]), self.mul(a[1], b[0]))

    def kernels_independent(self, a: Kernel, b: Kernel) -> bool:
        return self.kernel_det(a, b) != 0

    def __repr__(self) -> str:
        return f"FieldSpec(q={self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldSpec) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("FieldSpec", self.q))


def make_field(q: int) -> FieldSpec:
    """Build GF(q).  Raises UnsupportedOrderError for other orders."""
    return FieldSpec(q)


def projective_points(field: FieldSpec) -> list[Kernel]:
    """The q+1 pairwise linearly independent kernels of GF(q)^2.

    Ordered as (1,0), (0,1), then (1,c) for c = 1..q-1, so the two
    message-carrying kernels come first.
    """
    pts: list[Kernel] = [ALPHA1, ALPHA2]
    pts.extend((1, c) for c in field.nonzero_elements())
    return pts


def canonical_kernel(field: FieldSpec, k: Kernel) -> Kernel:
    """Scale k so its first nonzero component is 1 (zero stays zero)."""
    if k[0] != 0:
        return (1, field.div(k[1], k[0]))
    if k[1] != 0:
        return (0, 1)
    return ZERO_KERNEL


def in_span(target: Kernel, generators: Sequence[Kernel],
            field: FieldSpec) -> Optional[tuple[int, ...]]:
    """Coefficients expressing target over generators, or None.

    Deterministic choice: all-zero target takes all-zero coefficients;
    otherwise the first single generator that scales to the target wins,
    then the first index pair (lexicographic) spanning the plane.
    """
    n = len(generators)
    if target == ZERO_KERNEL:
        return (0,) * n
    for i, g in enumerate(generators):
        c = _scaling_coefficient(target, g, field)
        if c is not None:
            coeffs = [0] * n
            coeffs[i] = c
            return tuple(coeffs)
    for i in range(n):
        for j in range(i + 1, n):
            gi, gj = generators[i], generators[j]
            det = field.kernel_det(gi, gj)
            if det == 0:
                continue
            a = field.div(field.sub(field.mul(target[0], gj[1]),
                                    field.mul(target[1], gj[0])), det)
            b = field.div(field.sub(field.mul(gi[0], target[1]),
                                    field.mul(gi[1], target[0])), det)
            coeffs = [0] * n
            coeffs[i] = a
            coeffs[j] = b
            return tuple(coeffs)
    return None


def _scaling_coefficient(target: Kernel, g: Kernel,
                         field: FieldSpec) -> Optional[int]:
    if g == ZERO_KERNEL:
        return None
    ref = g[0] if g[0] != 0 else g[1]
    tgt = target[0] if g[0] != 0 else target[1]
    c = field.div(tgt, ref)
    return c if field.kernel_scale(c, g) == target else None


def field_size_bound(n_sinks: int) -> int:
    """Field order that always suffices for a linear solution with N sinks.

    Equals max(2, floor(sqrt(2N - 7/4) + 1/2)), computed in exact integer
    arithmetic: the largest k with k*(k-1) <= 2N - 2.
    """
    if n_sinks < 2:
        raise InvalidSinkCountError(f"need at least 2 sinks, got {n_sinks}")
    k = (1 + isqrt(8 * n_sinks - 7)) // 2
    return max(2, k)


def format_kernel(k: Kernel) -> str:
    return f"({k[0]},{k[1]})"


def parse_kernel(text: str) -> Kernel:
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise ValueError(f"bad kernel literal {text!r}")
    parts = body[1:-1].split(",")
    if len(parts) != 2:
        raise ValueError(f"bad kernel literal {text!r}")
    return (int(parts[0]), int(parts[1]))
