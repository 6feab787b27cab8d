"""Finite fields F_{p^k} with a deterministic modulus.

Elements are stored as integer codes: the code of ``c_0 + c_1 x + ... + c_{k-1} x^{k-1}``
is ``sum(c_i * p**i)``.  Small fields use exponential/logarithm and Zech tables, larger
ones multiply coefficient vectors packed into big integers, then reduce modulo the modulus.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .errors import ContractViolation

# fields with at most this many elements get log/Zech tables
TABLE_LIMIT = 10_000


def _factor_small(n: int) -> list[int]:
    primes = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            primes.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        primes.append(n)
    return primes


# ---------------------------------------------------------------------------
# polynomials over F_p, little-endian coefficient lists with no trailing zeros


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p) if p > 2 else 1
    while len(a) - 1 >= dm:
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim([c % p for c in out])


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(f: list[int], p: int) -> bool:
    """Ben-Or's test: f has no factor of degree i <= deg(f)/2, checked via gcd(f, x^(p^i) - x)."""
    k = len(f) - 1
    if k <= 0:
        return False
    if k == 1:
        return True
    if f[0] == 0:
        return False
    x = [0, 1]
    h = x
    for _ in range(1, k // 2 + 1):
        h = _ppowmod(h, p, f, p)
        g = _pgcd(f, _psub(h, x, p), p)
        if len(g) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Monic irreducible of degree k whose vector (c_0, ..., c_{k-1}) is lexicographically least."""
    if k == 1:
        return (0, 1)
    # a zero constant term means x divides f, so start the search at c_0 = 1
    for c0 in range(1, p):
        for rest in itertools.product(range(p), repeat=k - 1):
            f = [c0, *rest, 1]
            if is_irreducible(f, p):
                return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# ---------------------------------------------------------------------------


class FiniteField:
    """The field F_p[x]/(modulus) with ``modulus = least_irreducible(p, k)``."""

    def __init__(self, p: int, k: int):
        if p < 2 or _factor_small(p) != [p]:
            raise ContractViolation(f"{p} is not prime")
        if k < 1:
            raise ContractViolation("extension degree must be positive")
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = least_irreducible(p, k)
        self._mod_list = list(self.modulus)
        self._setup_packing()
        self._exp: list[int] | None = None
        self._log: list[int] | None = None
        self._zech: list[int] | None = None
        self._roots: dict[int, FFElem] = {}
        self.width = len(format(p - 1, "x"))
        self.zero = FFElem(self, 0)
        self.one = FFElem(self, 1)
        if self.q <= TABLE_LIMIT:
            self._build_tables()

    def __repr__(self) -> str:
        return f"FiniteField({self.p}, {self.k})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self) -> int:
        return hash(("FiniteField", self.p, self.k))

    # -- code <-> coefficient vectors ---------------------------------------

    def digits(self, code: int) -> list[int]:
        out = []
        p = self.p
        for _ in range(self.k):
            code, r = divmod(code, p)
            out.append(r)
        return out

    def from_digits(self, coeffs) -> int:
        code = 0
        for c in reversed(list(coeffs)):
            code = code * self.p + (c % self.p)
        return code

    def _poly(self, code: int) -> list[int]:
        return _trim(self.digits(code))

    # -- tables -------------------------------------------------------------

    def _build_tables(self) -> None:
        q = self.q
        order = q - 1
        primes = _factor_small(order)
        gen = None
        for cand in range(2 if q > 2 else 1, q):
            ok = True
            for r in primes:
                if self._slow_pow(cand, order // r) == 1:
                    ok = False
                    break
            if ok:
                gen = cand
                break
        if gen is None:  # q == 2
            gen = 1
        exp = [0] * order
        log = [0] * q
        g_poly = self._poly(gen)
        cur = [1]
        for i in range(order):
            code = self.from_digits(cur) if cur else 0
            exp[i] = code
            log[code] = i
            cur = _pmod(_pmul(cur, g_poly, self.p), self._mod_list, self.p)
        # zech[n] = log(1 + g^n), or -1 when 1 + g^n = 0
        zech = [0] * order
        p = self.p
        for n in range(order):
            x = exp[n]
            c0 = x % p
            y = x - c0 + (c0 + 1) % p
            zech[n] = -1 if y == 0 else log[y]
        self._exp, self._log, self._zech = exp, log, zech
        self.generator_code = gen

    def _setup_packing(self) -> None:
        # Kronecker substitution: coefficient products are summed inside fixed-size byte slots
        bound = self.k * (self.p - 1) ** 2
        self._slot = max(1, (bound.bit_length() + 7) // 8)
        self._tail = [(j, c) for j, c in enumerate(self.modulus[:-1]) if c]

    def _pack(self, digits: list[int]) -> int:
        s = self._slot
        return int.from_bytes(b"".join(c.to_bytes(s, "little") for c in digits), "little")

    def _mul_digits(self, a: list[int], b: list[int]) -> list[int]:
        p, k, s = self.p, self.k, self._slot
        prod = self._pack(a) * self._pack(b)
        raw = prod.to_bytes((2 * k) * s, "little")
        r = [int.from_bytes(raw[i * s:(i + 1) * s], "little") for i in range(2 * k - 1)]
        tail = self._tail
        for i in range(2 * k - 2, k - 1, -1):
            c = r[i] % p
            if c:
                base = i - k
                # x^k = -(lower terms of the modulus)
                for j, mj in tail:
                    r[base + j] -= c * mj
        return [c % p for c in r[:k]]

    def _slow_mul(self, a: int, b: int) -> int:
        return self.from_digits(self._mul_digits(self.digits(a), self.digits(b)))

    def _slow_pow(self, a: int, e: int) -> int:
        result = None
        base = self.digits(a)
        while e:
            if e & 1:
                result = base if result is None else self._mul_digits(result, base)
            e >>= 1
            if e:
                base = self._mul_digits(base, base)
        return 1 if result is None else self.from_digits(result)

    # -- arithmetic on codes --------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if a == 0:
            return b
        if b == 0:
            return a
        if self.p == 2:
            return a ^ b
        if self._zech is not None:
            la, lb = self._log[a], self._log[b]
            n = (lb - la) % (self.q - 1)
            z = self._zech[n]
            if z < 0:
                return 0
            return self._exp[(la + z) % (self.q - 1)]
        da, db = self.digits(a), self.digits(b)
        return self.from_digits(x + y for x, y in zip(da, db))

    def neg(self, a: int) -> int:
        if a == 0 or self.p == 2:
            return a
        return self.from_digits(-c for c in self.digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._slow_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self._exp is not None:
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self._slow_pow(a, self.q - 2)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a = self.inv(a)
            e = -e
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self._exp is not None:
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        return self._slow_pow(a, e % (self.q - 1) or (self.q - 1))

    # -- element constructors -----------------------------------------------

    def __call__(self, value) -> FFElem:
        """Coerce an integer (read in the prime field) or an element of this field."""
        if isinstance(value, FFElem):
            if value.field != self:
                raise ContractViolation("element belongs to a different field")
            return value
        return FFElem(self, value % self.p)

    def from_code(self, code: int) -> FFElem:
        if not 0 <= code < self.q:
            raise ContractViolation(f"code {code} out of range for F_{self.q}")
        return FFElem(self, code)

    def gen(self) -> FFElem:
        """The class of x in F_p[x]/(modulus)."""
        return FFElem(self, self.p if self.k > 1 else (-self.modulus[0]) % self.p)

    def elements(self):
        return (FFElem(self, c) for c in range(self.q))

    def from_hex(self, text: str) -> FFElem:
        w = self.width
        if len(text) != w * self.k:
            raise ValueError(f"ff-hex string {text!r} must have length {w * self.k}")
        coeffs = [int(text[i * w:(i + 1) * w], 16) for i in range(self.k)]
        if any(c >= self.p for c in coeffs):
            raise ValueError(f"ff-hex digit out of range in {text!r}")
        return FFElem(self, self.from_digits(coeffs))

    def root_of_unity(self, n: int) -> FFElem:
        """Deterministic element of exact multiplicative order n (least code that works)."""
        if (self.q - 1) % n:
            raise ContractViolation(f"F_{self.q} has no element of order {n}")
        if n == 1:
            return self.one
        if n in self._roots:
            return self._roots[n]
        primes = _factor_small(n)
        cofactor = (self.q - 1) // n
        for cand in range(2, self.q):
            z = self.pow(cand, cofactor)
            if all(self.pow(z, n // r) != 1 for r in primes):
                self._roots[n] = FFElem(self, z)
                return self._roots[n]
        raise AssertionError("unreachable")  # pragma: no cover

    def sqrt(self, a: FFElem) -> FFElem | None:
        """A square root of a (odd characteristic, Tonelli-Shanks), or None."""
        if self.p == 2:
            return FFElem(self, self.pow(a.v, self.q // 2))
        if a.v == 0:
            return self.zero
        half = (self.q - 1) // 2
        if self.pow(a.v, half) != 1:
            return None
        s, t = 0, self.q - 1
        while t % 2 == 0:
            s += 1
            t //= 2
        z = next(c for c in range(2, self.q) if self.pow(c, half) != 1)
        m, c = s, self.pow(z, t)
        x, b = self.pow(a.v, (t + 1) // 2), self.pow(a.v, t)
        while b != 1:
            i, b2 = 0, b
            while b2 != 1:
                b2 = self.mul(b2, b2)
                i += 1
            f = self.pow(c, 1 << (m - i - 1))
            x, c = self.mul(x, f), self.mul(f, f)
            b, m = self.mul(b, c), i
        return FFElem(self, x)

    def trace_to_prime(self, a: FFElem) -> int:
        t = a
        acc = a
        for _ in range(self.k - 1):
            t = t.frob()
            acc = acc + t
        return acc.v

    def quadratic_roots(self, b: FFElem, c: FFElem) -> list[FFElem]:
        """Roots of X^2 + bX + c in this field, sorted by coefficient vector."""
        if self.p != 2:
            two_inv = self(2).inverse()
            disc = b * b - self(4) * c
            r = self.sqrt(disc)
            if r is None:
                return []
            roots = {(-b + r) * two_inv, (-b - r) * two_inv}
        elif b.is_zero():
            roots = {self.sqrt(c)}
        else:
            # X = bY turns the equation into Y^2 + Y = c/b^2
            target = c / (b * b)
            if self.trace_to_prime(target) != 0:
                return []
            theta = next(self.from_code(v) for v in range(1, self.q)
                         if self.trace_to_prime(self.from_code(v)) == 1)
            y = self.zero
            # standard Artin-Schreier solution in terms of an element of trace 1
            for i in range(self.k - 1):
                inner = self.zero
                for j in range(i + 1, self.k):
                    inner = inner + theta ** (2**j)
                y = y + inner * target ** (2**i)
            roots = {b * y, b * (y + self.one)}
        return sorted(roots, key=lambda e: e.coeffs())


@lru_cache(maxsize=None)
def GF(p: int, k: int) -> FiniteField:
    return FiniteField(p, k)


class FFElem:
    """Immutable element of a :class:`FiniteField`."""

    __slots__ = ("field", "v")

    def __init__(self, field: FiniteField, v: int):
        self.field = field
        self.v = v

    def _coerce(self, other) -> int:
        if isinstance(other, FFElem):
            if other.field is not self.field and other.field != self.field:
                raise ContractViolation("mixing elements of different fields")
            return other.v
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FFElem(self.field, self.field.add(self.v, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FFElem(self.field, self.field.sub(self.v, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FFElem(self.field, self.field.sub(o, self.v))

    def __neg__(self):
        return FFElem(self.field, self.field.neg(self.v))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FFElem(self.field, self.field.mul(self.v, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FFElem(self.field, self.field.mul(self.v, self.field.inv(o)))

    def __pow__(self, e: int):
        return FFElem(self.field, self.field.pow(self.v, e))

    def inverse(self) -> FFElem:
        return FFElem(self.field, self.field.inv(self.v))

    def frob(self) -> FFElem:
        return FFElem(self.field, self.field.pow(self.v, self.field.p))

    def is_zero(self) -> bool:
        return self.v == 0

    def __bool__(self) -> bool:
        return self.v != 0

    def __eq__(self, other) -> bool:
        if isinstance(other, FFElem):
            return self.v == other.v and self.field == other.field
        if isinstance(other, int):
            return self.v == other % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.k, self.v))

    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.field.digits(self.v))

    def order(self, multiple: int | None = None) -> int:
        """Multiplicative order; ``multiple`` is a known multiple of it, saving a factorisation of q - 1."""
        if self.v == 0:
            raise ContractViolation("zero has no multiplicative order")
        n = self.field.q - 1 if multiple is None else multiple
        if self.field.pow(self.v, n) != 1:
            raise ContractViolation(f"{n} is not a multiple of the order")
        for r in _factor_small(n):
            while n % r == 0 and self.field.pow(self.v, n // r) == 1:
                n //= r
        return n

    def hex(self) -> str:
        w = self.field.width
        return "".join(format(c, "x").rjust(w, "0") for c in self.coeffs())

    def __repr__(self) -> str:
        return f"FFElem({self.field.p}^{self.field.k}, {self.hex()})"
