"""Exact coefficient fields: prime fields F_p and small extensions F_{p^e}.

Prime-field elements are plain ints reduced into [0, p); extension elements
are tuples of ints of length e (coefficients of the residue class modulo a
fixed irreducible polynomial).  All arithmetic goes through a field object so
the polynomial layer can stay agnostic about the element representation.
"""

from __future__ import annotations


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """The field F_p with elements represented as ints in [0, p)."""

    def __init__(self, p: int = 101):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        self.p = p
        self.zero = 0
        self.one = 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        # extended gcd, kept explicit so it works for any prime
        r0, r1 = self.p, a % self.p
        s0, s1 = 0, 1
        while r1:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            s0, s1 = s1, s0 - q * s1
        return s0 % self.p

    def from_int(self, n: int):
        return n % self.p

    def elements(self):
        return range(self.p)

    def nonzero_elements(self):
        return range(1, self.p)

    def to_str(self, a) -> str:
        return str(a)

    @property
    def size(self) -> int:
        return self.p

    def key(self) -> tuple:
        return ("Fp", self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"PrimeField({self.p})"


def _poly_mod_mul(a, b, modulus, p):
    """Multiply coefficient tuples mod (modulus, p); modulus is monic."""
    e = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce degree down using x^e = -(lower part of modulus)
    for i in range(len(prod) - 1, e - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(e):
                prod[i - e + j] = (prod[i - e + j] - c * modulus[j]) % p
    return tuple(prod[:e])


def _find_irreducible(p: int, e: int):
    """Monic irreducible of degree e over F_p, coefficients low-to-high.

    For e in {2, 3} irreducibility is equivalent to having no roots.
    """
    if e == 1:
        return (0, 1)
    if e > 3:
        raise ValueError("extension degree > 3 not supported")
    for tail in range(p**e):
        coeffs = []
        t = tail
        for _ in range(e):
            coeffs.append(t % p)
            t //= p
        coeffs.append(1)
        if all(sum(c * pow(x, i, p) for i, c in enumerate(coeffs)) % p for x in range(p)):
            return tuple(coeffs)
    raise RuntimeError("no irreducible polynomial found")  # unreachable


class ExtField:
    """F_{p^e} for e <= 3, used only for sampling points over extensions."""

    def __init__(self, p: int, e: int):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if not 1 <= e <= 3:
            raise ValueError("extension degree must be 1, 2 or 3")
        self.p = p
        self.e = e
        self.modulus = _find_irreducible(p, e)
        self.zero = tuple([0] * e)
        self.one = tuple([1] + [0] * (e - 1))

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def mul(self, a, b):
        return _poly_mod_mul(a, b, self.modulus, self.p)

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def inv(self, a):
        if a == self.zero:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.p**self.e - 2)

    def pow(self, a, n: int):
        r = self.one
        b = a
        while n:
            if n & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            n >>= 1
        return r

    def from_int(self, n: int):
        return tuple([n % self.p] + [0] * (self.e - 1))

    def embed(self, a_int: int):
        """Image of a prime-field element under F_p -> F_{p^e}."""
        return self.from_int(a_int)

    def elements(self):
        for code in range(self.p**self.e):
            coeffs = []
            t = code
            for _ in range(self.e):
                coeffs.append(t % self.p)
                t //= self.p
            yield tuple(coeffs)

    def nonzero_elements(self):
        for a in self.elements():
            if a != self.zero:
                yield a

    def to_str(self, a) -> str:
        return "(" + ",".join(str(c) for c in a) + ")"

    @property
    def size(self) -> int:
        return self.p**self.e

    def key(self) -> tuple:
        return ("Fpe", self.p, self.e, self.modulus)

    def __eq__(self, other):
        return isinstance(other, ExtField) and other.key() == self.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"ExtField({self.p}, {self.e})"
