"""Prime fields and binomial coefficients modulo p."""

from functools import lru_cache

from .errors import InvalidPrime

MAX_PRIME = 2**31


def is_prime(n):
    # deterministic Miller-Rabin; these witnesses cover n < 3.3e24
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The field F_p for an odd prime p below 2**31.

    Elements are plain Python ints in ``range(p)``; the field object only
    supplies the reductions.
    """

    __slots__ = ("p",)

    def __init__(self, p):
        p = int(p)
        if p == 2:
            raise InvalidPrime("characteristic 2 is not supported (need p > 2)")
        if not 3 <= p < MAX_PRIME or not is_prime(p):
            raise InvalidPrime(f"{p} is not an odd prime below 2^31")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __call__(self, a):
        return int(a) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_%d" % self.p)
        return pow(a, -1, self.p)

    def pow(self, a, m):
        return pow(a, m, self.p)

    def power_exponent(self, q):
        """Return e with q == p**e, or None if q is not a power of p."""
        if q < 1:
            return None
        e = 0
        while q % self.p == 0:
            q //= self.p
            e += 1
        return e if q == 1 else None


def base_digits(a, p):
    digits = []
    while a:
        a, r = divmod(a, p)
        digits.append(r)
    return digits


@lru_cache(maxsize=None)
def _small_binomials(p):
    # Pascal triangle mod p for 0 <= b <= a < p
    rows = [[1]]
    for a in range(1, p):
        prev = rows[-1]
        rows.append([1] + [(prev[i - 1] + prev[i]) % p for i in range(1, a)] + [1])
    return rows


def lucas_binomial(a, b, F):
    """C(a, b) mod p as a product of binomials of base-p digits (Lucas)."""
    p = F.p if isinstance(F, PrimeField) else int(F)
    if b < 0 or b > a:
        return 0
    table = _small_binomials(p)
    result = 1
    while b:
        a, ai = divmod(a, p)
        b, bi = divmod(b, p)
        if bi > ai:
            return 0
        result = result * table[ai][bi] % p
    return result


def lucas_multinomial(parts, F):
    """Multinomial coefficient (sum(parts); parts) mod p."""
    p = F.p if isinstance(F, PrimeField) else int(F)
    total = 0
    result = 1
    for k in parts:
        total += k
        result = result * lucas_binomial(total, k, p) % p
        if not result:
            return 0
    return result
