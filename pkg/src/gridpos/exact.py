"""Small exact-arithmetic helpers: integer roots and rational formatting."""

from __future__ import annotations

from fractions import Fraction


def kth_root_floor(x: int, k: int) -> int:
    """Largest t >= 0 with t^k <= x, by Newton iteration with a verification
    multiply-back (floating-point rounding of fractional powers is not
    trusted anywhere)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if x < 0:
        raise ValueError("x must be >= 0")
    if x in (0, 1) or k == 1:
        return x
    t = 1 << (-(-x.bit_length() // k))  # upper-ish start: 2^ceil(bits/k)
    while True:
        nxt = ((k - 1) * t + x // t ** (k - 1)) // k
        if nxt >= t:
            break
        t = nxt
    while t**k > x:
        t -= 1
    while (t + 1) ** k <= x:
        t += 1
    return t


def power_floor(n: int, num: int, den: int) -> int:
    """floor(n^(num/den)) for n >= 1 and num, den >= 1, exactly."""
    if n < 1 or num < 0 or den < 1:
        raise ValueError("need n >= 1, num >= 0, den >= 1")
    return kth_root_floor(n**num, den)


def format_fraction(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))
