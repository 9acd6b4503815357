"""Automorphisms of the complete binary rooted tree and the centralizer of an involution.

Leaves of T_n are the integers 0 .. 2^n - 1 read as n-bit strings, most
significant bit first, so the ancestor of leaf x at level j is x >> (n - j).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import PreconditionError, ResourceError

ENUM_CAP = 4
#: beyond this fix_frac is only available as rigorous bounds (the exact denominator is 2^(2^m - 1))
EXACT_FIX_CAP = 18


@dataclass(frozen=True)
class TreeAut:
    n: int
    perm: tuple[int, ...]

    def __post_init__(self):
        if self.n < 0:
            raise PreconditionError("tree level must be nonnegative")
        if sorted(self.perm) != list(range(2**self.n)):
            raise PreconditionError("not a permutation of the leaves")
        for j in range(1, self.n):
            shift = self.n - j
            image: dict[int, int] = {}
            for x, y in enumerate(self.perm):
                a, b = x >> shift, y >> shift
                if image.setdefault(a, b) != b:
                    raise PreconditionError(f"permutation does not respect level {j}")

    @classmethod
    def identity(cls, n: int) -> "TreeAut":
        return cls(n, tuple(range(2**n)))

    def __call__(self, x: int) -> int:
        return self.perm[x]

    def __mul__(self, other: "TreeAut") -> "TreeAut":
        """Composition: (self * other)(x) = self(other(x))."""
        return TreeAut(self.n, tuple(self.perm[i] for i in other.perm))

    def restrict(self, j: int) -> "TreeAut":
        """Action on level j."""
        if not 0 <= j <= self.n:
            raise PreconditionError("level out of range")
        shift = self.n - j
        img = [0] * 2**j
        for x, y in enumerate(self.perm):
            img[x >> shift] = y >> shift
        return TreeAut(j, tuple(img))

    def fixes_leaf(self) -> bool:
        return any(x == y for x, y in enumerate(self.perm))

    def is_identity(self) -> bool:
        return all(x == y for x, y in enumerate(self.perm))


def iota(n: int) -> TreeAut:
    """Swap the two level-1 subtrees identically at every depth."""
    if n < 1:
        raise PreconditionError("iota needs n >= 1")
    top = 1 << (n - 1)
    return TreeAut(n, tuple(x ^ top for x in range(2**n)))


def _check_enum(n: int) -> None:
    if n < 1:
        raise PreconditionError("n must be at least 1")
    if n > ENUM_CAP:
        raise ResourceError(f"enumeration is capped at n = {ENUM_CAP} (order 2^(2^n - 1))")


@lru_cache(maxsize=None)
def _aut_perms(n: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((0,),)
    half = 2 ** (n - 1)
    sub = _aut_perms(n - 1)
    out = []
    for swap in (0, 1):
        for a in sub:
            for b in sub:
                perm = [0] * (2 * half)
                for r in range(half):
                    perm[r] = (swap * half) + a[r]
                    perm[half + r] = ((1 - swap) * half) + b[r]
                out.append(tuple(perm))
    return tuple(out)


def enumerate_aut(n: int) -> list[TreeAut]:
    """All of Aut(T_n), built recursively as (Aut T_{n-1})^2 extended by the top swap."""
    _check_enum(n)
    return [TreeAut(n, p) for p in _aut_perms(n)]


def enumerate_centralizer(n: int, inv: TreeAut | None = None) -> list[TreeAut]:
    inv = iota(n) if inv is None else inv
    if inv.n != n:
        raise PreconditionError("involution lives on a different level")
    return [g for g in enumerate_aut(n) if g * inv == inv * g]


def kernel(group: list[TreeAut], j: int) -> list[TreeAut]:
    """Elements acting trivially on level j."""
    return [g for g in group if g.restrict(j).is_identity()]


def restriction_to_subtree(g: TreeAut) -> TreeAut:
    """For g trivial on level 1: its action on the subtree below the leftmost vertex."""
    half = 2 ** (g.n - 1)
    if any(g(x) >= half for x in range(half)):
        raise PreconditionError("element moves the left subtree")
    return TreeAut(g.n - 1, g.perm[:half])


@dataclass(frozen=True)
class GroupOrderReport:
    n: int
    order_aut: int
    order_C: int
    kernel_order: int
    hausdorff: Fraction

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "order_aut": str(self.order_aut),
            "order_C": str(self.order_C),
            "kernel_order": str(self.kernel_order),
            "hausdorff": str(self.hausdorff),
        }


def group_orders(n: int) -> GroupOrderReport:
    """Orders of Aut(T_n), C_n and ker(C_n -> C_{n-1}); hausdorff is log#C_n / log#Aut(T_n)."""
    if n < 1:
        raise PreconditionError("n must be at least 1")
    ker = 2 ** (2 ** (n - 2)) if n >= 2 else 2
    return GroupOrderReport(n, 2 ** (2**n - 1), 2 ** (2 ** (n - 1)), ker, Fraction(2 ** (n - 1), 2**n - 1))


# -- fixed-point proportions -------------------------------------------------
#
# c_m = f^m(0) with f(z) = (z^2 + 1)/2 is the proportion of Aut(T_m) fixing no
# leaf.  An element of C_n moving level 1 fixes nothing, and the kernel of
# C_n -> C_1 is Aut(T_{n-1}) by restriction, so the proportion of C_n fixing a
# leaf is (1 - c_{n-1})/2.


def c_exact(m: int) -> Fraction:
    if m < 0:
        raise PreconditionError("m must be nonnegative")
    if m > EXACT_FIX_CAP:
        raise ResourceError(f"exact c_m is capped at m = {EXACT_FIX_CAP}; use c_bounds")
    z = Fraction(0)
    for _ in range(m):
        z = (z * z + 1) / 2
    return z


def c_bounds(m: int, bits: int = 256) -> tuple[Fraction, Fraction]:
    """Rigorous lo <= c_m <= hi using integers scaled by 2^bits.

    f is increasing on [0, 1], so rounding the lower end down and the upper
    end up at every step keeps the true value enclosed.
    """
    if m < 0:
        raise PreconditionError("m must be nonnegative")
    one = 1 << bits
    lo = hi = 0
    for _ in range(m):
        # (z^2 + 1)/2 at scale: (Z^2 / one + one) / 2
        lo = (lo * lo + one * one) // (2 * one)
        hi = -((-(hi * hi + one * one)) // (2 * one))
    return Fraction(lo, one), Fraction(min(hi, one), one)


def fix_frac(m: int) -> Fraction:
    """Proportion of Aut(T_m) fixing at least one leaf, exactly."""
    return 1 - c_exact(m)


def fixprop(n: int) -> Fraction:
    """Proportion of C_n fixing at least one leaf."""
    if n < 1:
        raise PreconditionError("n must be at least 1")
    return fix_frac(n - 1) / 2


def fixprop_bounds(n: int, bits: int = 256) -> tuple[Fraction, Fraction]:
    if n < 1:
        raise PreconditionError("n must be at least 1")
    lo, hi = c_bounds(n - 1, bits)
    return (1 - hi) / 2, (1 - lo) / 2


def centralizer_fixprop(n: int) -> Fraction:
    group = enumerate_centralizer(n)
    return Fraction(sum(g.fixes_leaf() for g in group), len(group))


def aut_fix_frac(m: int) -> Fraction:
    group = enumerate_aut(m)
    return Fraction(sum(g.fixes_leaf() for g in group), len(group))


def density_rows(n_max: int, bits: int = 256) -> list[tuple[int, Fraction, Fraction]]:
    """(n, lower, upper) bounds on fixprop(n) for n = 1..n_max; exact while lower == upper."""
    one = 1 << bits
    rows = []
    z = Fraction(0)
    lo = hi = 0
    for n in range(1, n_max + 1):
        # here z = c_{n-1} exactly (until the cap), lo/hi enclose it
        if n - 1 <= EXACT_FIX_CAP:
            rows.append((n, (1 - z) / 2, (1 - z) / 2))
            z = (z * z + 1) / 2
        else:
            rows.append((n, (1 - Fraction(hi, one)) / 2, (1 - Fraction(lo, one)) / 2))
        lo = (lo * lo + one * one) // (2 * one)
        hi = min(-((-(hi * hi + one * one)) // (2 * one)), one)
    return rows
