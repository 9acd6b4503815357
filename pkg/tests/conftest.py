from fractions import Fraction

from hypothesis import HealthCheck, settings

# derandomize pins every property test to a fixed example sequence
settings.register_profile(
    "repro",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repro")


def sylvester_resultant(f, g):
    """Res(f, g) as the determinant of the Sylvester matrix (coefficients constant first)."""
    f = [Fraction(c) for c in f]
    g = [Fraction(c) for c in g]
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    if size == 0:
        return Fraction(1)
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + f[::-1] + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + g[::-1] + [Fraction(0)] * (size - n - 1 - i))
    return det(rows)


def det(rows):
    a = [list(r) for r in rows]
    n = len(a)
    sign = 1
    d = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        d *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                t = a[r][c] / a[c][c]
                a[r] = [x - t * y for x, y in zip(a[r], a[c])]
    return sign * d
