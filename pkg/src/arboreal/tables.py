"""Published reference data that the CLI reproduces and diffs against."""

# (k, p, tail, cycle, exceptional levels) for the integers k <= 10000 that need a custom congruence
CONGRUENCE_TABLE: list[tuple[int, int, int, int, tuple[int, ...]]] = [
    (444, 61, 0, 4, ()),
    (840, 197, 1, 84, ()),
    (1620, 37, 0, 36, ()),
    (1764, 83, 0, 60, ()),
    (3000, 13, 1, 12, ()),
    (3336, 37, 2, 6, (2,)),
    (4176, 13, 1, 12, ()),
    (4224, 19, 0, 6, ()),
    (4620, 41, 4, 4, (1, 2)),
    (4704, 43, 2, 6, ()),
    (5184, 13, 1, 12, ()),
    (5904, 31, 3, 4, (1, 2)),
    (6240, 17, 4, 4, (1,)),
    (6384, 37, 4, 2, (2, 3)),
    (6996, 71, 2, 4, (1,)),
    (7224, 17, 4, 4, (1,)),
    (7620, 31, 2, 4, (1,)),
    (7836, 13, 1, 12, ()),
    (7956, 83, 1, 60, ()),
    (8004, 31, 2, 4, (1,)),
    (8316, 19, 0, 6, ()),
    (9720, 131, 3, 12, ()),
    (9804, 29, 1, 12, ()),
]

SIGMA_BELOW_2000 = [2, 5, 29, 41, 89, 101, 109, 269, 421, 509, 521, 709, 929, 941, 1549, 1861]

# counts for the integer scan 1 <= k <= 10000
SCAN_PARTITION = {"fixedpoint_survivors": 55, "fiveseven_removed": 21, "mod11_removed": 11, "remaining": 23}
