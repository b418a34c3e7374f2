"""The published 12-game match record used as a totals/SD fixture.

Row values are taken as given inputs; only their aggregates are asserted.
"""

PREVIOUS_ROWS = [
    (0, 24, 0), (0, 0, 8), (25, 25, 0), (18, 0, 0), (50, 50, 0),
    (100, 100, 0), (0, 150, 150), (0, 0, 9), (150, 150, 0),
    (0, 50, 50), (100, 0, 100), (75, 0, 75),
]

NEW_ROWS = [
    (0, 80, 0), (0, 0, 68), (25, 25, 0), (76.5, 0, 0), (50, 50, 0),
    (100, 100, 0), (0, 150, 150), (0, 0, 72), (150, 150, 0),
    (0, 50, 50), (100, 0, 100), (75, 0, 75),
]
