"""Reference values used by ``kdist selftest`` and the test suite."""

# (x, p, q, r, a2, Pr(K^2 < x)), computed at accuracy 1e-4
KSQUARE_TABLE = (
    (3, 5, 5, 5, 5, 0.6664),
    (1, 5, 5, 9, 10, 0.1195),
    (10, 5, 5, 9, 10, 0.9440),
    (10, 5, 5, 9, 100, 0.2142),
    (100, 9, 5, 5, 100, 0.9819),
    (80, 10, 20, 25, 1000, 0.3015),
)

# (x, q, r, a, Pr(K' < x)), computed at accuracy 1e-4
KPRIME_TABLE = (
    (-5, 5, 5, 0.5, 0.0007),
    (5, 5, 5, 5, 0.5000),
    (9, 5, 5, 5, 0.8763),
    (5, 5, 5, 10, 0.0872),
    (9, 5, 5, 10, 0.4137),
    (9, 5, 10000, 5, 0.9856),
    (-15, 5, 10, -50, 0.9918),
)

# cases where single-precision runs without round-off tracking went wrong;
# the values are double-precision results at accuracy 1e-9
KSQUARE_HARD = (
    (90, 10, 15, 20, 1000, 0.4168),
    (15, 10, 20, 1e5, 80, 0.9577),
    (9, 10, 100, 1e5, 80, 0.5259),
)
KPRIME_HARD = (
    (100, 10, 20, 80, 0.8101),
    (20, 10, 1e5, 20, 0.5574),
    (20.5, 200, 1e6, 21, 0.3730),
)

# K^2_{10,80,200}(500) at accuracy 1e-4: x -> (iterations with the mode start,
# iterations with the lowered start)
ITERATION_PARAMS = (10, 80, 200, 500)
ITERATION_COUNTS = {35: (202, 155), 30: (202, 146), 25: (202, 136), 22: (202, 128)}
ITERATION_SLACK = 5
