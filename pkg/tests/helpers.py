import numpy as np

from nugs.sampling import scheme_from_frequencies


def random_dense_scheme(rng, K, delta):
    """Random frequencies whose gaps (wrap included) never exceed ``delta``."""
    while True:
        w = [-K + rng.uniform(0, delta / 2)]
        while True:
            nxt = w[-1] + rng.uniform(0.3 * delta, delta)
            if nxt > K:
                break
            w.append(nxt)
        if 2 * K - (w[-1] - w[0]) <= delta:
            return scheme_from_frequencies(np.array(w), K)


ACCEPTANCE_LINES = []


def record(criterion, ok, detail):
    """Store and print one PASS/FAIL line for an acceptance criterion."""
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'} | {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok
