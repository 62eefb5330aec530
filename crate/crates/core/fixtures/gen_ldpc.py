"""Regenerates the LDPC fixtures (no 4-cycles, full rank).

Usage: python3 gen_ldpc.py
"""
import random


def build(weights, m, seed):
    """Column-by-column construction: each column takes the least-loaded rows
    that do not close a 4-cycle with an earlier column."""
    cap = -(-sum(weights) // m)
    rng = random.Random(seed)
    while True:
        degree = [0] * m
        pairs = set()
        cols = []
        for wc in weights:
            chosen = []
            for _ in range(wc):
                cands = [
                    r for r in range(m)
                    if degree[r] < cap and r not in chosen
                    and all((min(r, x), max(r, x)) not in pairs for x in chosen)
                ]
                if not cands:
                    break
                low = min(degree[r] for r in cands)
                chosen.append(rng.choice([r for r in cands if degree[r] == low]))
            if len(chosen) != wc:
                break
            for r in chosen:
                degree[r] += 1
            for i in range(wc):
                for j in range(i + 1, wc):
                    pairs.add(tuple(sorted((chosen[i], chosen[j]))))
            cols.append(sorted(chosen))
        if len(cols) == len(weights) and rank(cols, m) == m:
            return cols


def rank(cols, m):
    rows = [0] * m
    for ci, c in enumerate(cols):
        for r in c:
            rows[r] |= 1 << ci
    rk = 0
    for bit in range(len(cols)):
        piv = next((i for i in range(rk, m) if rows[i] >> bit & 1), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        for i in range(m):
            if i != rk and rows[i] >> bit & 1:
                rows[i] ^= rows[rk]
        rk += 1
    return rk


def write_alist(path, cols, m):
    n = len(cols)
    rows = [[] for _ in range(m)]
    for ci, c in enumerate(cols):
        for r in c:
            rows[r].append(ci)
    dc = max(len(c) for c in cols)
    dr = max(len(r) for r in rows)
    with open(path, "w") as f:
        f.write(f"{n} {m}\n{dc} {dr}\n")
        f.write(" ".join(str(len(c)) for c in cols) + "\n")
        f.write(" ".join(str(len(r)) for r in rows) + "\n")
        for c in cols:
            f.write(" ".join(str(x + 1) for x in c) + " 0" * (dc - len(c)) + "\n")
        for r in rows:
            f.write(" ".join(str(x + 1) for x in r) + " 0" * (dr - len(r)) + "\n")


if __name__ == "__main__":
    for name, weights, m, seed in [
        ("ldpc_12x24.alist", [3] * 8 + [2] * 16, 12, 1),
        ("ldpc_r56_n480.alist", [3] * 480, 80, 2),
        ("ldpc_r56_n2400.alist", [3] * 2400, 400, 3),
    ]:
        write_alist(name, build(weights, m, seed), m)
        print("wrote", name)
