"""Regenerate the su(3) structure constants and Joyce triple stored in hkt.catalog.

su(3) = u(1) + su(2) + H with g = Id.  The su(2) triple (e2, e3, e4) satisfies
[e2, e3] = a e4 cyclically with a = -1; e1 acts on H = span(e5..e8) by right
multiplication by (a/2)(i + j + k) and e_{1+s} by left multiplication by (a/2) times
the s-th imaginary unit.  Brackets of two H vectors are fixed by ad-invariance of g.

Usage: python3 tools/generate_su3.py [--check]
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction


def lq(w, x, y, z):
    return [[w, -x, -y, -z], [x, w, -z, y], [y, z, w, -x], [z, -y, x, w]]


def rq(w, x, y, z):
    return [[w, -x, -y, -z], [x, w, z, -y], [y, -z, w, x], [z, y, -x, w]]


def structure_constants(a: Fraction = Fraction(-1)) -> dict[tuple[int, int, int], Fraction]:
    c: dict[tuple[int, int, int], Fraction] = {}

    def put(i, j, k, v):
        c[i, j, k] = c.get((i, j, k), 0) + v
        c[j, i, k] = c.get((j, i, k), 0) - v

    h = a / 2
    put(1, 2, 3, a)
    put(2, 3, 1, a)
    put(3, 1, 2, a)
    acts = {0: rq(0, h, h, h), 1: lq(0, h, 0, 0), 2: lq(0, 0, h, 0), 3: lq(0, 0, 0, h)}
    for z, m in acts.items():
        for x in range(4):
            for y in range(4):
                c[z, 4 + x, 4 + y] = c.get((z, 4 + x, 4 + y), 0) + m[y][x]
                c[4 + x, z, 4 + y] = c.get((4 + x, z, 4 + y), 0) - m[y][x]
                # g([x, y], z) = -g(y, [x, z]) = g(y, ad_z x)
                c[4 + x, 4 + y, z] = c.get((4 + x, 4 + y, z), 0) - m[x][y]
    return {k: Fraction(v) for k, v in c.items() if v != 0}


def bracket_rows(c: dict[tuple[int, int, int], Fraction]) -> list[tuple[int, int, int, str]]:
    rows = []
    for (i, j, k), v in sorted(c.items()):
        if i < j:
            rows.append((i + 1, j + 1, k + 1, str(v)))
    return rows


def joyce_triple() -> list[list[list[int]]]:
    out = []
    for u in ((0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)):
        b = lq(*u)
        m = [[0] * 8 for _ in range(8)]
        for r in range(4):
            for s in range(4):
                m[r][s] = m[4 + r][4 + s] = b[r][s]
        out.append(m)
    return out


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--check", action="store_true", help="compare with the constants in hkt.catalog")
    args = p.parse_args(argv)
    rows = bracket_rows(structure_constants())
    I, J, K = joyce_triple()
    if args.check:
        from hkt import catalog
        ok = rows == list(catalog.SU3_BRACKETS) and [I, J, K] == [catalog.SU3_I, catalog.SU3_J, catalog.SU3_K]
        print("match" if ok else "MISMATCH")
        return 0 if ok else 1
    print("SU3_BRACKETS = [")
    for r in rows:
        print(f"    {r!r},")
    print("]")
    for name, m in zip("IJK", (I, J, K)):
        print(f"SU3_{name} = {m!r}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
