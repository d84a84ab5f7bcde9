#!/usr/bin/env python3
"""Regenerates classgroup_oracle.json from PARI/GP (cypari2).

For a spread of fundamental discriminants D, records the cyclic
decomposition of the ideal class group and of the narrow class group of
Q(sqrt(D)). Used to check p-ranks computed from binary quadratic forms.
"""
import json
import random

import cypari2

pari = cypari2.Pari()
rng = random.Random(11)


def structure(D):
    bnf = pari.bnfinit(pari("x^2 - (%d)" % D if D % 4 else "x^2 - (%d)" % (D // 4)), 1)
    wide = [int(c) for c in bnf.bnf_get_cyc()]
    narrow = [int(c) for c in pari.bnfnarrow(bnf)[1]]
    return wide, narrow


def main():
    ds = set([-3, -4, -7, -8, -23, -47, -79, -103, -3299, -4027, -11199, -12451,
              5, 8, 12, 21, 40, 60, 229, 1129, 2777, 4481, 11137, 1729])
    assert all(pari.isfundamental(D) for D in ds)
    while len(ds) < 160:
        D = rng.randint(-20000, 20000)
        if D in (0, 1) or not pari.isfundamental(D):
            continue
        ds.add(D)
    out = []
    for D in sorted(ds):
        wide, narrow = structure(D)
        out.append({"D": D, "wide": wide, "narrow": narrow})
    print(json.dumps(out, indent=0))


if __name__ == "__main__":
    main()
