#!/usr/bin/env python3
"""Scan Fitting-length growth for the two bundled module families.

Prints, for each family, the sequence ell(R/I_n), its estimated growth
degree, and the codimension dim R - dim S that the Serre-lift criterion
compares against.  Useful as a quick smoke test and as a template for
exploring other schedules.

Usage:
    python scripts/growth_scan.py [--n-max N] [--trunc T] [--char P]
"""

import argparse

from liftcert.exactlinalg import FieldConfig
from liftcert.lifting import (
    alternating_perturbation_system,
    extension_family_system,
    liftable_dim_certificate,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=5,
                    help="number of levels (the estimator needs >= 5)")
    ap.add_argument("--trunc", type=int, default=12)
    ap.add_argument("--char", type=int, default=32003)
    args = ap.parse_args()

    field = FieldConfig(args.char)
    families = [
        ("alternating 2x2 over k[[x,y,z]]",
         alternating_perturbation_system(field, args.trunc, args.n_max)),
        ("extension family d=2 over k[[x1,x2,y1,y2]]",
         extension_family_system(2, field, args.trunc, args.n_max)),
    ]
    for name, sys in families:
        rep = liftable_dim_certificate(sys, args.n_max, window=2)
        print(name)
        print("  lengths        :", rep.lengths)
        print("  growth degree  :", rep.growth.degree,
              "(agreement %s)" % rep.growth.agreement)
        print("  dim R - dim S  :", rep.dim_r - rep.dim_s)
        print("  stamp          :", rep.stamp)
        print()


if __name__ == "__main__":
    main()
