#!/usr/bin/env python3
"""Probe the boundaries of the entrywise-product bounds.

Three experiments at desk scale:

1. the diagonal-outer bound M o M >= (1/n) (diag M)(diag M)* on *complex*
   commutative instances — the proof needs entries fixed by the involution,
   and complex instances do violate it; measure how often;
2. the same bound on real instances — always holds; record the worst margin;
3. zeroth-Schur-power conventions: how often does a positive-coefficient
   series applied with the identity convention vs the all-units convention
   disagree about positivity? (Never, for positive inputs — both shifts are
   positive — but the margins differ; record both.)
"""

import argparse
import sys

import numpy as np

from cstar_schur import (
    AlgebraShape,
    GenConfig,
    SeriesSpec,
    diag_vector,
    outer_product,
    psd_check,
    random_element,
    random_positive_matrix,
    schur_product,
    schur_series_apply,
)


def diag_bound_margin(M):
    d = diag_vector(M)
    gap = schur_product(M, M) - (1.0 / M.n) * outer_product(d)
    return psd_check(gap).margin


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--n", type=int, default=4)
    args = ap.parse_args()

    shape = AlgebraShape((1, 1))

    for style in ("complex", "real_commutative"):
        cfg = GenConfig(seed=args.seed, shape=shape, n=args.n, style=style)
        margins = []
        for t in range(args.trials):
            _, M = random_positive_matrix(cfg.derive(t))
            margins.append(diag_bound_margin(M))
        margins = np.array(margins)
        violations = int((margins < -1e-9).sum())
        print(
            f"diag bound, style={style:16s}: {violations}/{args.trials} violations,"
            f" worst margin {margins.min():+.3e}"
        )

    cfg = GenConfig(seed=args.seed + 1, shape=shape, n=args.n)
    worst_id, worst_ones = 0.0, 0.0
    for t in range(args.trials):
        sub = cfg.derive(t)
        g = random_element(sub.derive(1))
        a0 = g * g.adjoint()
        series = SeriesSpec((a0, a0, a0))
        _, M = random_positive_matrix(sub.derive(0))
        m_id = psd_check(schur_series_apply(series, M, constant="identity")).margin
        m_ones = psd_check(schur_series_apply(series, M, constant="ones")).margin
        worst_id = min(worst_id, m_id)
        worst_ones = min(worst_ones, m_ones)
    print(
        f"series conventions: worst margin identity {worst_id:+.3e},"
        f" all-units {worst_ones:+.3e} (both stay positive on positive input)"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
