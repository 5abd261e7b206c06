"""Print the stage-coefficient certificate table for every built-in tableau.

Usage: python scripts/certificate_table.py [--c 2.0] [--delta 1.0] [--k-max 3]
"""
import argparse

from rkfw import TABLEAU_NAMES, cancellability_margin, feasibility_certificate, make_tableau


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--c", type=float, default=2.0)
    ap.add_argument("--delta", type=float, default=1.0)
    ap.add_argument("--k-max", type=int, default=3)
    args = ap.parse_args()

    for name in TABLEAU_NAMES:
        t = make_tableau(name)
        report = feasibility_certificate(t, args.c, args.delta, args.k_max)
        margin = cancellability_margin(t.weights)
        print(f"{name}  (q={t.q}, cancellability margin {margin:g})")
        for k, z in report.z_by_k:
            print(f"  k={k}: " + "  ".join(f"{v: .4f}" for v in z))
        print(f"  in [0,1]: {report.all_in_unit_interval}, "
              f"sup-norm monotone: {report.sup_norm_monotone}")


if __name__ == "__main__":
    main()
