"""Truncations of the counterexample in L^1.5 (converges) against L^2 (grows like sqrt(log L))."""
import argparse
import math

from dbarprod import experiments as ex


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lmax-exp", type=int, default=10, help="largest L is 2**lmax_exp")
    args = ap.parse_args()

    Ls = [2 ** j for j in range(3, args.lmax_exp + 1)]
    vals = ex.gL_lp_contrast((1.5, 2.0), Ls)
    print(f"{'L':>6} {'||g||_1.5':>11} {'increment':>10} {'||g||_2^2':>11} {'/ln L':>8}")
    prev = None
    for L in Ls:
        a, b = vals[1.5][L], vals[2.0][L]
        inc = "" if prev is None else f"{a - prev:10.5f}"
        print(f"{L:6d} {a:11.6f} {inc:>10} {b * b:11.5f} {b * b / math.log(L):8.4f}")
        prev = a


if __name__ == "__main__":
    main()
