"""Empirical ||T f||_p / ||f||_B over random closed monomial forms, at two grid sizes."""
import argparse

from dbarprod import experiments as ex


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--p", type=float, nargs="+", default=[1, 2, 4])
    args = ap.parse_args()

    out = ex.bound_sweep(args.trials, args.p, args.seed, resolutions=((24, 24), (36, 36)))
    for p, by_res in out.items():
        cells = "  ".join(f"{res[0]}x{res[1]}: {v['max_ratio']:.4f}" for res, v in by_res.items())
        print(f"p={p:g}  max ratio  {cells}")
    for p in args.p:
        c = ex.cauchy_lp_property(p, args.trials, args.seed)
        print(f"p={p:g}  max ||K_1 g||_p / ||g||_p = {c['max_ratio']:.4f}")


if __name__ == "__main__":
    main()
