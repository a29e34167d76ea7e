"""||v||_4 stays bounded while ||v_can||_4^4 grows like log(1/eps) on the truncated triangle."""
import argparse

from dbarprod import experiments as ex


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=4.0)
    ap.add_argument("--out")
    args = ap.parse_args()

    rows = ex.hartogs_contrast((1e-1, 1e-2, 1e-3, 1e-4, 1e-5), p=args.p)
    for r in rows:
        print(f"eps={r['epsilon']:.0e}  ||v||_p={r['v_norm']:.6f}  "
              f"||v_can||_p^p={r['v_can_pow']:.5f}  (c^4 2pi^2 ln(1/eps)={r['log_term']:.5f})")
    if args.out:
        ex.write_csv(args.out, rows)


if __name__ == "__main__":
    main()
