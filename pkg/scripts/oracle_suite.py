"""Cauchy transform quadrature against the closed forms, with fitted convergence orders."""
from dbarprod import experiments as ex


def main():
    rep = ex.oracle_suite()
    for c in rep["checks"]:
        errs = " ".join(f"{e:.1e}" for e in c["errors"])
        z = complex(*c["z"])
        print(f"{c['name']:8s} k={c['k']} z={z:.2f}  errors {errs}  order {c['order']:.2f}  "
              f"{'ok' if c['passed'] else 'FAIL'}")
    print(f"k=1 antiholo/holo identity gap {rep['identity_gap_k1']:.1e}")
    print("PASS" if rep["passed"] else "FAIL")
    raise SystemExit(0 if rep["passed"] else 1)


if __name__ == "__main__":
    main()
