"""Residual of the bilinear generating function against the truncation order jmax."""
import argparse

from m1poly.identities import Sampler, bilinear_genfun_residual


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--draws", type=int, default=5)
    ap.add_argument("--jmax", type=int, default=40)
    ap.add_argument("--step", type=int, default=4)
    args = ap.parse_args()

    s = Sampler(args.seed)
    orders = list(range(0, args.jmax + 1, args.step))
    print("draw " + " ".join(f"j={j:<7d}" for j in orders))
    for d in range(args.draws):
        r1, r2 = s.irreps(2)
        pt = s.point2(lam_max=(2.0, 3.0))
        z1, z2 = s.z(), s.z()
        res = [bilinear_genfun_residual(pt, z1, z2, r1, r2, jmax=j).rel_residual for j in orders]
        print(f"{d:<4d} " + " ".join(f"{r:.2e}" for r in res))


if __name__ == "__main__":
    main()
