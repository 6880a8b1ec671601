"""Henon attractor at the default parameters; optional occupancy image."""
import argparse
import json

from corrhom.experiments import HenonConfig, occupancy_pgm, run_henon


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=100000)
    ap.add_argument("--divisions", type=int, default=256)
    ap.add_argument("--image")
    args = ap.parse_args()
    res = run_henon(HenonConfig(n=args.n, divisions=args.divisions))
    if args.image:
        with open(args.image, "wb") as fh:
            fh.write(occupancy_pgm(res.grid, res.map.codomain))
    print(json.dumps({**res.summary(), "seconds": round(res.seconds, 2)}, indent=1))


if __name__ == "__main__":
    main()
