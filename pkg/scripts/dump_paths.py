"""Write the ψ table and the matrix paths of each generator map as CSV files."""

import argparse
from pathlib import Path

from twistsection.cli import main as cli_main


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", type=Path, default=Path("dumps"))
    args = p.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    jobs = [("psi.csv", ["--dump", "psi"])]
    for spec, gen in (("F1,2", 1), ("G1", 1), ("T1", 1)):
        name = spec.replace(",", "_")
        jobs.append((f"matrixpath_{name}.csv", ["--dump", "matrixpath", "--map", spec, "--gen", str(gen)]))
        jobs.append((f"loop_{name}.json", ["--dump", "loop", "--map", spec, "--gen", str(gen)]))
    for fname, argv in jobs:
        with open(args.out / fname, "w") as fh:
            cli_main(argv, out=fh)
        print(args.out / fname)


if __name__ == "__main__":
    main()
