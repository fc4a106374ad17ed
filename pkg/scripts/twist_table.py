"""Tabulate ρ and the twisting vector for every chart map at a given rank."""

import argparse

from twistsection import charts as ch
from twistsection.crosshom import twisting_of
from twistsection.curve import rho_of


def maps(n):
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                yield ch.slide(i, j)
    for j in range(1, n + 1):
        yield ch.flip(j)
    for i in range(1, n + 1):
        yield ch.sphere_twist(i)


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, default=3)
    args = p.parse_args()
    for cmap in maps(args.n):
        print(f"{str(cmap):<10} twist={twisting_of(cmap, args.n)}  rho: {rho_of(cmap, args.n)}")


if __name__ == "__main__":
    main()
