#!/usr/bin/env python3
"""Write a random .adt document for demos and load testing."""

from __future__ import annotations

import argparse
import random
import sys

from adtrees.ioexport import save
from adtrees.randomgen import random_document


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("-n", "--nodes", type=int, default=40)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--domains", nargs="+", default=["min-cost", "satisfiability"])
    parser.add_argument("-o", "--output", help="output path (default stdout)")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    doc = random_document(rng, args.nodes, domain_ids=tuple(args.domains))
    data = save(doc)
    if args.output:
        with open(args.output, "wb") as handle:
            handle.write(data)
    else:
        sys.stdout.buffer.write(data)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
