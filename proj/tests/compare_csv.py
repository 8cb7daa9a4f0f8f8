#!/usr/bin/env python3
"""Compare two CSV files cell by cell with a relative tolerance on floats."""
import sys


def cells(path):
    with open(path) as f:
        return [line.rstrip("\n").split(",") for line in f]


def main():
    a, b, tol = cells(sys.argv[1]), cells(sys.argv[2]), float(sys.argv[3])
    if len(a) != len(b):
        sys.exit(f"row count differs: {len(a)} vs {len(b)}")
    for i, (ra, rb) in enumerate(zip(a, b)):
        if len(ra) != len(rb):
            sys.exit(f"row {i}: column count differs")
        for j, (ca, cb) in enumerate(zip(ra, rb)):
            try:
                va, vb = float(ca), float(cb)
            except ValueError:
                if ca != cb:
                    sys.exit(f"row {i} col {j}: '{ca}' vs '{cb}'")
                continue
            if abs(va - vb) > tol * (1.0 + max(abs(va), abs(vb))):
                sys.exit(f"row {i} col {j}: {va} vs {vb}")
    print("csv files agree")


if __name__ == "__main__":
    main()
