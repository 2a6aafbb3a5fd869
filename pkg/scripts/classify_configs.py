"""Oracle vs production verdicts for the 64 fully cut cube configurations."""
import argparse
import sys
import time
from collections import Counter

from hex2tet.hexkernel import production_verdicts
from hex2tet.verify import classification_csv, classify_all_64


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", help="CSV path (default: stdout)")
    args = ap.parse_args()
    t0 = time.perf_counter()
    table = classify_all_64()
    prod = production_verdicts()
    csv = classification_csv(table, prod)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv)
    else:
        sys.stdout.write(csv)
    counts = Counter(r.verdict.value for r in table)
    print(f"# {dict(sorted(counts.items()))} in {time.perf_counter() - t0:.2f}s", file=sys.stderr)


if __name__ == "__main__":
    main()
