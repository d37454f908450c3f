"""Joins the UCI HAR feature and label files into one whitespace table.

Reads X_train.txt / y_train.txt and X_test.txt / y_test.txt from the dataset
directory and writes one row per instance: the 561 features, then the
activity label. The original train/test partition is discarded; the runner
draws its own 70/15/15 split.
"""
import argparse
from pathlib import Path


def rows(features, labels):
    with open(features) as xs, open(labels) as ys:
        for x, y in zip(xs, ys):
            yield " ".join(x.split()) + " " + y.strip()


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("root", help="'UCI HAR Dataset' directory")
    parser.add_argument("out", help="destination text file")
    args = parser.parse_args()

    root = Path(args.root)
    count = 0
    with open(args.out, "w") as out:
        for part in ("train", "test"):
            for line in rows(root / part / f"X_{part}.txt", root / part / f"y_{part}.txt"):
                out.write(line + "\n")
                count += 1
    print(f"wrote {count} instances")


if __name__ == "__main__":
    main()
