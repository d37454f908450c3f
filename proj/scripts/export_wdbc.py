"""Writes the Wisconsin Diagnostic Breast Cancer table (569 x 30) as CSV.

The rows come from the copy of the UCI WDBC data bundled with scikit-learn.
Output columns: the 30 real-valued features, then the diagnosis (M or B).
"""
import argparse
import csv

from sklearn.datasets import load_breast_cancer


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", help="destination CSV path")
    args = parser.parse_args()

    data = load_breast_cancer()
    # scikit-learn encodes malignant as 0 and benign as 1
    names = {0: "M", 1: "B"}
    with open(args.out, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow([name.replace(" ", "_") for name in data.feature_names] + ["diagnosis"])
        for row, target in zip(data.data, data.target):
            writer.writerow([repr(float(v)) for v in row] + [names[int(target)]])


if __name__ == "__main__":
    main()
