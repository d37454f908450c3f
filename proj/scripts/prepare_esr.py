"""Reduces the UCI Epileptic Seizure Recognition table to its first two classes.

Input: the original CSV (header row, an identifier column, 178 EEG samples
X1..X178, class y in 1..5). Output: a CSV with the 178 samples and the
class label, keeping only rows with y == 1 (seizure) or y == 2, which gives
2300 + 2300 rows.
"""
import argparse
import csv


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("source", help="original data.csv")
    parser.add_argument("out", help="destination CSV path")
    args = parser.parse_args()

    kept = {"1": 0, "2": 0}
    with open(args.source, newline="") as src, open(args.out, "w", newline="") as dst:
        reader = csv.reader(src)
        writer = csv.writer(dst, lineterminator="\n")
        header = next(reader)
        writer.writerow(header[1:])
        for row in reader:
            label = row[-1].strip()
            if label in kept:
                kept[label] += 1
                writer.writerow(row[1:])
    print(f"kept {kept['1']} rows of class 1 and {kept['2']} rows of class 2")


if __name__ == "__main__":
    main()
