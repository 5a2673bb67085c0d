#!/usr/bin/env python3
"""Fetch the public credit datasets and convert them to the CSV layout the
dataset schemas in configs/datasets/ expect.

Raw files are never committed to the repository. Usage:

    python3 scripts/fetch_data.py --out data                 # download
    python3 scripts/fetch_data.py --out data --from-dir RAW  # use local copies

RAW must contain the original file names (adult.data, adult.test,
german.data, bank-additional-full.csv, mortgage.csv).
"""

import argparse
import csv
import hashlib
import io
import pathlib
import shutil
import sys
import urllib.request
import zipfile

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases"

# sha256 of the raw upstream files. None means "not pinned yet": the digest is
# printed so it can be recorded here.
CHECKSUMS = {
    "adult.data": "5b00264637dbfec36bdeaab5676b0b309ff9eb788d63554ca0a249491c86603d",
    "adult.test": "a2a9044bc167a35b2361efbabec64e89d69ce82d9790d2980119aac5fd7e9c05",
    "german.data": "b21f3d81db8071257d5ff1deaeba1fd4303b62712e6fcc9715c7a86202cb5871",
    "bank-additional-full.csv": None,
    "mortgage.csv": None,
}

ADULT_COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education_num",
    "marital_status", "occupation", "relationship", "race", "sex",
    "capital_gain", "capital_loss", "hours_per_week", "native_country",
    "income",
]

GERMAN_COLUMNS = [
    "status", "duration", "credit_history", "purpose", "amount", "savings",
    "employment", "installment_rate", "personal_status", "other_debtors",
    "residence_since", "property", "age", "other_installment_plans",
    "housing", "existing_credits", "job", "people_liable", "telephone",
    "foreign_worker", "credit_risk",
]

MORTGAGE_NOTE = """\
The Mortgage dataset is distributed from https://github.com/askoshiyama/audit_mortgage .
Download the outcome-balanced 2011 HMDA extract from that repository, save it
as mortgage.csv in the --from-dir directory and re-run this script."""


def sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def verify(path):
    expected = CHECKSUMS.get(path.name)
    actual = sha256(path)
    if expected is None:
        print(f"  {path.name}: sha256 {actual} (unpinned)")
    elif expected != actual:
        sys.exit(f"checksum mismatch for {path}: expected {expected}, got {actual}")
    else:
        print(f"  {path.name}: checksum ok")


def download(url, dest):
    print(f"  downloading {url}")
    with urllib.request.urlopen(url, timeout=60) as r, open(dest, "wb") as f:
        shutil.copyfileobj(r, f)


def obtain(name, raw_dir, url=None):
    path = raw_dir / name
    if not path.exists():
        if url is None:
            return None
        download(url, path)
    verify(path)
    return path


def write_csv(dest, header, rows):
    tmp = dest.with_suffix(".tmp")
    with open(tmp, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    tmp.replace(dest)
    print(f"  wrote {dest} ({len(rows)} rows)")


def adult(raw_dir, out_dir):
    rows = []
    for name in ("adult.data", "adult.test"):
        path = obtain(name, raw_dir, f"{UCI}/adult/{name}")
        for line in open(path):
            fields = [f.strip() for f in line.strip().split(",")]
            if len(fields) != len(ADULT_COLUMNS):
                continue  # blank lines and the test-file banner
            # adult.test labels carry a trailing period
            fields[-1] = fields[-1].rstrip(".")
            rows.append(fields)
    write_csv(out_dir / "adult.csv", ADULT_COLUMNS, rows)


def german(raw_dir, out_dir):
    path = obtain("german.data", raw_dir, f"{UCI}/statlog/german/german.data")
    rows = [line.split() for line in open(path) if line.strip()]
    write_csv(out_dir / "german.csv", GERMAN_COLUMNS, rows)


def bank(raw_dir, out_dir):
    path = raw_dir / "bank-additional-full.csv"
    if not path.exists():
        archive = raw_dir / "bank-additional.zip"
        if not archive.exists():
            download(f"{UCI}/00222/bank-additional.zip", archive)
        with zipfile.ZipFile(archive) as z:
            path.write_bytes(z.read("bank-additional/bank-additional-full.csv"))
    verify(path)
    with open(path, newline="") as f:
        reader = csv.reader(f, delimiter=";")
        header = next(reader)
        rows = list(reader)
    write_csv(out_dir / "bank.csv", header, rows)


def mortgage(raw_dir, out_dir):
    path = obtain("mortgage.csv", raw_dir)
    if path is None:
        print(MORTGAGE_NOTE)
        return
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        rows = list(reader)
    write_csv(out_dir / "mortgage.csv", header, rows)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="data", type=pathlib.Path)
    parser.add_argument("--from-dir", type=pathlib.Path,
                        help="directory holding raw upstream files")
    parser.add_argument("datasets", nargs="*",
                        default=["adult", "bank", "german", "mortgage"])
    args = parser.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    raw_dir = args.from_dir or (args.out / "raw")
    raw_dir.mkdir(parents=True, exist_ok=True)

    failed = []
    for name in args.datasets:
        print(f"{name}:")
        try:
            globals()[name](raw_dir, args.out)
        except (OSError, KeyError, zipfile.BadZipFile) as e:
            print(f"  failed: {e}")
            failed.append(name)
    if failed:
        sys.exit(f"could not prepare: {', '.join(failed)}")


if __name__ == "__main__":
    main()
