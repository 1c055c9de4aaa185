"""Materialise MovieLens100k as ``data/ml-100k/u.data``.

GroupLens downloads are often blocked in CI sandboxes, but the RecBole wheel on
PyPI bundles the same 100,000 ratings (``ml-100k.inter``: the original
``u.data`` rows with a typed header line).  This script downloads that wheel
with pip, strips the header and writes the classic tab-separated layout.

Usage::

    python scripts/fetch_movielens.py [--out data/ml-100k/u.data]
"""

import argparse
import glob
import subprocess
import sys
import tempfile
import zipfile
from pathlib import Path

MEMBER = "recbole/dataset_example/ml-100k/ml-100k.inter"


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="data/ml-100k/u.data")
    args = parser.parse_args(argv)
    out = Path(args.out)
    if out.exists():
        print(f"{out} already exists")
        return 0

    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "recbole==1.2.1", "--no-deps", "-q", "-d", tmp],
            check=True,
        )
        wheel = glob.glob(f"{tmp}/recbole-*.whl")[0]
        text = zipfile.ZipFile(wheel).read(MEMBER).decode("utf-8")

    lines = text.splitlines()
    if not lines[0].startswith("user_id"):
        raise SystemExit(f"unexpected header in {MEMBER}: {lines[0]!r}")
    rows = lines[1:]
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(rows) + "\n")
    print(f"wrote {len(rows)} ratings to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
