#!/usr/bin/env python3
"""Build a wordspot manifest from a generic word list, e.g. for BHHMD.

The labels file holds one word per line: `IMAGE<TAB>TRANSCRIPTION<TAB>PAGE`,
with IMAGE relative to --images. Pages listed in --test-pages (or the last
--test-count pages in sorted order) form the test split.

    words_manifest.py --images bhhmd/words --labels bhhmd/words.tsv \
        --test-count 5 --output bhhmd.tsv
"""

import argparse
import csv
import os
import sys


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--images", required=True)
    ap.add_argument("--labels", required=True)
    ap.add_argument("--output", required=True)
    group = ap.add_mutually_exclusive_group(required=True)
    group.add_argument("--test-pages", help="comma-separated page ids for the test split")
    group.add_argument("--test-count", type=int, help="use the last N pages for testing")
    args = ap.parse_args()

    with open(args.labels, encoding="utf-8", newline="") as f:
        rows = [r for r in csv.reader(f, delimiter="\t") if r and not r[0].startswith("#")]
    for n, r in enumerate(rows, 1):
        if len(r) != 3:
            sys.exit(f"{args.labels}: row {n}: expected IMAGE, TRANSCRIPTION, PAGE")

    pages = sorted({r[2] for r in rows})
    test = set(args.test_pages.split(",")) if args.test_pages else set(pages[-args.test_count:])

    out_dir = os.path.dirname(os.path.abspath(args.output))
    with open(args.output, "w", encoding="utf-8", newline="\n") as out:
        out.write("# path\ttranscription\tpage\tsplit\n")
        for image, text, page in rows:
            rel = os.path.relpath(os.path.join(os.path.abspath(args.images), image), out_dir)
            out.write(f"{rel}\t{text.strip()}\t{page}\t{'test' if page in test else 'train'}\n")
    print(f"{len(rows)} words over {len(pages)} pages, {len(test)} test pages")


if __name__ == "__main__":
    main()
