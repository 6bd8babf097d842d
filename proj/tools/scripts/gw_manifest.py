#!/usr/bin/env python3
"""Build a wordspot manifest for the George Washington word images.

Expects the layout of the public GW database: word images named
PAGE-LINE-WORD.png and a ground-truth file with one `PAGE-LINE-WORD t-r-a-n-s`
line per word. The last N pages (sorted by page id) become the test split.

    gw_manifest.py --images gw/data/word_images_normalized \
        --labels gw/ground_truth/word_labels.txt --output gw.tsv
"""

import argparse
import os
import sys

# Punctuation tokens used by the GW ground truth.
SPECIAL = {
    "s_pt": ".", "s_cm": ",", "s_mi": "-", "s_sq": ";", "s_qo": ":",
    "s_qt": "'", "s_lb": "(", "s_rb": ")", "s_et": "&", "s_bl": "(", "s_br": ")",
}


def transcription(encoded):
    out = []
    for tok in encoded.split("-"):
        if tok.startswith("s_"):
            rest = tok[2:]
            if rest.isdigit():
                out.append(rest)
            elif tok in SPECIAL:
                out.append(SPECIAL[tok])
            elif rest.endswith("st") or rest.endswith("nd") or rest.endswith("rd") or rest.endswith("th"):
                out.append(rest)
            else:
                out.append("[" + rest + "]")
        else:
            out.append(tok)
    return "".join(out)


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--images", required=True, help="directory of word images")
    ap.add_argument("--labels", required=True, help="ground-truth word_labels.txt")
    ap.add_argument("--output", required=True, help="manifest to write")
    ap.add_argument("--test-pages", type=int, default=5, help="number of final pages used for testing")
    ap.add_argument("--ext", default=".png")
    args = ap.parse_args()

    words = []
    with open(args.labels, encoding="utf-8") as f:
        for n, line in enumerate(f, 1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                sys.exit(f"{args.labels}:{n}: expected 'ID TRANSCRIPTION'")
            word_id, encoded = parts
            words.append((word_id, transcription(encoded), word_id.split("-")[0]))

    pages = sorted({page for _, _, page in words})
    if args.test_pages >= len(pages):
        sys.exit(f"only {len(pages)} pages found; cannot hold out {args.test_pages}")
    test = set(pages[-args.test_pages:])

    out_dir = os.path.dirname(os.path.abspath(args.output))
    missing = 0
    with open(args.output, "w", encoding="utf-8", newline="\n") as out:
        out.write("# path\ttranscription\tpage\tsplit\n")
        for word_id, text, page in words:
            path = os.path.join(os.path.abspath(args.images), word_id + args.ext)
            if not os.path.exists(path):
                missing += 1
                continue
            rel = os.path.relpath(path, out_dir)
            out.write(f"{rel}\t{text}\t{page}\t{'test' if page in test else 'train'}\n")
    print(f"{len(words) - missing} words over {len(pages)} pages, test pages: {' '.join(sorted(test))}"
          + (f", {missing} images missing" if missing else ""))


if __name__ == "__main__":
    main()
