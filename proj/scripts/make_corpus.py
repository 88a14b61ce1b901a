#!/usr/bin/env python3
"""Build the bundled JPEG corpus from lossless source photos.

Every source is re-encoded as baseline 4:2:0 JPEG at quality 95 into
corpus/. The two largest photos are also written at quality 99 with 4:4:4
sampling into corpus/large/, standing in for multi-megabyte camera originals
(the bandwidth check only looks at files of 1 MB or more).

Sources: the PNGs in --raw (extracted from the sample-data files shipped with
scipy, menpo, mahotas and PyWavelets) plus the scikit-image and matplotlib
sample photos.
"""

import argparse
import os
import sys

from PIL import Image

RAW = [
    "aero.png", "ascent.png", "breakingbad.png", "department_store.png",
    "einstein.png", "lenna.png", "raccoon.png", "tongue.png",
]
SKIMAGE = ["astronaut.png", "camera.png", "hubble_deep_field.jpg", "retina.jpg"]
LARGE = ["breakingbad.png", "department_store.png"]


def sources(raw_dir):
    import matplotlib
    import skimage

    out = [os.path.join(raw_dir, f) for f in RAW]
    data = os.path.join(os.path.dirname(skimage.__file__), "data")
    out += [os.path.join(data, f) for f in SKIMAGE]
    out.append(os.path.join(os.path.dirname(matplotlib.__file__), "mpl-data", "sample_data", "grace_hopper.jpg"))
    return out


def save(img, path, quality, subsampling):
    mode = "L" if img.mode in ("L", "I;16", "I") else "RGB"
    img.convert(mode).save(path, "JPEG", quality=quality, subsampling=subsampling, optimize=False, progressive=False)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--raw", default="/tmp/raw", help="directory with the extracted PNG sources")
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "corpus"))
    args = ap.parse_args()

    os.makedirs(os.path.join(args.out, "large"), exist_ok=True)
    missing = [p for p in sources(args.raw) if not os.path.exists(p)]
    if missing:
        sys.exit("missing sources: " + ", ".join(missing))
    for path in sources(args.raw):
        img = Image.open(path)
        if min(img.size) < 512:
            sys.exit(f"{path} is smaller than 512x512")
        name = os.path.splitext(os.path.basename(path))[0] + ".jpg"
        save(img, os.path.join(args.out, name), 95, 2)
        if os.path.basename(path) in LARGE:
            save(img, os.path.join(args.out, "large", name), 99, 0)
        print(name, img.size)


if __name__ == "__main__":
    main()
