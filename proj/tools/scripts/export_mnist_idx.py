#!/usr/bin/env python3
# Copyright 2026 The pqnet Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Convert the digit JSON files of the npm `mnist` package into gzipped IDX.

The package ships src/digits/<d>.json, each {"data": [...]} holding the
28x28 images of digit d flattened one after another with intensities in
[0, 1]. Images are written interleaved by digit so every prefix of the file
stays roughly balanced.

    npm pack mnist && tar xzf mnist-*.tgz
    export_mnist_idx.py package/src/digits "$PQ_DATA_DIR/mnist"
"""

import argparse
import gzip
import json
import pathlib
import struct
import sys

SIDE = 28


def load_digit(path):
    data = json.loads(path.read_text())["data"]
    pixels = SIDE * SIDE
    if len(data) % pixels:
        sys.exit(f"{path}: length {len(data)} is not a multiple of {pixels}")
    return [
        bytes(min(255, max(0, round(v * 255))) for v in data[i : i + pixels])
        for i in range(0, len(data), pixels)
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("digits_dir", type=pathlib.Path)
    ap.add_argument("out_dir", type=pathlib.Path)
    ap.add_argument("--prefix", default="t10k")
    args = ap.parse_args()

    per_digit = [load_digit(args.digits_dir / f"{d}.json") for d in range(10)]
    images, labels = [], []
    for k in range(max(len(x) for x in per_digit)):
        for d, imgs in enumerate(per_digit):
            if k < len(imgs):
                images.append(imgs[k])
                labels.append(d)

    args.out_dir.mkdir(parents=True, exist_ok=True)
    img_path = args.out_dir / f"{args.prefix}-images-idx3-ubyte.gz"
    lab_path = args.out_dir / f"{args.prefix}-labels-idx1-ubyte.gz"
    with gzip.GzipFile(img_path, "wb", mtime=0) as f:
        f.write(struct.pack(">IIII", 0x803, len(images), SIDE, SIDE))
        f.writelines(images)
    with gzip.GzipFile(lab_path, "wb", mtime=0) as f:
        f.write(struct.pack(">II", 0x801, len(labels)))
        f.write(bytes(labels))
    counts = [len(x) for x in per_digit]
    print(f"wrote {len(images)} images ({counts}) to {args.out_dir}")


if __name__ == "__main__":
    main()
