#!/usr/bin/env python3
"""Render the clean QR fixture codes used by the tests and the sweep presets.

Each code is written as an 8-bit binary PGM with a 4-module quiet zone and
8 pixels per module. The payload table goes to codes.tsv next to the images.
"""
import argparse
import pathlib

import cv2
import numpy as np

CODES = [
    (1, 1, "QR restore 01"),
    (2, 2, "QR restore fixture 02"),
    (3, 3, "QR restore fixture code 03"),
    (4, 4, "QR restore fixture code number 04"),
    (5, 2, "fixture 05 speckle"),
    (6, 2, "fixture 06 gauss"),
    (7, 2, "fixture 07 gauss"),
    (8, 2, "fixture 08 motion"),
    (9, 3, "fixture 09 uniform noise"),
    (10, 2, "fixture 10 s&p"),
]


def render(version, payload, module_px, quiet_modules):
    params = cv2.QRCodeEncoder.Params()
    params.version = version
    params.correction_level = cv2.QRCodeEncoder_CORRECT_LEVEL_M
    raw = cv2.QRCodeEncoder.create(params).encode(payload)
    modules = 4 * version + 17
    # The encoder adds its own margin; strip it and lay down our own.
    margin = (raw.shape[0] - modules) // 2
    symbol = raw[margin:margin + modules, margin:margin + modules]
    if symbol.shape != (modules, modules):
        raise SystemExit(f"unexpected encoder output for version {version}")
    padded = np.pad(symbol, quiet_modules, constant_values=255)
    return np.kron(padded, np.ones((module_px, module_px), dtype=np.uint8))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).parents[1] / "tests" / "data"))
    ap.add_argument("--module-px", type=int, default=8)
    ap.add_argument("--quiet", type=int, default=4)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for code_id, version, payload in CODES:
        img = render(version, payload, args.module_px, args.quiet)
        name = f"code{code_id:02d}.pgm"
        cv2.imwrite(str(out / name), img)
        rows.append(f"{code_id}\t{name}\t{version}\t{payload}")
    (out / "codes.tsv").write_text("id\tfile\tversion\tpayload\n" + "\n".join(rows) + "\n")


if __name__ == "__main__":
    main()
