#!/usr/bin/env python3
"""Decode one QR code with zxing-cpp; print its text and exit 0, or exit 1."""

import sys

import zxingcpp
from PIL import Image


def main() -> int:
    if len(sys.argv) != 2:
        print("usage: zxing_decode.py IMAGE", file=sys.stderr)
        return 2
    try:
        img = Image.open(sys.argv[1]).convert("L")
    except OSError as e:
        print(f"zxing_decode: {e}", file=sys.stderr)
        return 2
    found = zxingcpp.read_barcodes(img, formats=zxingcpp.BarcodeFormat.QRCode)
    if not found:
        return 1
    print(found[0].text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
