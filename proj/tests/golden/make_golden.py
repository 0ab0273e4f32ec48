#!/usr/bin/env python3
"""Writes the committed golden files with an encoder independent of the C++ code.

Run from this directory; the outputs are committed and must never change.
"""
import struct

# S=2, K=3, H=2, W=2, sample-major, then class, then row, then column.
# Per (sample, pixel) the three class scores sum to one.
PIXELS = [
    # sample 0: (class0, class1, class2) per pixel in row-major order
    [(0.5, 0.25, 0.25), (0.125, 0.375, 0.5), (0.1, 0.2, 0.7), (1.0, 0.0, 0.0)],
    # sample 1
    [(0.25, 0.5, 0.25), (0.0, 0.0, 1.0), (0.3, 0.3, 0.4), (0.0625, 0.9375, 0.0)],
]
S, K, H, W = 2, 3, 2, 2

payload = []
for s in range(S):
    for k in range(K):
        for p in range(H * W):
            payload.append(PIXELS[s][p][k])

with open("small.elsm", "wb") as f:
    f.write(b"ELSM")
    f.write(struct.pack("<HBBIIII", 1, 0, 0, S, K, H, W))
    f.write(struct.pack("<%df" % len(payload), *payload))

labels = bytes([0, 1, 2, 3, 4, 5, 6, 7, 2, 2, 6, 6])  # 4 wide, 3 high
with open("labels.pgm", "wb") as f:
    f.write(b"P5\n4 3\n255\n" + labels)

warning = bytes([0, 255, 255, 0, 0, 0])  # 3 wide, 2 high
with open("warning.pgm", "wb") as f:
    f.write(b"P5\n3 2\n255\n" + warning)
