"""Independent reference values frozen into the C++ unit tests.

Run with numpy/scipy; the printed numbers are pasted into tests/*.cpp.
"""
import numpy as np
from scipy.signal import convolve2d


def circular_conv(img, k):
    h, w = img.shape
    r = k.shape[0] // 2
    out = np.zeros_like(img)
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for j in range(-r, r + 1):
                for i in range(-r, r + 1):
                    acc += k[j + r, i + r] * img[(y - j) % h, (x - i) % w]
            out[y, x] = acc
    return out


def gaussian(n, s):
    r = n // 2
    y, x = np.mgrid[-r:r + 1, -r:r + 1]
    g = np.exp(-(x * x + y * y) / (2.0 * s * s))
    return g / g.sum()


def show(name, a):
    print(name)
    for row in np.atleast_2d(a):
        print("  " + ", ".join(repr(float(v)) for v in row) + ",")


ramp = np.arange(16, dtype=float).reshape(4, 4)
show("ramp4 (*) uniform3, circular", circular_conv(ramp, np.full((3, 3), 1.0 / 9.0)))

show("gaussian(3, 0.5)", gaussian(3, 0.5))

checker = np.indices((8, 8)).sum(axis=0) % 2 * 1.0
show("checker8 (*) gaussian(3,1), zero padded", convolve2d(checker, gaussian(3, 1.0), mode="same"))

# Weight at a unit step: forward difference 1 at the edge column, smoothed by
# the normalized 1D Gaussian (sigma 1, radius 3); the orthogonal pass is flat.
k = np.exp(-np.arange(-3, 4) ** 2 / 2.0)
peak = 1.0 / k.sum()
print("alpha at unit step, beta 0.05:", repr(1.0 / np.sqrt(1.0 + (peak / 0.05) ** 2)))
