"""
Building Daubechies filters
===========================

The filters come from factoring the Daubechies polynomial rather than a
lookup table. Here we build a few, then check the properties they must have.
"""

import numpy as np

from wavecluster import make_daubechies

np.set_printoptions(precision=6, suppress=True)

# db1 is the Haar pair
haar = make_daubechies(1)
print("db1 low-pass ", haar.dec_lo)
print("db1 high-pass", haar.dec_hi)

# db4 has 8 taps and annihilates cubics
db4 = make_daubechies(4)
print("db4 low-pass ", db4.dec_lo)
print("sum", db4.dec_lo.sum(), "vs sqrt(2)", np.sqrt(2))

# even shifts of the low-pass filter are orthonormal
g = db4.dec_lo
for m in range(4):
    print(f"<g, g shifted by {2 * m}> = {np.dot(g[2 * m:], g[:len(g) - 2 * m]):+.2e}")

# the high-pass filter has zero moments up to degree 3
k = np.arange(8) / 7
print("moments", [float(np.sum(db4.dec_hi * k ** p)) for p in range(5)])

# longer filters have smoother, wider impulse responses
for M in (2, 6, 10):
    w = make_daubechies(M)
    print(f"db{M}: {len(w.dec_lo)} taps, largest tap {np.abs(w.dec_lo).max():.4f}")
