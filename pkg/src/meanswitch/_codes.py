"""Integer codes and numeric policies shared by both kernel backends.

The kernels encode a generator as a length-5 float64 vector
``[kind, p1, p2, wrap_a, wrap_b]`` and a product-space kernel as a
length-7 float64 vector ``[ktype, ...]``; the constants below give the
meaning of each code.
"""

# generator kinds
KIND_ID = 0
KIND_AFFINE = 1      # p1*x + p2
KIND_POW = 2         # x**p1, interval must stay positive
KIND_EXP = 3         # exp(p1*x)
KIND_LOG = 4         # ln(x), interval must stay positive

# product-space kernels
KERNEL_BILINEAR = 0  # c00 + c10*x + c01*y + c11*x*y
KERNEL_STEP = 1      # four-rectangle step function with cuts (s, t)

# status codes returned next to kernel values
STATUS_OK = 0
STATUS_CLAMPED = 1       # sum nudged back onto the image hull (rounding noise)
STATUS_OUT_OF_IMAGE = 2  # sum left the hull by more than the tolerance: a bug

# a generator sum may exceed the image hull by this fraction of the hull
# width before it is treated as an error rather than rounding noise
EXCEEDANCE_REL = 1e-9

# weighted sums run left-to-right up to this many terms, pairwise above
PAIRWISE_BLOCK = 32
