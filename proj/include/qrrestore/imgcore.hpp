#pragma once

#include <utility>
#include <vector>

#include "qrrestore/fft.hpp"
#include "qrrestore/image.hpp"

namespace qrrestore {

/// Places the kernel on a W x H periodic grid with its center at (0, 0),
/// wrapping negative offsets. The kernel must fit: size <= min(W, H).
GrayImage circular_embed(const Kernel& k, int width, int height);

/// Circular convolution via the DFT. The kernel's middle element is the
/// origin, so a delta kernel is the identity. Throws DimensionError when the
/// kernel is larger than the image.
GrayImage convolve_periodic(const GrayImage& img, const Kernel& k);

/// Circular convolution with an arbitrary same-sized filter whose origin sits
/// at pixel (0, 0).
GrayImage convolve_periodic(const GrayImage& img, const GrayImage& filter_at_origin);

/// 2w x 2h even reflection; the original occupies the top-left quadrant.
GrayImage mirror_extend(const GrayImage& img);

/// Sub-raster copy of `anchor`. Throws DimensionError if it does not fit.
GrayImage center_crop(const GrayImage& img, const Region& anchor);

/// Region of extent w x h centered in img (offsets rounded down).
Region centered_region(const GrayImage& img, int w, int h);

/// Forward differences with replicate padding: the difference across the
/// right/bottom boundary is zero.
std::pair<GrayImage, GrayImage> grad_neumann(const GrayImage& img);

/// Negative adjoint of grad_neumann: <grad u, p> == -<u, div p>.
GrayImage div_neumann(const GrayImage& px, const GrayImage& py);

/// Forward differences on the periodic grid.
std::pair<GrayImage, GrayImage> grad_periodic(const GrayImage& img);

/// Euclidean distance between a and b restricted to r (plain pixel sum).
double l2_dist_on(const GrayImage& a, const GrayImage& b, const Region& r);

/// Flags (row-major over r) the pixels of r whose periodic
/// (2 radius + 1)^2 window lies entirely inside `known` (image sized).
std::vector<bool> fully_known_windows(const std::vector<bool>& known, int width, int height,
                                      const Region& r, int radius);

/// Affine map of [min, max] onto [0, 1]. A constant image maps to all zeros.
GrayImage normalize_unit_range(const GrayImage& img);

/// Multiplies every pixel so the image sums to one. Throws ParameterError on
/// zero total mass.
GrayImage normalize_unit_mass(const GrayImage& img);

}  // namespace qrrestore
