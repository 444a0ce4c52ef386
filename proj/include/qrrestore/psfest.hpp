#pragma once

#include <vector>

#include "qrrestore/image.hpp"

namespace qrrestore {

struct PsfEstimateConfig {
  double lambda1 = 10000.0;
  /// Odd kernel sides to try. Empty means every odd size up to the C1 side.
  std::vector<int> candidate_sizes;
};

/// Every odd size from 1 up to `extent`.
std::vector<int> default_candidate_sizes(int extent);

/// Minimizes (1/2)|grad phi|^2 + (lambda1/2)|phi * z - u1|^2 over the
/// mirror-extended corners with periodic boundary, in closed form:
///
///   phi^ = lambda1 conj(z^) u1^ / (L + lambda1 |z^|^2),
///   L(k, l) = 4 - 2 cos(2 pi k / W) - 2 cos(2 pi l / H).
///
/// Both corners are scaled to unit mass first. The result is the corner-sized
/// window of phi with its origin at (w/2, h/2). lambda1 == 0 yields the flat
/// (all-ones) field, whose truncations are the flat kernels.
/// Throws ParameterError for lambda1 < 0.
GrayImage estimate_psf_full(const GrayImage& u1_corner, const GrayImage& z_corner, double lambda1);

/// The same minimizer on the whole 2w x 2h periodic grid, origin at (0, 0).
GrayImage estimate_psf_periodic(const GrayImage& u1_corner, const GrayImage& z_corner,
                                double lambda1);

/// Keeps the centered size x size block, clamps negatives to zero and
/// renormalizes. Throws ParameterError("degenerate kernel") when nothing
/// positive survives.
Kernel truncate_and_normalize(const GrayImage& phi_full, int size);

struct KernelSelection {
  Kernel kernel = Kernel::delta();
  std::vector<int> sizes;
  /// Squared C1 residual per size; +inf where truncation was degenerate.
  std::vector<double> scores;
};

/// Squared C1 residual |phi * z - u1|^2 with periodic convolution over the
/// full image. With `known` (image-sized), only C1 pixels whose kernel window
/// is fully known are summed, and the sum is rescaled to the C1 pixel count;
/// throws ParameterError when no such pixel exists.
double c1_residual(const GrayImage& z, const GrayImage& u1, const Kernel& phi, const Region& c1,
                   const std::vector<bool>* known = nullptr);

/// Truncates phi_full at every candidate size and keeps the lowest C1
/// residual; ties go to the smaller size.
KernelSelection select_kernel(const GrayImage& phi_full, const GrayImage& z, const GrayImage& u1,
                              const Region& c1, const PsfEstimateConfig& cfg,
                              const std::vector<bool>* known = nullptr);

/// Same scoring over flat kernels of the candidate sizes.
KernelSelection uniform_psf(const GrayImage& z, const GrayImage& u1, const Region& c1,
                            const std::vector<int>& sizes, const std::vector<bool>* known = nullptr);

}  // namespace qrrestore
