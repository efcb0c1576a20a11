#pragma once

// Affine memory model for ResNet-style networks and their homogeneous chain
// surrogates.
//
// Total memory for batch k at square image side w is
//
//   total(k, w) = weight_mb + k * act224_mb * (w / 224)^2
//
// where act224_mb is the activation memory of one sample at the 224x224
// reference resolution. The chain surrogate of depth l spreads act224_mb
// evenly over its l steps.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edgeckpt {

inline constexpr int kReferenceImage = 224;
inline constexpr double kDefaultCapacityMb = 2048.0;
inline constexpr double kCalibrationTolerance = 0.005;

struct CalibrationSample {
  int variant = 0;  // ResNet depth label, e.g. 18 or 152
  int batch = 1;
  int image = kReferenceImage;
  double total_mb = 0.0;
  std::optional<bool> shaded;  // published "does not fit" flag, when known

  friend bool operator==(const CalibrationSample&, const CalibrationSample&) = default;
};

struct ModelParams {
  int variant = 0;
  int depth = 0;  // chain length l; equals the variant label
  double weight_mb = 0.0;
  double act224_mb = 0.0;

  /// Activation memory of a single chain step for one sample at side `image`.
  double per_layer_act(int image) const;
};

class DeviceBudget {
 public:
  explicit DeviceBudget(double capacity_mb = kDefaultCapacityMb);

  double capacity_mb() const noexcept { return capacity_mb_; }

 private:
  double capacity_mb_;
};

/// (image / 224)^2; exactly 1.0 at the reference resolution.
double image_scale(int image);

/// Least-squares fit of total_mb = weight_mb + batch * act224_mb over samples
/// of one variant at the reference image size. Throws
/// kCalibrationUnderdetermined with fewer than two distinct batch sizes and
/// kBadData for a negative intercept or a residual above `tolerance`.
ModelParams calibrate(std::span<const CalibrationSample> samples,
                      double tolerance = kCalibrationTolerance);

/// Largest |predicted - total| / total over `samples`, using the image
/// scaling rule for samples away from the reference resolution.
double max_relative_residual(const ModelParams& params,
                             std::span<const CalibrationSample> samples);

/// Memory held by `units` chain-step activations at batch k and side w.
/// activation_mb(p, k, w, p.depth) is the full activation footprint.
double activation_mb(const ModelParams& params, int batch, int image, int units);

double memory_total(const ModelParams& params, int batch, int image);

/// Inclusive: a footprint equal to the capacity fits.
bool fits(const ModelParams& params, int batch, int image, const DeviceBudget& budget);

/// Depth of the deepest homogeneous chain with this model's per-step
/// activation size that trains without checkpointing. Throws kInfeasible
/// when the weights alone reach the capacity.
int n_max(const ModelParams& params, int batch, int image, const DeviceBudget& budget);

/// Calibration text format: one sample per line,
/// `variant batch image total_mb [shaded]` with shaded as 0 or 1.
/// Blank lines and lines starting with '#' are ignored.
std::vector<CalibrationSample> parse_samples(std::string_view text);
std::string format_samples(std::span<const CalibrationSample> samples);

}  // namespace edgeckpt
