#pragma once

// Peak memory versus recompute factor for chain surrogates of calibrated
// models. Peak memory of a checkpointed run is
//
//   weight_mb + peak_live(c) * batch * per_layer_act(image)
//
// with peak_live taken from a simulator replay of the optimal schedule.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "edgeckpt/cost_model.hpp"
#include "edgeckpt/revolve.hpp"

namespace edgeckpt {

/// DP table plus replayed peak occupancy of the optimal schedule for every
/// slot count of one chain length.
class ChainProfile {
 public:
  explicit ChainProfile(int length);

  int length() const noexcept { return length_; }
  int max_slots() const noexcept { return static_cast<int>(peak_live_.size()); }
  const DpTable& table() const noexcept { return table_; }

  /// Slot counts are clamped to [1, max_slots()].
  int peak_live(int slots) const;
  std::int64_t advances(int slots) const;
  double rho(int slots, double backward_ratio) const;
  int min_slots_for_rho(double rho, double backward_ratio) const;

 private:
  int clamp(int slots) const;

  int length_;
  DpTable table_;
  std::vector<int> peak_live_;  // index c - 1
};

std::vector<double> default_rho_grid();

struct SweepConfig {
  std::vector<ModelParams> variants;
  int batch = 1;
  int image = kReferenceImage;
  DeviceBudget budget;
  std::vector<double> rho_grid = default_rho_grid();
  double backward_ratio = 1.0;

  /// Throws kInvalidArgument on an empty or non-increasing grid, a grid
  /// starting below 1, or non-positive batch, image or backward ratio.
  void validate() const;
};

struct RhoCurvePoint {
  double rho = 1.0;
  int slots = 0;
  int peak_live = 0;
  double peak_mb = 0.0;
  bool feasible = false;
  std::optional<std::string> error;  // set when no slot count meets rho
};

struct RhoCurve {
  ModelParams params;
  int batch = 1;
  int image = kReferenceImage;
  std::vector<RhoCurvePoint> points;
};

std::vector<RhoCurve> sweep(const SweepConfig& config);

/// Peak MB of the optimal schedule with `slots` slots.
double checkpointed_peak_mb(const ModelParams& params, const ChainProfile& profile, int batch,
                            int image, int slots);

/// Smallest recompute factor at which the chain fits the budget: 1 when full
/// storage fits, otherwise the least rho over slot counts whose peak fits.
/// Throws kNeverFits when even a single slot plus the transient buffer is
/// too large.
double rho_threshold(const ModelParams& params, int batch, int image,
                     const DeviceBudget& budget, double backward_ratio = 1.0);
double rho_threshold(const ModelParams& params, const ChainProfile& profile, int batch,
                     int image, const DeviceBudget& budget, double backward_ratio = 1.0);

struct Scenario {
  int batch = 1;
  int image = kReferenceImage;
};

struct FeasibilityRow {
  int variant = 0;
  int depth = 0;
  int batch = 1;
  int image = kReferenceImage;
  double full_mb = 0.0;
  bool fits_without_checkpointing = false;
  std::optional<double> rho_star;  // empty when it never fits
  std::vector<std::pair<double, int>> slots_at_rho;
};

std::vector<FeasibilityRow> feasibility_report(std::span<const ModelParams> variants,
                                               const DeviceBudget& budget,
                                               std::span<const Scenario> scenarios,
                                               std::span<const double> rho_values = {},
                                               double backward_ratio = 1.0);

/// Header: variant,depth,batch,image,rho,slots,peak_live,peak_mb,feasible.
/// rho and peak_mb use two decimals; feasible is 1 or 0.
void write_sweep_csv(std::ostream& out, std::span<const RhoCurve> curves);

}  // namespace edgeckpt
