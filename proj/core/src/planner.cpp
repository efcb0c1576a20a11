#include "edgeckpt/planner.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "edgeckpt/chain.hpp"
#include "edgeckpt/error.hpp"

namespace edgeckpt {

ChainProfile::ChainProfile(int length)
    : length_(length), table_(std::max(1, length), std::max(1, length - 1)) {
  if (length < 1) {
    throw Error(ErrorCode::kInvalidArgument, "chain length must be >= 1");
  }
  const int max_c = std::max(1, length - 1);
  peak_live_.reserve(static_cast<std::size_t>(max_c));
  for (int c = 1; c <= max_c; ++c) {
    const auto stats = execute(revolve_schedule(table_, length, c));
    if (!stats.legal || stats.advances != table_.min_advances(length, c)) {
      throw std::logic_error("revolve schedule failed replay for l=" + std::to_string(length) +
                             " c=" + std::to_string(c));
    }
    peak_live_.push_back(stats.peak_live);
  }
}

int ChainProfile::clamp(int slots) const {
  if (slots < 1) {
    throw Error(ErrorCode::kInfeasible, "at least one checkpoint slot is required");
  }
  return std::min(slots, max_slots());
}

int ChainProfile::peak_live(int slots) const { return peak_live_[clamp(slots) - 1]; }

std::int64_t ChainProfile::advances(int slots) const {
  return table_.min_advances(length_, clamp(slots));
}

double ChainProfile::rho(int slots, double backward_ratio) const {
  return schedule_time(length_, advances(slots), backward_ratio) /
         baseline_time(length_, backward_ratio);
}

int ChainProfile::min_slots_for_rho(double rho, double backward_ratio) const {
  return edgeckpt::min_slots_for_rho(table_, length_, rho, backward_ratio);
}

std::vector<double> default_rho_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) {
    grid.push_back(1.0 + i * 0.05);
  }
  return grid;
}

void SweepConfig::validate() const {
  if (batch < 1 || image < 1) {
    throw Error(ErrorCode::kInvalidArgument, "batch and image must be >= 1");
  }
  if (!(backward_ratio > 0.0) || !std::isfinite(backward_ratio)) {
    throw Error(ErrorCode::kInvalidArgument, "backward ratio must be > 0");
  }
  if (rho_grid.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "rho grid is empty");
  }
  if (!(rho_grid.front() >= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rho grid must start at or above 1");
  }
  for (std::size_t i = 1; i < rho_grid.size(); ++i) {
    if (!(rho_grid[i] > rho_grid[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "rho grid must be strictly increasing");
    }
  }
  for (const auto& p : variants) {
    if (p.depth < 1 || !(p.act224_mb > 0.0) || !(p.weight_mb >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "variant " + std::to_string(p.variant) + " is not calibrated");
    }
  }
}

double checkpointed_peak_mb(const ModelParams& params, const ChainProfile& profile, int batch,
                            int image, int slots) {
  return params.weight_mb + activation_mb(params, batch, image, profile.peak_live(slots));
}

std::vector<RhoCurve> sweep(const SweepConfig& config) {
  config.validate();
  std::vector<RhoCurve> curves;
  for (const auto& params : config.variants) {
    const ChainProfile profile(params.depth);
    RhoCurve curve{params, config.batch, config.image, {}};
    for (double rho : config.rho_grid) {
      RhoCurvePoint point;
      point.rho = rho;
      try {
        point.slots = profile.min_slots_for_rho(rho, config.backward_ratio);
      } catch (const Error& e) {
        point.error = e.what();
        curve.points.push_back(point);
        continue;
      }
      point.peak_live = profile.peak_live(point.slots);
      point.peak_mb = checkpointed_peak_mb(params, profile, config.batch, config.image,
                                           point.slots);
      point.feasible = point.peak_mb <= config.budget.capacity_mb();
      curve.points.push_back(point);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

double rho_threshold(const ModelParams& params, int batch, int image,
                     const DeviceBudget& budget, double backward_ratio) {
  const ChainProfile profile(params.depth);
  return rho_threshold(params, profile, batch, image, budget, backward_ratio);
}

double rho_threshold(const ModelParams& params, const ChainProfile& profile, int batch,
                     int image, const DeviceBudget& budget, double backward_ratio) {
  if (profile.length() != params.depth) {
    throw Error(ErrorCode::kInvalidArgument, "profile length does not match model depth");
  }
  if (fits(params, batch, image, budget)) {
    return 1.0;
  }
  if (checkpointed_peak_mb(params, profile, batch, image, 1) > budget.capacity_mb()) {
    throw Error(ErrorCode::kNeverFits,
                "ResNet" + std::to_string(params.variant) +
                    " exceeds the device even with one checkpoint slot");
  }
  double best = std::numeric_limits<double>::infinity();
  for (int c = 1; c <= profile.max_slots(); ++c) {
    if (checkpointed_peak_mb(params, profile, batch, image, c) <= budget.capacity_mb()) {
      best = std::min(best, profile.rho(c, backward_ratio));
    }
  }
  return best;
}

std::vector<FeasibilityRow> feasibility_report(std::span<const ModelParams> variants,
                                               const DeviceBudget& budget,
                                               std::span<const Scenario> scenarios,
                                               std::span<const double> rho_values,
                                               double backward_ratio) {
  std::vector<FeasibilityRow> rows;
  for (const auto& params : variants) {
    if (scenarios.empty()) break;
    const ChainProfile profile(params.depth);
    for (const auto& sc : scenarios) {
      FeasibilityRow row;
      row.variant = params.variant;
      row.depth = params.depth;
      row.batch = sc.batch;
      row.image = sc.image;
      row.full_mb = memory_total(params, sc.batch, sc.image);
      row.fits_without_checkpointing = fits(params, sc.batch, sc.image, budget);
      try {
        row.rho_star =
            rho_threshold(params, profile, sc.batch, sc.image, budget, backward_ratio);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNeverFits) throw;
      }
      for (double rho : rho_values) {
        row.slots_at_rho.emplace_back(rho, profile.min_slots_for_rho(rho, backward_ratio));
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const RhoCurve> curves) {
  out << "variant,depth,batch,image,rho,slots,peak_live,peak_mb,feasible\n";
  std::ostringstream line;
  line << std::fixed << std::setprecision(2);
  for (const auto& curve : curves) {
    for (const auto& p : curve.points) {
      line.str("");
      line << curve.params.variant << ',' << curve.params.depth << ',' << curve.batch << ','
           << curve.image << ',' << p.rho << ',' << p.slots << ',' << p.peak_live << ','
           << p.peak_mb << ',' << (p.feasible ? 1 : 0) << '\n';
      out << line.str();
    }
  }
}

}  // namespace edgeckpt
