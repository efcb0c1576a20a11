#include "edgeckpt/cost_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "edgeckpt/error.hpp"

namespace edgeckpt {
namespace {

void require_valid(int batch, int image) {
  if (batch < 1) {
    throw Error(ErrorCode::kInvalidArgument, "batch must be >= 1, got " + std::to_string(batch));
  }
  if (image < 1) {
    throw Error(ErrorCode::kInvalidArgument, "image must be >= 1, got " + std::to_string(image));
  }
}

void require_valid(const ModelParams& params) {
  if (params.depth < 1) {
    throw Error(ErrorCode::kInvalidArgument, "model depth must be >= 1");
  }
  if (!(params.act224_mb > 0.0) || !(params.weight_mb >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "model parameters need weight_mb >= 0 and act224_mb > 0");
  }
}

std::string shortest(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

}  // namespace

double ModelParams::per_layer_act(int image) const {
  require_valid(*this);
  return act224_mb / depth * image_scale(image);
}

DeviceBudget::DeviceBudget(double capacity_mb) : capacity_mb_(capacity_mb) {
  if (!(capacity_mb > 0.0) || !std::isfinite(capacity_mb)) {
    throw Error(ErrorCode::kInvalidArgument, "device capacity must be a positive number of MB");
  }
}

double image_scale(int image) {
  const double w = image;
  return (w * w) / (double{kReferenceImage} * kReferenceImage);
}

ModelParams calibrate(std::span<const CalibrationSample> samples, double tolerance) {
  if (samples.empty()) {
    throw Error(ErrorCode::kCalibrationUnderdetermined, "no samples");
  }
  const int variant = samples.front().variant;
  std::set<int> batches;
  for (const auto& s : samples) {
    if (s.variant != variant) {
      throw Error(ErrorCode::kInvalidArgument, "calibration samples mix variants " +
                                                   std::to_string(variant) + " and " +
                                                   std::to_string(s.variant));
    }
    if (s.image != kReferenceImage) {
      throw Error(ErrorCode::kInvalidArgument,
                  "calibration samples must use image 224, got " + std::to_string(s.image));
    }
    if (s.batch < 1 || !(s.total_mb > 0.0)) {
      throw Error(ErrorCode::kBadData, "sample needs batch >= 1 and total_mb > 0");
    }
    batches.insert(s.batch);
  }
  if (batches.size() < 2) {
    throw Error(ErrorCode::kCalibrationUnderdetermined,
                "variant " + std::to_string(variant) + " needs at least two distinct batch sizes");
  }

  // Centered normal equations for y = a + b*x.
  const double n = static_cast<double>(samples.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& s : samples) {
    mean_x += s.batch;
    mean_y += s.total_mb;
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& s : samples) {
    const double dx = s.batch - mean_x;
    sxx += dx * dx;
    sxy += dx * (s.total_mb - mean_y);
  }
  const double slope = sxy / sxx;
  const double intercept = mean_y - slope * mean_x;

  if (intercept < 0.0) {
    throw Error(ErrorCode::kBadData, "fitted weight memory is negative for variant " +
                                         std::to_string(variant));
  }
  if (!(slope > 0.0)) {
    throw Error(ErrorCode::kBadData, "fitted activation memory is not positive for variant " +
                                         std::to_string(variant));
  }

  ModelParams params{variant, variant, intercept, slope};
  const double residual = max_relative_residual(params, samples);
  if (residual > tolerance) {
    throw Error(ErrorCode::kBadData, "variant " + std::to_string(variant) +
                                         " does not fit the affine model (max residual " +
                                         shortest(residual) + ")");
  }
  return params;
}

double max_relative_residual(const ModelParams& params,
                             std::span<const CalibrationSample> samples) {
  double worst = 0.0;
  for (const auto& s : samples) {
    const double predicted = memory_total(params, s.batch, s.image);
    worst = std::max(worst, std::abs(predicted - s.total_mb) / s.total_mb);
  }
  return worst;
}

double activation_mb(const ModelParams& params, int batch, int image, int units) {
  require_valid(params);
  require_valid(batch, image);
  if (units < 0) {
    throw Error(ErrorCode::kInvalidArgument, "activation units must be >= 0");
  }
  const double fraction = static_cast<double>(units) / params.depth;
  return batch * params.act224_mb * image_scale(image) * fraction;
}

double memory_total(const ModelParams& params, int batch, int image) {
  return params.weight_mb + activation_mb(params, batch, image, params.depth);
}

bool fits(const ModelParams& params, int batch, int image, const DeviceBudget& budget) {
  return memory_total(params, batch, image) <= budget.capacity_mb();
}

int n_max(const ModelParams& params, int batch, int image, const DeviceBudget& budget) {
  require_valid(params);
  require_valid(batch, image);
  const double free_mb = budget.capacity_mb() - params.weight_mb;
  if (!(free_mb > 0.0)) {
    throw Error(ErrorCode::kInfeasible, "weights alone (" + shortest(params.weight_mb) +
                                            " MB) exceed the device capacity (" +
                                            shortest(budget.capacity_mb()) + " MB)");
  }
  const double per_step = batch * params.per_layer_act(image);
  const double depth = free_mb / per_step;
  // Slack so that capacities built as W + n*step land on n, not n-1.
  return static_cast<int>(std::floor(depth * (1.0 + 1e-9)));
}

std::vector<CalibrationSample> parse_samples(std::string_view text) {
  std::vector<CalibrationSample> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    std::istringstream fields(line);
    CalibrationSample s;
    if (!(fields >> s.variant >> s.batch >> s.image >> s.total_mb)) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                         ": expected `variant batch image total_mb [shaded]`");
    }
    std::string flag;
    if (fields >> flag) {
      if (flag == "1") {
        s.shaded = true;
      } else if (flag == "0") {
        s.shaded = false;
      } else {
        throw Error(ErrorCode::kParse,
                    "line " + std::to_string(line_no) + ": shaded flag must be 0 or 1");
      }
    }
    std::string extra;
    if (fields >> extra) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_no) + ": trailing field `" + extra + "`");
    }
    if (s.variant < 1 || s.batch < 1 || s.image < 1 || !(s.total_mb > 0.0)) {
      throw Error(ErrorCode::kBadData, "line " + std::to_string(line_no) +
                                           ": fields must be positive");
    }
    out.push_back(s);
  }
  return out;
}

std::string format_samples(std::span<const CalibrationSample> samples) {
  std::string out = "# variant batch image total_mb shaded\n";
  for (const auto& s : samples) {
    out += std::to_string(s.variant) + ' ' + std::to_string(s.batch) + ' ' +
           std::to_string(s.image) + ' ' + shortest(s.total_mb);
    if (s.shaded) {
      out += *s.shaded ? " 1" : " 0";
    }
    out += '\n';
  }
  return out;
}

}  // namespace edgeckpt
