#include "edgeckpt/tables.hpp"

#include <algorithm>
#include <string>

#include "edgeckpt/error.hpp"

namespace edgeckpt {
namespace {

struct Row {
  int key;  // batch for table 1, image side for tables 2 and 3
  std::array<double, 5> values;
  std::array<bool, 5> shaded;
};

constexpr bool o = false;
constexpr bool X = true;

constexpr std::array<Row, 6> kTable1 = {{
    {1, {230.05, 413.00, 620.27, 1027.21, 1410.62}, {o, o, o, o, o}},
    {3, {340.05, 580.42, 1091.11, 1732.33, 2405.14}, {o, o, o, o, X}},
    {5, {450.06, 747.85, 1561.94, 2437.45, 3399.67}, {o, o, o, X, X}},
    {10, {725.07, 1166.42, 2739.04, 4200.25, 5885.98}, {o, o, X, X, X}},
    {30, {1825.13, 2840.70, 7447.42, 11251.43, 15831.23}, {o, X, X, X, X}},
    {50, {2925.18, 4514.97, 12155.79, 18302.62, 25776.48}, {X, X, X, X, X}},
}};

constexpr std::array<Row, 6> kTable2 = {{
    {224, {230.05, 413.00, 620.27, 1027.21, 1410.62}, {o, o, o, o, o}},
    {350, {309.83, 534.96, 964.66, 1543.72, 2139.75}, {o, o, o, o, X}},
    {500, {449.21, 749.73, 1570.93, 2472.72, 3458.50}, {o, o, o, X, X}},
    {650, {639.07, 1039.08, 2387.54, 3682.00, 5161.76}, {o, o, X, X, X}},
    {1100, {1496.10, 2346.95, 6073.06, 9208.30, 12961.96}, {o, X, X, X, X}},
    {1500, {2628.70, 4075.07, 10944.42, 16515.11, 23277.27}, {X, X, X, X, X}},
}};

constexpr std::array<Row, 4> kTable3 = {{
    {224, {0.60, 0.98, 2.22, 3.41, 4.78}, {o, o, X, X, X}},
    {350, {1.22, 1.93, 4.90, 7.45, 10.47}, {o, o, X, X, X}},
    {500, {2.31, 3.60, 9.63, 14.69, 20.76}, {X, X, X, X, X}},
    {650, {3.79, 5.86, 15.99, 24.13, 34.06}, {X, X, X, X, X}},
}};

constexpr int kTable3Batch = 8;
constexpr double kMbPerGb = 1024.0;

std::vector<TableCell> build_cells() {
  std::vector<TableCell> cells;
  for (const auto& row : kTable1) {
    for (std::size_t v = 0; v < kVariants.size(); ++v) {
      cells.push_back({1,
                       {kVariants[v], row.key, kReferenceImage, row.values[v], row.shaded[v]},
                       row.values[v],
                       PublishedUnit::kMegabytes});
    }
  }
  for (const auto& row : kTable2) {
    for (std::size_t v = 0; v < kVariants.size(); ++v) {
      cells.push_back({2,
                       {kVariants[v], 1, row.key, row.values[v], row.shaded[v]},
                       row.values[v],
                       PublishedUnit::kMegabytes});
    }
  }
  for (const auto& row : kTable3) {
    for (std::size_t v = 0; v < kVariants.size(); ++v) {
      cells.push_back({3,
                       {kVariants[v], kTable3Batch, row.key, row.values[v] * kMbPerGb,
                        row.shaded[v]},
                       row.values[v],
                       PublishedUnit::kGigabytes});
    }
  }
  return cells;
}

void require_known_variant(int variant) {
  if (std::find(kVariants.begin(), kVariants.end(), variant) == kVariants.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no built-in data for ResNet" + std::to_string(variant));
  }
}

}  // namespace

std::span<const TableCell> builtin_tables() {
  static const std::vector<TableCell> cells = build_cells();
  return cells;
}

std::vector<TableCell> table_cells(int table) {
  std::vector<TableCell> out;
  for (const auto& cell : builtin_tables()) {
    if (cell.table == table) {
      out.push_back(cell);
    }
  }
  return out;
}

std::optional<TableCell> find_cell(int variant, int batch, int image) {
  for (const auto& cell : builtin_tables()) {
    if (cell.sample.variant == variant && cell.sample.batch == batch &&
        cell.sample.image == image) {
      return cell;
    }
  }
  return std::nullopt;
}

std::vector<CalibrationSample> reference_samples(int variant) {
  require_known_variant(variant);
  std::vector<CalibrationSample> out;
  for (const auto& cell : builtin_tables()) {
    if (cell.table == 1 && cell.sample.variant == variant) {
      out.push_back(cell.sample);
    }
  }
  return out;
}

ModelParams builtin_params(int variant) {
  const auto samples = reference_samples(variant);
  return calibrate(samples);
}

std::vector<ModelParams> builtin_params() {
  std::vector<ModelParams> out;
  for (int v : kVariants) {
    out.push_back(builtin_params(v));
  }
  return out;
}

double table_tolerance(int table) {
  return table == 1 ? 0.005 : 0.02;
}

}  // namespace edgeckpt
