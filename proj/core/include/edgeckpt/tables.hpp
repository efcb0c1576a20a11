#pragma once

// Published ResNet memory footprints (weights + activations) for batch and
// image-size sweeps, embedded cell by cell with their "does not fit in 2 GB"
// shading.
//
//   table 1: image 224, batch in {1,3,5,10,30,50}, MB
//   table 2: batch 1, image in {224,350,500,650,1100,1500}, MB
//   table 3: batch 8, image in {224,350,500,650}, GB (1 GB = 1024 MB)

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "edgeckpt/cost_model.hpp"

namespace edgeckpt {

inline constexpr std::array<int, 5> kVariants = {18, 34, 50, 101, 152};

enum class PublishedUnit { kMegabytes, kGigabytes };

struct TableCell {
  int table = 0;
  CalibrationSample sample;  // total_mb converted to MB, shaded always set
  double published = 0.0;    // value as printed, in `unit`
  PublishedUnit unit = PublishedUnit::kMegabytes;

  bool shaded() const { return sample.shaded.value_or(false); }
};

/// Every cell of the three tables, in table, row, column order.
std::span<const TableCell> builtin_tables();

std::vector<TableCell> table_cells(int table);

/// First cell (in table order) with this variant, batch and image.
std::optional<TableCell> find_cell(int variant, int batch, int image);

/// The six image-224 rows of table 1 for one variant.
std::vector<CalibrationSample> reference_samples(int variant);

/// Table-1 calibration of one variant, or of all five.
ModelParams builtin_params(int variant);
std::vector<ModelParams> builtin_params();

/// Relative tolerance the affine model is held to for a given table.
double table_tolerance(int table);

}  // namespace edgeckpt
