#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "edgeckpt/chain.hpp"
#include "edgeckpt/cost_model.hpp"
#include "edgeckpt/error.hpp"
#include "edgeckpt/planner.hpp"
#include "edgeckpt/revolve.hpp"
#include "edgeckpt/tables.hpp"
#include "edgeckpt/uniform.hpp"

namespace edgeckpt::cli {
namespace {

// Raised for flag combinations CLI11 cannot validate on its own.
struct UsageError {
  std::string message;
};

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw UsageError{"cannot read " + path};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes to `path`, or to `fallback` when path is empty or "-".
template <typename Fn>
void with_output(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw UsageError{"cannot write " + path};
  }
  fn(file);
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  const auto number = [&](const std::string& token) {
    try {
      std::size_t used = 0;
      const double v = std::stod(token, &used);
      if (used != token.size() || !std::isfinite(v)) throw std::invalid_argument(token);
      return v;
    } catch (const std::logic_error&) {
      throw UsageError{"bad rho grid value `" + token + "`"};
    }
  };
  if (const auto colon = text.find(':'); colon != std::string::npos) {
    const auto second = text.find(':', colon + 1);
    if (second == std::string::npos) {
      throw UsageError{"rho grid range must be start:stop:step"};
    }
    const double start = number(text.substr(0, colon));
    const double stop = number(text.substr(colon + 1, second - colon - 1));
    const double step = number(text.substr(second + 1));
    if (!(step > 0.0) || stop < start) {
      throw UsageError{"rho grid range needs step > 0 and stop >= start"};
    }
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i) {
      // Round off accumulated binary error so that 1.0:3.0:0.05 yields 1.15, not 1.1500000000000001.
      grid.push_back(std::round((start + i * step) * 1e9) / 1e9);
    }
    return grid;
  }
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    grid.push_back(number(token));
  }
  return grid;
}

std::map<int, ModelParams> load_calibration(const std::string& path) {
  std::map<int, ModelParams> params;
  if (path.empty()) {
    for (const auto& p : builtin_params()) params.emplace(p.variant, p);
    return params;
  }
  std::map<int, std::vector<CalibrationSample>> by_variant;
  for (const auto& s : parse_samples(read_file(path))) {
    if (s.image == kReferenceImage) by_variant[s.variant].push_back(s);
  }
  for (const auto& [variant, samples] : by_variant) {
    params.emplace(variant, calibrate(samples));
  }
  return params;
}

// ---------------------------------------------------------------------------
// tables

struct TablesOptions {
  std::vector<int> variants;
  double capacity = kDefaultCapacityMb;
  bool check = false;
  bool check_shading = false;
};

int cmd_tables(const TablesOptions& opt, std::ostream& out, std::ostream& err) {
  const DeviceBudget budget(opt.capacity);
  const bool published_shading = opt.capacity == kDefaultCapacityMb;
  std::map<int, ModelParams> params;
  for (const auto& p : builtin_params()) params.emplace(p.variant, p);
  for (int v : opt.variants) {
    if (!params.count(v)) throw UsageError{"no built-in data for variant " + std::to_string(v)};
  }

  out << "table variant batch image unit published predicted rel_err_pct tol_pct "
         "shaded_published shaded_predicted\n";
  int cells = 0;
  int over_tolerance = 0;
  int shading_mismatch = 0;
  for (const auto& cell : builtin_tables()) {
    const auto& s = cell.sample;
    if (!opt.variants.empty() &&
        std::find(opt.variants.begin(), opt.variants.end(), s.variant) == opt.variants.end()) {
      continue;
    }
    const auto& p = params.at(s.variant);
    const double predicted_mb = memory_total(p, s.batch, s.image);
    const bool gb = cell.unit == PublishedUnit::kGigabytes;
    const double predicted = gb ? predicted_mb / 1024.0 : predicted_mb;
    const double rel = std::abs(predicted - cell.published) / cell.published;
    const double tol = table_tolerance(cell.table);
    const bool shaded = !fits(p, s.batch, s.image, budget);
    ++cells;
    if (rel > tol) ++over_tolerance;
    if (published_shading && shaded != cell.shaded()) ++shading_mismatch;

    out << cell.table << ' ' << s.variant << ' ' << s.batch << ' ' << s.image << ' '
        << (gb ? "GB" : "MB") << ' ' << fixed(cell.published, 2) << ' '
        << fixed(predicted, gb ? 4 : 2) << ' ' << fixed(100.0 * rel, 3) << ' '
        << fixed(100.0 * tol, 1) << ' '
        << (published_shading ? (cell.shaded() ? "1" : "0") : "-") << ' ' << (shaded ? 1 : 0)
        << (rel > tol ? " OVER" : "")
        << (published_shading && shaded != cell.shaded() ? " MISMATCH" : "") << '\n';
  }

  out << "summary cells=" << cells << " over_tolerance=" << over_tolerance;
  if (published_shading) {
    out << " shading_mismatches=" << shading_mismatch << '\n';
  } else {
    out << " shading_mismatches=n/a\n";
    if (opt.check_shading) {
      out << "note: published shading is defined at 2048 MB only; flags above are recomputed\n";
    }
  }

  if (opt.check && over_tolerance > 0) {
    err << "tolerance-failure: " << over_tolerance << " of " << cells
        << " cells exceed the table tolerance\n";
    return kExitFailure;
  }
  if ((opt.check || opt.check_shading) && published_shading && shading_mismatch > 0) {
    err << "shading-mismatch: " << shading_mismatch << " of " << cells
        << " cells disagree with the published shading\n";
    return kExitFailure;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// schedule

struct ScheduleOptions {
  std::string strategy;
  int length = 0;
  std::optional<int> slots;
  std::optional<int> segments;
  std::string out_path;
  std::string from_path;
  bool replay = false;
  double backward_ratio = 1.0;
};

std::string replay_line(const ExecStats& stats, int length, double b) {
  std::string line = "# replay legal=" + std::string(stats.legal ? "1" : "0") +
                     " advances=" + std::to_string(stats.advances) +
                     " reverses=" + std::to_string(stats.reverses) +
                     " peak_slots=" + std::to_string(stats.peak_slots) +
                     " peak_live=" + std::to_string(stats.peak_live);
  if (stats.legal) {
    line += " rho=" + fixed(recompute_factor(stats, length, b), 4);
  } else if (stats.violation) {
    line += " position=" + std::to_string(stats.violation->position);
    if (stats.violation->action) line += " action=\"" + to_string(*stats.violation->action) + "\"";
    line += " rule=\"" + stats.violation->rule + "\"";
  }
  return line + '\n';
}

int cmd_schedule(const ScheduleOptions& opt, std::ostream& out, std::ostream& err) {
  if (!opt.from_path.empty()) {
    const auto schedule = parse_schedule(read_file(opt.from_path));
    const auto stats = execute(schedule);
    out << replay_line(stats, schedule.length, opt.backward_ratio);
    if (!stats.legal) {
      err << "illegal-schedule: " << stats.violation->rule << '\n';
      return kExitFailure;
    }
    return kExitOk;
  }

  if (opt.length < 1) throw UsageError{"-l must be >= 1"};
  Schedule schedule;
  if (opt.strategy == "revolve") {
    if (!opt.slots) throw UsageError{"--strategy revolve needs -c"};
    if (*opt.slots < 0) throw UsageError{"-c must be >= 0"};
    schedule = revolve_schedule(opt.length, *opt.slots);
  } else if (opt.strategy == "uniform") {
    if (!opt.segments) throw UsageError{"--strategy uniform needs -s"};
    schedule = uniform_schedule(opt.length, *opt.segments);
  } else {
    throw UsageError{"--strategy must be revolve or uniform"};
  }

  with_output(opt.out_path, out, [&](std::ostream& os) { os << format_schedule(schedule); });
  if (opt.replay) {
    const auto stats = execute(schedule);
    out << replay_line(stats, schedule.length, opt.backward_ratio);
    if (!stats.legal) {
      err << "illegal-schedule: " << stats.violation->rule << '\n';
      return kExitFailure;
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
  std::vector<int> variants;
  int batch = 1;
  int image = kReferenceImage;
  double capacity = kDefaultCapacityMb;
  double backward_ratio = 1.0;
  std::string grid;
  std::string out_path;
  std::string calibration_path;
};

int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  const auto available = load_calibration(opt.calibration_path);
  SweepConfig config;
  config.batch = opt.batch;
  config.image = opt.image;
  config.budget = DeviceBudget(opt.capacity);
  config.backward_ratio = opt.backward_ratio;
  if (!opt.grid.empty()) config.rho_grid = parse_grid(opt.grid);
  if (opt.variants.empty()) {
    for (const auto& [v, p] : available) config.variants.push_back(p);
  } else {
    for (int v : opt.variants) {
      const auto it = available.find(v);
      if (it == available.end()) throw UsageError{"no calibration for variant " + std::to_string(v)};
      config.variants.push_back(it->second);
    }
  }
  try {
    config.validate();
  } catch (const Error& e) {
    throw UsageError{e.what()};
  }

  const auto curves = sweep(config);
  with_output(opt.out_path, out, [&](std::ostream& os) { write_sweep_csv(os, curves); });

  std::ostream& report = opt.out_path.empty() || opt.out_path == "-" ? err : out;
  int never = 0;
  for (const auto& p : config.variants) {
    try {
      const double star =
          rho_threshold(p, config.batch, config.image, config.budget, config.backward_ratio);
      report << "rho_star variant=" << p.variant << " value=" << fixed(star, 4) << '\n';
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNeverFits) throw;
      report << "rho_star variant=" << p.variant << " value=none\n";
      ++never;
    }
  }
  if (never > 0) {
    err << "never-fits: " << never << " variant(s) exceed the device at every recompute factor\n";
    return kExitFailure;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// calibrate

struct CalibrateOptions {
  std::string input_path;
  std::string dump_path;
};

int cmd_calibrate(const CalibrateOptions& opt, std::ostream& out, std::ostream&) {
  if (!opt.dump_path.empty()) {
    std::vector<CalibrationSample> samples;
    for (const auto& cell : table_cells(1)) samples.push_back(cell.sample);
    with_output(opt.dump_path, out, [&](std::ostream& os) { os << format_samples(samples); });
    return kExitOk;
  }

  std::vector<CalibrationSample> samples;
  if (opt.input_path.empty()) {
    for (const auto& cell : table_cells(1)) samples.push_back(cell.sample);
  } else {
    samples = parse_samples(read_file(opt.input_path));
  }
  std::map<int, std::vector<CalibrationSample>> reference;
  std::map<int, std::vector<CalibrationSample>> all;
  for (const auto& s : samples) {
    all[s.variant].push_back(s);
    if (s.image == kReferenceImage) reference[s.variant].push_back(s);
  }
  for (const auto& [variant, group] : all) {
    if (!reference.count(variant)) {
      throw Error(ErrorCode::kCalibrationUnderdetermined,
                  "variant " + std::to_string(variant) + " has no image-224 samples");
    }
    const auto p = calibrate(reference.at(variant));
    out << "variant=" << variant << " depth=" << p.depth
        << " weight_mb=" << fixed(p.weight_mb, 4) << " act224_mb=" << fixed(p.act224_mb, 4)
        << " per_layer_mb=" << fixed(p.per_layer_act(kReferenceImage), 4)
        << " samples=" << group.size()
        << " max_residual_pct=" << fixed(100.0 * max_relative_residual(p, group), 3) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Activation-checkpointing planner for memory-constrained training"};
  app.name("edgeckpt");
  app.require_subcommand(1);

  TablesOptions tables;
  auto* tables_cmd = app.add_subcommand("tables", "Compare the memory model with published tables");
  tables_cmd->add_option("--variant", tables.variants, "Restrict to these ResNet depths");
  tables_cmd->add_option("--capacity", tables.capacity, "Device capacity in MB")
      ->check(CLI::PositiveNumber);
  tables_cmd->add_flag("--check", tables.check, "Fail when any cell exceeds its tolerance");
  tables_cmd->add_flag("--check-shading", tables.check_shading,
                       "Fail when recomputed shading disagrees with the published flags");

  ScheduleOptions schedule;
  auto* schedule_cmd = app.add_subcommand("schedule", "Emit or replay a checkpointing schedule");
  schedule_cmd->add_option("--strategy", schedule.strategy, "revolve or uniform")
      ->check(CLI::IsMember({"revolve", "uniform"}));
  schedule_cmd->add_option("-l,--length", schedule.length, "Chain length");
  schedule_cmd->add_option("-c,--slots", schedule.slots, "Checkpoint slots (revolve)");
  schedule_cmd->add_option("-s,--segments", schedule.segments, "Segments (uniform)");
  schedule_cmd->add_option("-o,--out", schedule.out_path, "Write the schedule here");
  schedule_cmd->add_option("--from", schedule.from_path, "Replay an existing schedule file");
  schedule_cmd->add_flag("--replay", schedule.replay, "Run the simulator on the schedule");
  schedule_cmd->add_option("-b,--backward-ratio", schedule.backward_ratio,
                           "Backward cost relative to a forward step")
      ->check(CLI::PositiveNumber);

  SweepOptions sweep_opt;
  auto* sweep_cmd = app.add_subcommand("sweep", "Peak memory versus recompute factor as CSV");
  sweep_cmd->add_option("--variants", sweep_opt.variants, "ResNet depths, comma separated")
      ->delimiter(',');
  sweep_cmd->add_option("--batch", sweep_opt.batch, "Batch size")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--image", sweep_opt.image, "Image side in pixels")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--capacity", sweep_opt.capacity, "Device capacity in MB")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("-b,--backward-ratio", sweep_opt.backward_ratio,
                        "Backward cost relative to a forward step")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--grid", sweep_opt.grid, "rho values: a,b,c or start:stop:step");
  sweep_cmd->add_option("-o,--out", sweep_opt.out_path, "CSV output path");
  sweep_cmd->add_option("--calibration", sweep_opt.calibration_path,
                        "Calibration samples file");

  CalibrateOptions calibrate_opt;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "Fit model parameters");
  calibrate_cmd->add_option("-i,--input", calibrate_opt.input_path, "Calibration samples file");
  calibrate_cmd->add_option("--dump", calibrate_opt.dump_path,
                            "Write the embedded calibration samples ('-' for stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string message = e.what();
    std::replace(message.begin(), message.end(), '\n', ' ');
    err << "usage: " << message << '\n';
    return kExitUsage;
  }

  try {
    if (*tables_cmd) return cmd_tables(tables, out, err);
    if (*schedule_cmd) return cmd_schedule(schedule, out, err);
    if (*sweep_cmd) return cmd_sweep(sweep_opt, out, err);
    if (*calibrate_cmd) return cmd_calibrate(calibrate_opt, out, err);
  } catch (const UsageError& e) {
    err << "usage: " << e.message << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace edgeckpt::cli
