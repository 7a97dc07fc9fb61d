#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cvwork/conditioning.hpp"

namespace cvwork::sweep {

inline constexpr const char* kVersion = "0.1.0";

enum class Quantity { work, x, snr_closed, snr_moments, rho_cm, rho_closed, ppt_eigenvalue };

/// ratio sweeps n_th / n_ch at fixed n_ch.
enum class Axis { r, n_th, n_ch, eta, ratio };

const char* to_string(Quantity q);
const char* to_string(Axis a);

struct Range {
  Axis axis = Axis::ratio;
  Real lo = 0;
  Real hi = 0;
  std::size_t n = 2;
  bool log = false;

  /// "<param>:<lo>:<hi>:<n>:{lin|log}"
  static Range parse(const std::string& text);
  std::string to_string() const;
  std::vector<Real> grid() const;
};

struct OracleSpec {
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Defaults: the work-vs-preparation-noise sweep for a 2 GHz microwave
/// channel with n_ch = 3000, eta = 0.01, r = 4, n_th / n_ch swept log 1e-4..1.
struct SweepConfig {
  Real r = 4;
  Real n_th = 3000;
  Real n_ch = 3000;
  Real eta = 0.01L;
  MeasurementSpec measurement = MeasurementSpec::homodyne_x();
  std::optional<Range> range = Range{Axis::ratio, 1e-4L, 1, 50, true};
  std::vector<Quantity> quantities = {Quantity::work, Quantity::x};
  std::optional<OracleSpec> oracle;
  std::string out = "-";
  bool timestamp = true;

  bool wants(Quantity q) const;
  /// Canonical key=value echo, one pair per entry, in a fixed order.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Collects key=value settings from a config file and from flags; later
/// settings win, so load the file first. Keys accept '-' or '_'.
class ConfigBuilder {
 public:
  void set(const std::string& key, const std::string& value);
  void load_file(const std::string& path);
  void load_text(const std::string& text);

  /// Throws Error(usage) naming the offending field.
  SweepConfig build() const;

 private:
  std::map<std::string, std::string> values_;
};

struct Point {
  Real r = 0;
  Real n_th = 0;
  Real n_ch = 0;
  Real eta = 0;
};

std::vector<Point> grid_points(const SweepConfig& cfg);

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
  std::size_t failed_rows = 0;
};

/// One row per grid point in grid order; the last column is the status
/// ("ok" or the error message of that point).
Table run_sweep(const SweepConfig& cfg);

/// Long-format table: one row per (grid point, comparison) of a literal
/// closed form against its first-principles counterpart.
Table compare_report(const SweepConfig& cfg);

enum class Report { sweep, compare };

/// CSV text: '#' metadata lines, header, rows. Reals use 17 significant digits.
std::string render_csv(const Table& table, const SweepConfig& cfg, Report kind);

std::string format_number(double v);

}  // namespace cvwork::sweep
