#include "cvwork/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include "cvwork/oracle.hpp"
#include "cvwork/protocols.hpp"

namespace cvwork::sweep {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<std::pair<const char*, Quantity>> kQuantityNames = {
    {"work", Quantity::work},         {"x", Quantity::x},
    {"snr_closed", Quantity::snr_closed}, {"snr_moments", Quantity::snr_moments},
    {"rho_cm", Quantity::rho_cm},     {"rho_closed", Quantity::rho_closed},
    {"ppt_eigenvalue", Quantity::ppt_eigenvalue},
};

const std::vector<std::pair<const char*, Axis>> kAxisNames = {
    {"r", Axis::r}, {"n_th", Axis::n_th}, {"n_ch", Axis::n_ch}, {"eta", Axis::eta}, {"ratio", Axis::ratio},
};

const std::vector<std::string> kKeys = {"r", "n_th", "n_ch", "eta", "measurement", "sweep",
                                        "quantities", "oracle", "out", "no_timestamp"};

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) parts.push_back(trim(item));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

Real parse_real(const std::string& field, const std::string& text) {
  std::size_t used = 0;
  long double v = 0;
  try {
    v = std::stold(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size() || !std::isfinite(static_cast<double>(v))) {
    fail(ErrorKind::usage, field + ": expected a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(const std::string& field, const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size() || text.front() == '-') {
    fail(ErrorKind::usage, field + ": expected a nonnegative integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& field, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text.empty()) return true;
  if (text == "0" || text == "false" || text == "no") return false;
  fail(ErrorKind::usage, field + ": expected true or false, got '" + text + "'");
}

Axis parse_axis(const std::string& text) {
  const std::string key = normalize_key(text);
  for (const auto& [name, axis] : kAxisNames) {
    if (key == name) return axis;
  }
  fail(ErrorKind::usage, "sweep: unknown parameter '" + text + "' (use r, n_th, n_ch, eta or ratio)");
}

std::string real_text(Real v) { return format_number(static_cast<double>(v)); }

// Usage errors name the field; domain errors from the physics layer are rethrown as such.
template <class F>
void check_field(const std::string& field, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    fail(ErrorKind::usage, field + ": " + e.what());
  }
}

// Fixed per-point inputs shared by both reports.
std::vector<Cell> point_cells(const Point& p) {
  const double ratio = p.n_ch > 0 ? static_cast<double>(p.n_th / p.n_ch) : kNaN;
  return {static_cast<double>(p.r), static_cast<double>(p.n_th), static_cast<double>(p.n_ch),
          static_cast<double>(p.eta), ratio};
}

const std::vector<std::string> kPointColumns = {"r", "n_th", "n_ch", "eta", "ratio"};

std::vector<std::string> quantity_columns(Quantity q) {
  switch (q) {
    case Quantity::work: return {"work", "work_general", "gap_work"};
    case Quantity::x: return {"x", "x_cm", "gap_x"};
    case Quantity::snr_closed: return {"snr_closed_th", "snr_closed_vac"};
    case Quantity::snr_moments: return {"snr_moments", "qi_gap_moments", "qi_noise_h1", "qi_noise_h0"};
    case Quantity::rho_cm: return {"rho_cm"};
    case Quantity::rho_closed: return {"rho_closed_th", "rho_closed_vac", "gap_rho_closed_th", "gap_rho_closed_vac"};
    case Quantity::ppt_eigenvalue: return {"ppt_nu_min"};
  }
  return {};
}

const std::vector<std::string> kOracleColumns = {"rho_mc", "rho_mc_se", "condvar_cm", "condvar_mc", "condvar_mc_se"};

TwoModeState channel_state(Real r, Real n_th, const Point& p) {
  return apply_channel(make_tmsts({r, n_th}), {p.eta, p.n_ch});
}

std::vector<double> evaluate_quantity(const SweepConfig& cfg, Quantity q, const Point& p, const TwoModeState& s) {
  switch (q) {
    case Quantity::work: {
      const Real closed = work_after_channel({p.r, p.n_th}, {p.eta, p.n_ch}).work_per_kbt;
      const Real general = extracted_work_general(s, Mode::signal, cfg.measurement).work_per_kbt;
      return {static_cast<double>(closed), static_cast<double>(general), static_cast<double>(closed - general)};
    }
    case Quantity::x: {
      const Real closed = work_after_channel({p.r, p.n_th}, {p.eta, p.n_ch}).x;
      const Real cm = x_from_cm(s);
      return {static_cast<double>(closed), static_cast<double>(cm), static_cast<double>(closed - cm)};
    }
    case Quantity::snr_closed:
      return {static_cast<double>(qi_snr_closed_thermal(p.r, p.eta)),
              static_cast<double>(qi_snr_closed_vacuum(p.r, p.eta, p.n_ch))};
    case Quantity::snr_moments: {
      const SnrResult snr = qi_intensity_moments(s, qi_null_hypothesis(s, p.n_ch));
      return {static_cast<double>(snr.snr), static_cast<double>(snr.signal_gap), static_cast<double>(snr.noise_h1),
              static_cast<double>(snr.noise_h0)};
    }
    case Quantity::rho_cm:
      return {static_cast<double>(qkd_rho_from_cm(s).rho)};
    case Quantity::rho_closed: {
      const Real closed_th = qkd_rho_closed_thermal(p.r, p.eta);
      const Real closed_vac = qkd_rho_closed_vacuum(p.r, p.eta, p.n_ch);
      const Real cm_th = qkd_rho_from_cm(channel_state(p.r, p.n_ch, p)).rho;
      const Real cm_vac = qkd_rho_from_cm(channel_state(p.r, 0, p)).rho;
      return {static_cast<double>(closed_th), static_cast<double>(closed_vac), static_cast<double>(closed_th - cm_th),
              static_cast<double>(closed_vac - cm_vac)};
    }
    case Quantity::ppt_eigenvalue:
      return {static_cast<double>(ppt_smallest_eigenvalue(s.cov()))};
  }
  return {};
}

std::vector<double> evaluate_oracle(const OracleSpec& spec, const TwoModeState& s) {
  const oracle::SampleBatch batch = oracle::sample(s.state(), spec.n_samples, spec.seed);
  const oracle::Estimate rho = oracle::empirical_rho(batch);
  const oracle::Estimate condvar = oracle::empirical_conditional_variance(batch);
  const Real analytic = conditional_cov(s, Mode::signal, MeasurementSpec::homodyne_x())(0, 0);
  return {static_cast<double>(rho.value), static_cast<double>(rho.standard_error), static_cast<double>(analytic),
          static_cast<double>(condvar.value), static_cast<double>(condvar.standard_error)};
}

struct Comparison {
  std::string name;
  Real literal = 0;
  Real first_principles = 0;
  std::string flag = "ok";
};

std::vector<Comparison> comparisons_at(const SweepConfig& cfg, const Point& p) {
  std::vector<Comparison> out;
  const bool want_work = cfg.wants(Quantity::work);
  const bool want_x = cfg.wants(Quantity::x);
  const bool want_snr = cfg.wants(Quantity::snr_closed) || cfg.wants(Quantity::snr_moments);
  const bool want_rho = cfg.wants(Quantity::rho_closed) || cfg.wants(Quantity::rho_cm);
  const ChannelParams ch{p.eta, p.n_ch};

  if (want_work) {
    const TwoModeState source = make_tmsts({p.r, p.n_th});
    const Real a = source.cov()(0, 0);
    const Real c = source.cov()(0, 2);
    const Real w0 = work_homodyne_closed(a, c);
    out.push_back({"w0_unhalved_vs_halved", work_homodyne_literal(a, c), w0});
    out.push_back({"w0_closed_vs_entropy", w0,
                   extracted_work_general(source, Mode::signal, MeasurementSpec::homodyne_x()).work_per_kbt});
    const HeterodyneWork w1 = work_heterodyne_closed(a, c);
    out.push_back({"w1_het_literal", w1.literal, w1.general});
    out.push_back({"work_channel_vs_entropy", work_after_channel({p.r, p.n_th}, ch).work_per_kbt,
                   extracted_work_general(apply_channel(source, ch), Mode::signal, MeasurementSpec::homodyne_x())
                       .work_per_kbt});
  }
  if (want_x) {
    out.push_back({"x_vacuum_form", x_vacuum_limit({p.r, 0}, ch), x_from_cm(channel_state(p.r, 0, p))});
    const Real thermal_x = x_thermal_limit({p.r, p.n_ch}, ch);
    out.push_back({"x_thermal_form", thermal_x, x_from_cm(channel_state(p.r, p.n_ch, p))});
    out.push_back({"x_thermal_asymptote_form", x_thermal_asymptote(p.r, p.eta), thermal_x});
  }
  if (want_snr) {
    const TwoModeState th = channel_state(p.r, p.n_ch, p);
    const TwoModeState vac = channel_state(p.r, 0, p);
    out.push_back({"snr_thermal_form", qi_snr_closed_thermal(p.r, p.eta), qi_intensity_moments(th, qi_null_hypothesis(th, p.n_ch)).snr});
    out.push_back({"snr_vacuum_form", qi_snr_closed_vacuum(p.r, p.eta, p.n_ch),
                   qi_intensity_moments(vac, qi_null_hypothesis(vac, p.n_ch)).snr});
    const TwoModeState here = channel_state(p.r, p.n_th, p);
    out.push_back({"qi_gap", qi_gap_literal(p.r, p.eta, p.n_th),
                   qi_intensity_moments(here, qi_null_hypothesis(here, p.n_ch)).signal_gap});
  }
  if (want_rho) {
    out.push_back({"rho_closed_th", qkd_rho_closed_thermal(p.r, p.eta), qkd_rho_from_cm(channel_state(p.r, p.n_ch, p)).rho});
    out.push_back({"rho_closed_vac", qkd_rho_closed_vacuum(p.r, p.eta, p.n_ch), qkd_rho_from_cm(channel_state(p.r, 0, p)).rho});
  }
  for (Comparison& c : out) {
    if (c.name.rfind("rho_", 0) == 0 && std::abs(c.literal) > 1) c.flag = "literal_exceeds_1";
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

}  // namespace

const char* to_string(Quantity q) {
  for (const auto& [name, value] : kQuantityNames) {
    if (value == q) return name;
  }
  return "unknown";
}

const char* to_string(Axis a) {
  for (const auto& [name, value] : kAxisNames) {
    if (value == a) return name;
  }
  return "unknown";
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Range Range::parse(const std::string& text) {
  const std::vector<std::string> parts = split(text, ':');
  if (parts.size() != 5) fail(ErrorKind::usage, "sweep: expected <param>:<lo>:<hi>:<n>:{lin|log}, got '" + text + "'");
  Range range;
  range.axis = parse_axis(parts[0]);
  range.lo = parse_real("sweep lo", parts[1]);
  range.hi = parse_real("sweep hi", parts[2]);
  range.n = parse_unsigned("sweep n", parts[3]);
  if (parts[4] == "log") {
    range.log = true;
  } else if (parts[4] != "lin") {
    fail(ErrorKind::usage, "sweep: spacing must be lin or log, got '" + parts[4] + "'");
  }
  if (range.n < 2) fail(ErrorKind::usage, "sweep: n must be >= 2");
  if (range.log && !(range.lo > 0 && range.hi > 0)) fail(ErrorKind::usage, "sweep: log spacing needs lo, hi > 0");
  return range;
}

std::string Range::to_string() const {
  return std::string(sweep::to_string(axis)) + ":" + real_text(lo) + ":" + real_text(hi) + ":" + std::to_string(n) +
         ":" + (log ? "log" : "lin");
}

std::vector<Real> Range::grid() const {
  std::vector<Real> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Real t = static_cast<Real>(i) / static_cast<Real>(n - 1);
    g[i] = log ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

bool SweepConfig::wants(Quantity q) const {
  return std::find(quantities.begin(), quantities.end(), q) != quantities.end();
}

std::vector<std::pair<std::string, std::string>> SweepConfig::echo() const {
  std::string qs;
  for (Quantity q : quantities) qs += (qs.empty() ? "" : ",") + std::string(to_string(q));
  return {
      {"r", real_text(r)},
      {"n_th", real_text(n_th)},
      {"n_ch", real_text(n_ch)},
      {"eta", real_text(eta)},
      {"measurement", measurement.to_string()},
      {"sweep", range ? range->to_string() : "none"},
      {"quantities", qs},
      {"oracle", oracle ? std::to_string(oracle->n_samples) + ":" + std::to_string(oracle->seed) : "none"},
  };
}

void ConfigBuilder::set(const std::string& key, const std::string& value) {
  const std::string k = normalize_key(trim(key));
  if (std::find(kKeys.begin(), kKeys.end(), k) == kKeys.end()) fail(ErrorKind::usage, "unknown setting '" + key + "'");
  values_[k] = trim(value);
}

void ConfigBuilder::load_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::usage, "config line " + std::to_string(lineno) + ": expected key=value");
    set(line.substr(0, eq), line.substr(eq + 1));
  }
}

void ConfigBuilder::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  load_text(ss.str());
}

SweepConfig ConfigBuilder::build() const {
  SweepConfig cfg;
  auto has = [&](const char* k) { return values_.count(k) != 0; };
  auto get = [&](const char* k) { return values_.at(k); };

  if (has("r")) cfg.r = parse_real("r", get("r"));
  if (has("n_th")) cfg.n_th = parse_real("n_th", get("n_th"));
  if (has("n_ch")) cfg.n_ch = parse_real("n_ch", get("n_ch"));
  if (has("eta")) cfg.eta = parse_real("eta", get("eta"));
  if (has("measurement")) check_field("measurement", [&] { cfg.measurement = MeasurementSpec::parse(get("measurement")); });
  if (has("quantities")) {
    cfg.quantities.clear();
    for (const std::string& name : split(get("quantities"), ',')) {
      const std::string key = normalize_key(name);
      auto it = std::find_if(kQuantityNames.begin(), kQuantityNames.end(), [&](const auto& e) { return key == e.first; });
      if (it == kQuantityNames.end()) fail(ErrorKind::usage, "quantities: unknown quantity '" + name + "'");
      if (!cfg.wants(it->second)) cfg.quantities.push_back(it->second);
    }
    if (cfg.quantities.empty()) fail(ErrorKind::usage, "quantities: list is empty");
  }
  if (has("oracle")) {
    const std::string text = get("oracle");
    if (text != "none") {
      const std::vector<std::string> parts = split(text, ':');
      if (parts.size() != 2) fail(ErrorKind::usage, "oracle: expected <n_samples>:<seed>, got '" + text + "'");
      cfg.oracle = OracleSpec{parse_unsigned("oracle n_samples", parts[0]), parse_unsigned("oracle seed", parts[1])};
      if (cfg.oracle->n_samples < 4) fail(ErrorKind::usage, "oracle: n_samples must be >= 4");
    }
  }
  if (has("out")) cfg.out = get("out");
  if (has("no_timestamp")) cfg.timestamp = !parse_bool("no_timestamp", get("no_timestamp"));

  // One axis may be a range. The default n_th/n_ch sweep yields to an
  // explicit value for n_th; an explicit sweep may not.
  auto fixed_by_user = [&](Axis a) {
    switch (a) {
      case Axis::r: return has("r");
      case Axis::n_th:
      case Axis::ratio: return has("n_th");
      case Axis::n_ch: return has("n_ch");
      case Axis::eta: return has("eta");
    }
    return false;
  };
  if (has("sweep")) {
    const std::string text = get("sweep");
    if (text == "none") {
      cfg.range.reset();
    } else {
      cfg.range = Range::parse(text);
      if (fixed_by_user(cfg.range->axis)) {
        fail(ErrorKind::usage, std::string("sweep: ") + to_string(cfg.range->axis) + " is both fixed and swept");
      }
    }
  } else if (cfg.range && fixed_by_user(cfg.range->axis)) {
    cfg.range.reset();
  }

  check_field("r", [&] { TmsParams{cfg.r, 0}.check(); });
  check_field("n_th", [&] { TmsParams{0, cfg.n_th}.check(); });
  check_field("eta", [&] { ChannelParams{cfg.eta, 0}.check(); });
  check_field("n_ch", [&] { ChannelParams{1, cfg.n_ch}.check(); });
  if (cfg.range && cfg.range->axis == Axis::ratio && !(cfg.n_ch > 0)) {
    fail(ErrorKind::usage, "sweep: ratio axis needs n_ch > 0");
  }
  return cfg;
}

std::vector<Point> grid_points(const SweepConfig& cfg) {
  const Point base{cfg.r, cfg.n_th, cfg.n_ch, cfg.eta};
  if (!cfg.range) return {base};
  std::vector<Point> points;
  for (Real v : cfg.range->grid()) {
    Point p = base;
    switch (cfg.range->axis) {
      case Axis::r: p.r = v; break;
      case Axis::n_th: p.n_th = v; break;
      case Axis::n_ch: p.n_ch = v; break;
      case Axis::eta: p.eta = v; break;
      case Axis::ratio: p.n_th = v * cfg.n_ch; break;
    }
    points.push_back(p);
  }
  return points;
}

Table run_sweep(const SweepConfig& cfg) {
  Table table;
  table.header = kPointColumns;
  std::size_t width = 0;
  for (Quantity q : cfg.quantities) width += quantity_columns(q).size();
  if (cfg.oracle) width += kOracleColumns.size();
  for (Quantity q : cfg.quantities) {
    for (const std::string& c : quantity_columns(q)) table.header.push_back(c);
  }
  if (cfg.oracle) table.header.insert(table.header.end(), kOracleColumns.begin(), kOracleColumns.end());
  table.header.push_back("status");

  for (const Point& p : grid_points(cfg)) {
    std::vector<Cell> row = point_cells(p);
    std::vector<double> values;
    std::string status = "ok";
    try {
      const TwoModeState s = channel_state(p.r, p.n_th, p);
      for (Quantity q : cfg.quantities) {
        const std::vector<double> v = evaluate_quantity(cfg, q, p, s);
        values.insert(values.end(), v.begin(), v.end());
      }
      if (cfg.oracle) {
        const std::vector<double> v = evaluate_oracle(*cfg.oracle, s);
        values.insert(values.end(), v.begin(), v.end());
      }
    } catch (const std::exception& e) {
      status = std::string("error: ") + e.what();
      values.assign(width, kNaN);
      ++table.failed_rows;
    }
    for (double v : values) row.emplace_back(v);
    row.emplace_back(status);
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table compare_report(const SweepConfig& cfg) {
  const bool any = cfg.wants(Quantity::work) || cfg.wants(Quantity::x) || cfg.wants(Quantity::snr_closed) ||
                   cfg.wants(Quantity::snr_moments) || cfg.wants(Quantity::rho_closed) || cfg.wants(Quantity::rho_cm);
  if (!any) fail(ErrorKind::usage, "quantities: compare needs work, x, snr_* or rho_*");

  Table table;
  table.header = kPointColumns;
  for (const char* c : {"comparison", "literal", "first_principles", "abs_gap", "rel_gap", "flag"}) {
    table.header.emplace_back(c);
  }
  for (const Point& p : grid_points(cfg)) {
    std::vector<Comparison> items;
    try {
      items = comparisons_at(cfg, p);
    } catch (const std::exception& e) {
      std::vector<Cell> row = point_cells(p);
      row.insert(row.end(), {std::string("all"), kNaN, kNaN, kNaN, kNaN, std::string("error: ") + e.what()});
      table.rows.push_back(std::move(row));
      ++table.failed_rows;
      continue;
    }
    for (const Comparison& c : items) {
      const Real gap = c.literal - c.first_principles;
      const Real rel = gap == 0 ? 0 : gap / std::abs(c.first_principles);
      std::vector<Cell> row = point_cells(p);
      row.insert(row.end(), {c.name, static_cast<double>(c.literal), static_cast<double>(c.first_principles),
                             static_cast<double>(std::abs(gap)), static_cast<double>(std::abs(rel)), c.flag});
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

std::string render_csv(const Table& table, const SweepConfig& cfg, Report kind) {
  std::ostringstream os;
  os << "# cvwork " << kVersion << "\n";
  os << "# report=" << (kind == Report::sweep ? "sweep" : "compare") << "\n";
  for (const auto& [k, v] : cfg.echo()) os << "# " << k << "=" << v << "\n";
  os << "# rng=" << oracle::kRngId << "\n";
  if (cfg.timestamp) os << "# generated=" << utc_timestamp() << "\n";

  for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      if (const double* d = std::get_if<double>(&row[i])) {
        os << format_number(*d);
      } else {
        os << csv_escape(std::get<std::string>(row[i]));
      }
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace cvwork::sweep
