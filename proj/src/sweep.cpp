#include "itlab/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "itlab/io.hpp"
#include "itlab/parallel.hpp"
#include "itlab/sampling.hpp"

namespace itlab {
namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::uint64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
  const auto d = std::chrono::steady_clock::now() - start;
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(d).count());
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const char* where) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ValidationError(std::string(where) + ": unknown key \"" + item.key() + "\"");
    }
  }
}

std::uint64_t get_u64(const json& obj, const char* key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj[key];
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ValidationError(std::string("config: ") + key + " must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

void SweepConfig::validate() const {
  if (points.empty()) throw ValidationError("config: points must be nonempty");
  for (const SweepPoint& p : points) {
    ModelParams params{p.m, p.r, p.q, p.semiring};
    params.validate();
  }
  if (n_grid.empty() == alpha_grid.empty()) {
    throw ValidationError("config: exactly one of n_grid and alpha_grid must be given");
  }
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 0) throw ValidationError("config: n_grid entries must be >= 0");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
      throw ValidationError("config: n_grid must be strictly increasing");
    }
  }
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    if (!(alpha_grid[i] >= 0)) throw ValidationError("config: alpha_grid entries must be >= 0");
    if (i > 0 && alpha_grid[i] <= alpha_grid[i - 1]) {
      throw ValidationError("config: alpha_grid must be strictly increasing");
    }
  }
  if (mode == ErrorRateMode::MonteCarlo && trials < 1) {
    throw ValidationError("config: trials must be >= 1 in mc mode");
  }
  if (csv_name.empty() || svg_name.empty()) {
    throw ValidationError("config: csv and svg names must be nonempty");
  }
}

SweepConfig sweep_config_from_json(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ValidationError("config: malformed JSON");
  if (!doc.is_object()) throw ValidationError("config: top level must be an object");
  reject_unknown_keys(doc,
                      {"points", "n_grid", "alpha_grid", "trials", "master_seed", "mode",
                       "enum_budget", "location_budget", "record_runtime", "csv", "svg"},
                      "config");

  SweepConfig config;
  if (!doc.contains("points") || !doc["points"].is_array()) {
    throw ValidationError("config: points must be an array");
  }
  for (const json& p : doc["points"]) {
    if (!p.is_object()) throw ValidationError("config: each point must be an object");
    reject_unknown_keys(p, {"m", "r", "q", "semiring"}, "config point");
    for (const char* key : {"m", "r", "q"}) {
      if (!p.contains(key) || !p[key].is_number_integer()) {
        throw ValidationError(std::string("config point: ") + key + " must be an integer");
      }
    }
    SweepPoint point;
    point.m = p["m"].get<int>();
    point.r = p["r"].get<int>();
    point.q = p["q"].get<std::int64_t>();
    if (p.contains("semiring")) {
      if (!p["semiring"].is_string()) {
        throw ValidationError("config point: semiring must be a string");
      }
      point.semiring = semiring_from_string(p["semiring"].get<std::string>());
    }
    config.points.push_back(point);
  }
  if (doc.contains("n_grid")) {
    if (!doc["n_grid"].is_array()) throw ValidationError("config: n_grid must be an array");
    for (const json& v : doc["n_grid"]) {
      if (!v.is_number_integer()) throw ValidationError("config: n_grid entries must be integers");
      config.n_grid.push_back(v.get<int>());
    }
  }
  if (doc.contains("alpha_grid")) {
    if (!doc["alpha_grid"].is_array()) {
      throw ValidationError("config: alpha_grid must be an array");
    }
    for (const json& v : doc["alpha_grid"]) {
      if (!v.is_number()) throw ValidationError("config: alpha_grid entries must be numbers");
      config.alpha_grid.push_back(v.get<double>());
    }
  }
  config.trials = get_u64(doc, "trials", config.trials);
  config.master_seed = get_u64(doc, "master_seed", config.master_seed);
  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) throw ValidationError("config: mode must be a string");
    const std::string mode = doc["mode"].get<std::string>();
    if (mode == "exact") {
      config.mode = ErrorRateMode::ExactAverage;
    } else if (mode == "mc") {
      config.mode = ErrorRateMode::MonteCarlo;
    } else {
      throw ValidationError("config: mode must be \"exact\" or \"mc\"");
    }
  }
  config.enum_budget = get_u64(doc, "enum_budget", config.enum_budget);
  config.location_budget = get_u64(doc, "location_budget", config.location_budget);
  if (doc.contains("record_runtime")) {
    if (!doc["record_runtime"].is_boolean()) {
      throw ValidationError("config: record_runtime must be a boolean");
    }
    config.record_runtime = doc["record_runtime"].get<bool>();
  }
  if (doc.contains("csv")) {
    if (!doc["csv"].is_string()) throw ValidationError("config: csv must be a string");
    config.csv_name = doc["csv"].get<std::string>();
  }
  if (doc.contains("svg")) {
    if (!doc["svg"].is_string()) throw ValidationError("config: svg must be a string");
    config.svg_name = doc["svg"].get<std::string>();
  }
  config.validate();
  return config;
}

double exact_coverage_failure(int m, int r, int n, std::uint64_t location_budget) {
  if (m < 1) throw ValidationError("m must be >= 1");
  if (r < 0) throw ValidationError("r must be >= 0");
  const std::uint64_t cells = static_cast<std::uint64_t>(m) * m;
  if (n < 0 || static_cast<std::uint64_t>(n) > cells) {
    throw ValidationError("n outside [0, m^2]");
  }
  const auto subsets = subset_count(cells, static_cast<std::uint64_t>(n));
  if (!subsets) {
    throw BudgetExceeded(std::numeric_limits<std::uint64_t>::max(), location_budget, true);
  }
  if (*subsets > location_budget) throw BudgetExceeded(*subsets, location_budget);
  if (r == 0) return 0;

  std::vector<int> subset(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) subset[static_cast<std::size_t>(i)] = i;
  std::vector<int> row_counts(static_cast<std::size_t>(m));
  std::vector<int> col_counts(static_cast<std::size_t>(m));
  std::uint64_t failures = 0;
  std::uint64_t done = 0;
  for (;;) {
    std::fill(row_counts.begin(), row_counts.end(), 0);
    std::fill(col_counts.begin(), col_counts.end(), 0);
    for (int i = 0; i < n; ++i) {
      const int cell = subset[static_cast<std::size_t>(i)];
      ++row_counts[static_cast<std::size_t>(cell / m)];
      ++col_counts[static_cast<std::size_t>(cell % m)];
    }
    bool covered = true;
    for (int i = 0; i < m && covered; ++i) {
      covered = row_counts[static_cast<std::size_t>(i)] >= r &&
                col_counts[static_cast<std::size_t>(i)] >= r;
    }
    if (!covered) ++failures;
    ++done;

    int i = n - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == static_cast<int>(cells) - n + i) --i;
    if (i < 0) break;
    ++subset[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) {
      subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return static_cast<double>(failures) / static_cast<double>(done);
}

namespace {

struct GridEntry {
  int n = 0;
  double alpha = std::numeric_limits<double>::quiet_NaN();
};

std::vector<GridEntry> grid_for_point(const SweepConfig& config, const SweepPoint& point) {
  std::vector<GridEntry> grid;
  if (!config.n_grid.empty()) {
    for (int n : config.n_grid) grid.push_back({n, std::numeric_limits<double>::quiet_NaN()});
  } else {
    for (double alpha : config.alpha_grid) {
      grid.push_back({coverage_sample_count(point.m, alpha), alpha});
    }
  }
  return grid;
}

ResultRow row_skeleton(const SweepPoint& point, const GridEntry& entry,
                       const SweepConfig& config) {
  ResultRow row;
  row.m = point.m;
  row.r = point.r;
  row.q = point.q;
  row.semiring = point.semiring;
  row.n = entry.n;
  row.alpha = entry.alpha;
  row.seed = config.master_seed;
  row.mode = "skipped";
  return row;
}

void fill_wald_ci(ResultRow& row) {
  row.pe_hat = static_cast<double>(row.failures) / static_cast<double>(row.trials);
  const double sigma =
      std::sqrt(row.pe_hat * (1.0 - row.pe_hat) / static_cast<double>(row.trials));
  row.ci95_lo = std::max(0.0, row.pe_hat - 1.96 * sigma);
  row.ci95_hi = std::min(1.0, row.pe_hat + 1.96 * sigma);
}

void run_point_exact(const SweepConfig& config, const SweepPoint& point,
                     std::vector<ResultRow>& rows) {
  const ModelParams params{point.m, point.r, point.q, point.semiring};
  const std::uint64_t cells = static_cast<std::uint64_t>(point.m) * point.m;
  for (const GridEntry& entry : grid_for_point(config, point)) {
    ResultRow row = row_skeleton(point, entry, config);
    if (entry.n >= 0 && static_cast<std::uint64_t>(entry.n) <= cells) {
      const auto start = std::chrono::steady_clock::now();
      try {
        const ErrorRateReport rep =
            exact_error_rate(params, entry.n, config.enum_budget, config.location_budget);
        row.trials = rep.trials;
        row.failures = rep.failures;
        row.pe_hat = rep.pe;
        row.ci95_lo = rep.pe;
        row.ci95_hi = rep.pe;
        row.coverage_fail_hat =
            exact_coverage_failure(point.m, point.r, entry.n, config.location_budget);
        row.mode = "exact";
        if (config.record_runtime) row.runtime_ms = elapsed_ms(start);
      } catch (const BudgetExceeded&) {
        row = row_skeleton(point, entry, config);
      }
    }
    rows.push_back(std::move(row));
  }
}

void run_point_mc(const SweepConfig& config, const SweepPoint& point, std::uint64_t point_seed,
                  std::vector<ResultRow>& rows) {
  const ModelParams params{point.m, point.r, point.q, point.semiring};
  const std::uint64_t cells = static_cast<std::uint64_t>(point.m) * point.m;
  const std::vector<GridEntry> grid = grid_for_point(config, point);

  // Indices of grid entries that fit on the m x m board; the rest are
  // emitted as skipped rows.
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i].n >= 0 && static_cast<std::uint64_t>(grid[i].n) <= cells) live.push_back(i);
  }
  bool feasible = !live.empty();
  if (feasible) {
    try {
      source_count_checked(params, config.enum_budget);
    } catch (const BudgetExceeded&) {
      feasible = false;
    }
  }
  if (!feasible) {
    for (const GridEntry& entry : grid) rows.push_back(row_skeleton(point, entry, config));
    return;
  }

  const int max_n = grid[live.back()].n;
  const int m = point.m;
  const int r = point.r;

  // Per trial: the first live grid index where decoding succeeds (success
  // is monotone along nested location prefixes, so binary search applies)
  // and the shortest prefix that covers every row and column r times.
  struct TrialOutcome {
    std::uint32_t first_success = 0;
    int cover_n = 0;
  };
  std::vector<TrialOutcome> outcomes(config.trials);

  const auto start = std::chrono::steady_clock::now();
  parallel_for(config.trials, [&](std::uint64_t t) {
    const std::uint64_t trial_seed = derive_seed(point_seed, t);
    const FactorPair pair = generate_source(params, SeedSpec{trial_seed, 0});
    const ProductMatrix truth = product(pair, params);
    const LocationSequence full = sample_locations(m, max_n, SeedSpec{trial_seed, 1});

    int cover_n = max_n + 1;
    if (r == 0) {
      cover_n = 0;
    } else {
      std::vector<int> row_counts(static_cast<std::size_t>(m), 0);
      std::vector<int> col_counts(static_cast<std::size_t>(m), 0);
      int rows_ok = 0, cols_ok = 0;
      for (std::size_t k = 0; k < full.locations.size(); ++k) {
        const auto [i, j] = full.locations[k];
        if (++row_counts[static_cast<std::size_t>(i)] == r) ++rows_ok;
        if (++col_counts[static_cast<std::size_t>(j)] == r) ++cols_ok;
        if (rows_ok == m && cols_ok == m) {
          cover_n = static_cast<int>(k) + 1;
          break;
        }
      }
    }

    auto succeeds = [&](std::size_t live_idx) {
      LocationSequence prefix;
      prefix.m = m;
      const int n = grid[live[live_idx]].n;
      prefix.locations.assign(full.locations.begin(), full.locations.begin() + n);
      const DecodeOutcome out = decode(observe(truth, prefix), params, config.enum_budget);
      return out.kind == DecodeKind::Unique;
    };
    std::size_t lo = 0, hi = live.size();
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (succeeds(mid)) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    outcomes[t].first_success = static_cast<std::uint32_t>(lo);
    outcomes[t].cover_n = cover_n;
  });
  const std::uint64_t point_ms = config.record_runtime ? elapsed_ms(start) : 0;

  std::size_t live_pos = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ResultRow row = row_skeleton(point, grid[i], config);
    if (live_pos < live.size() && live[live_pos] == i) {
      std::uint64_t failures = 0, covers_missed = 0;
      for (const TrialOutcome& out : outcomes) {
        if (out.first_success > live_pos) ++failures;
        if (out.cover_n > grid[i].n) ++covers_missed;
      }
      row.trials = config.trials;
      row.failures = failures;
      fill_wald_ci(row);
      row.coverage_fail_hat =
          static_cast<double>(covers_missed) / static_cast<double>(config.trials);
      row.mode = "mc";
      row.runtime_ms = point_ms;
      ++live_pos;
    }
    rows.push_back(std::move(row));
  }
}

}  // namespace

std::vector<ResultRow> run_sweep(const SweepConfig& config) {
  config.validate();
  std::vector<ResultRow> rows;
  for (std::size_t p = 0; p < config.points.size(); ++p) {
    if (config.mode == ErrorRateMode::ExactAverage) {
      run_point_exact(config, config.points[p], rows);
    } else {
      run_point_mc(config, config.points[p], derive_seed(config.master_seed, p), rows);
    }
  }
  return rows;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::string out = kResultCsvHeader;
  out += '\n';
  for (const ResultRow& row : rows) {
    out += std::to_string(row.m);
    out += ',';
    out += std::to_string(row.r);
    out += ',';
    out += std::to_string(row.q);
    out += ',';
    out += to_string(row.semiring);
    out += ',';
    out += std::to_string(row.n);
    out += ',';
    if (!std::isnan(row.alpha)) out += fmt_double(row.alpha);
    out += ',';
    out += std::to_string(row.trials);
    out += ',';
    out += std::to_string(row.failures);
    out += ',';
    out += fmt_double(row.pe_hat);
    out += ',';
    out += fmt_double(row.ci95_lo);
    out += ',';
    out += fmt_double(row.ci95_hi);
    out += ',';
    out += fmt_double(row.coverage_fail_hat);
    out += ',';
    out += std::to_string(row.seed);
    out += ',';
    out += row.mode;
    out += ',';
    out += std::to_string(row.runtime_ms);
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> rows_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("csv: empty input");
  if (line != kResultCsvHeader) throw ValidationError("csv: unexpected header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    for (;;) {
      const std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(pos));
        break;
      }
      fields.push_back(line.substr(pos, comma - pos));
      pos = comma + 1;
    }
    if (fields.size() != 15) throw ValidationError("csv: expected 15 fields per row");
    try {
      ResultRow row;
      row.m = std::stoi(fields[0]);
      row.r = std::stoi(fields[1]);
      row.q = std::stoll(fields[2]);
      row.semiring = semiring_from_string(fields[3]);
      row.n = std::stoi(fields[4]);
      row.alpha = fields[5].empty() ? std::numeric_limits<double>::quiet_NaN()
                                    : std::stod(fields[5]);
      row.trials = std::stoull(fields[6]);
      row.failures = std::stoull(fields[7]);
      row.pe_hat = std::stod(fields[8]);
      row.ci95_lo = std::stod(fields[9]);
      row.ci95_hi = std::stod(fields[10]);
      row.coverage_fail_hat = std::stod(fields[11]);
      row.seed = std::stoull(fields[12]);
      row.mode = fields[13];
      row.runtime_ms = std::stoull(fields[14]);
      rows.push_back(std::move(row));
    } catch (const std::logic_error&) {
      throw ValidationError("csv: malformed numeric field");
    }
  }
  return rows;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  write_text_file(path, rows_to_csv(rows));
}

namespace {

double field_value(const ResultRow& row, const std::string& field) {
  if (field == "m") return row.m;
  if (field == "r") return row.r;
  if (field == "q") return static_cast<double>(row.q);
  if (field == "n") return row.n;
  if (field == "alpha") return row.alpha;
  if (field == "trials") return static_cast<double>(row.trials);
  if (field == "failures") return static_cast<double>(row.failures);
  if (field == "pe_hat") return row.pe_hat;
  if (field == "ci95_lo") return row.ci95_lo;
  if (field == "ci95_hi") return row.ci95_hi;
  if (field == "coverage_fail_hat") return row.coverage_fail_hat;
  if (field == "seed") return static_cast<double>(row.seed);
  if (field == "runtime_ms") return static_cast<double>(row.runtime_ms);
  throw ValidationError("svg: unknown field \"" + field + "\"");
}

std::string fmt_coord(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

std::string series_label(const SweepPoint& p) {
  return "m=" + std::to_string(p.m) + " r=" + std::to_string(p.r) +
         " q=" + std::to_string(p.q) + " " + to_string(p.semiring);
}

}  // namespace

std::string svg_chart(const std::vector<ResultRow>& rows, const std::string& x_field,
                      const std::string& y_field, bool log_y) {
  if (rows.empty()) throw ValidationError("svg: no rows");

  struct Series {
    SweepPoint point;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Series> series;
  for (const ResultRow& row : rows) {
    if (row.mode == "skipped") continue;
    const double x = field_value(row, x_field);
    const double y = field_value(row, y_field);
    if (std::isnan(x) || std::isnan(y)) continue;
    Series* s = nullptr;
    for (Series& cand : series) {
      if (cand.point.m == row.m && cand.point.r == row.r && cand.point.q == row.q &&
          cand.point.semiring == row.semiring) {
        s = &cand;
        break;
      }
    }
    if (!s) {
      series.push_back({{row.m, row.r, row.q, row.semiring}, {}});
      s = &series.back();
    }
    s->pts.emplace_back(x, y);
  }
  std::size_t total = 0;
  for (const Series& s : series) total += s.pts.size();
  if (total == 0) throw ValidationError("svg: nothing to plot");

  if (log_y) {
    double min_pos = std::numeric_limits<double>::infinity();
    for (const Series& s : series) {
      for (const auto& [x, y] : s.pts) {
        if (y > 0) min_pos = std::min(min_pos, y);
      }
    }
    if (!std::isfinite(min_pos)) {
      throw ValidationError("svg: log scale requires at least one positive value");
    }
    const double floor = min_pos / 10;
    for (Series& s : series) {
      for (auto& pt : s.pts) {
        if (pt.second <= 0) pt.second = floor;
      }
    }
  }

  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
  double ylo = std::numeric_limits<double>::infinity(), yhi = -ylo;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.pts) {
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  }
  if (xlo == xhi) {
    xlo -= 0.5;
    xhi += 0.5;
  }
  if (ylo == yhi) {
    if (log_y) {
      ylo /= 2;
      yhi *= 2;
    } else {
      ylo -= 0.5;
      yhi += 0.5;
    }
  }

  const double width = 800, height = 520;
  const double left = 80, right = 20, top = 20, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const double ylog_lo = log_y ? std::log10(ylo) : 0;
  const double ylog_hi = log_y ? std::log10(yhi) : 0;

  auto xpix = [&](double x) { return left + (x - xlo) / (xhi - xlo) * plot_w; };
  auto ypix = [&](double y) {
    const double t = log_y ? (std::log10(y) - ylog_lo) / (ylog_hi - ylog_lo)
                           : (y - ylo) / (yhi - ylo);
    return top + (1 - t) * plot_h;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"520\" "
         "viewBox=\"0 0 800 520\">\n";
  svg += "<rect width=\"800\" height=\"520\" fill=\"white\"/>\n";

  // axes
  svg += "<line x1=\"" + fmt_coord(left) + "\" y1=\"" + fmt_coord(top + plot_h) + "\" x2=\"" +
         fmt_coord(left + plot_w) + "\" y2=\"" + fmt_coord(top + plot_h) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt_coord(left) + "\" y1=\"" + fmt_coord(top) + "\" x2=\"" +
         fmt_coord(left) + "\" y2=\"" + fmt_coord(top + plot_h) + "\" stroke=\"black\"/>\n";

  // x ticks: five evenly spaced
  for (int i = 0; i <= 4; ++i) {
    const double x = xlo + (xhi - xlo) * i / 4;
    const double px = xpix(x);
    svg += "<line x1=\"" + fmt_coord(px) + "\" y1=\"" + fmt_coord(top + plot_h) + "\" x2=\"" +
           fmt_coord(px) + "\" y2=\"" + fmt_coord(top + plot_h + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt_coord(px) + "\" y=\"" + fmt_coord(top + plot_h + 18) +
           "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">" +
           fmt_tick(x) + "</text>\n";
  }
  // y ticks: decades when log, else five evenly spaced
  std::vector<double> yticks;
  if (log_y) {
    const int d0 = static_cast<int>(std::ceil(ylog_lo - 1e-9));
    const int d1 = static_cast<int>(std::floor(ylog_hi + 1e-9));
    for (int d = d0; d <= d1; ++d) yticks.push_back(std::pow(10.0, d));
    if (yticks.size() < 2) yticks = {ylo, yhi};
  } else {
    for (int i = 0; i <= 4; ++i) yticks.push_back(ylo + (yhi - ylo) * i / 4);
  }
  for (double y : yticks) {
    const double py = ypix(y);
    svg += "<line x1=\"" + fmt_coord(left - 5) + "\" y1=\"" + fmt_coord(py) + "\" x2=\"" +
           fmt_coord(left) + "\" y2=\"" + fmt_coord(py) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt_coord(left - 8) + "\" y=\"" + fmt_coord(py + 4) +
           "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">" + fmt_tick(y) +
           "</text>\n";
  }

  // series
  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
    const Series& s = series[si];
    if (s.pts.size() > 1) {
      std::string pts;
      for (const auto& [x, y] : s.pts) {
        if (!pts.empty()) pts += ' ';
        pts += fmt_coord(xpix(x)) + "," + fmt_coord(ypix(y));
      }
      svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"1.5\"/>\n";
    }
    for (const auto& [x, y] : s.pts) {
      svg += "<circle cx=\"" + fmt_coord(xpix(x)) + "\" cy=\"" + fmt_coord(ypix(y)) +
             "\" r=\"3\" fill=\"" + std::string(color) + "\"/>\n";
    }
  }

  // legend, top-right corner of the plot area
  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % (sizeof kPalette / sizeof kPalette[0])];
    const double ly = top + 14 + 16 * static_cast<double>(si);
    svg += "<rect x=\"" + fmt_coord(left + plot_w - 190) + "\" y=\"" + fmt_coord(ly - 9) +
           "\" width=\"10\" height=\"10\" fill=\"" + std::string(color) + "\"/>\n";
    svg += "<text x=\"" + fmt_coord(left + plot_w - 176) + "\" y=\"" + fmt_coord(ly) +
           "\" font-family=\"monospace\" font-size=\"12\">" + series_label(series[si].point) +
           "</text>\n";
  }

  // axis labels
  svg += "<text x=\"" + fmt_coord(left + plot_w / 2) + "\" y=\"" + fmt_coord(height - 12) +
         "\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">" + x_field +
         "</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt_coord(top + plot_h / 2) +
         "\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 " +
         fmt_coord(top + plot_h / 2) + ")\">" + y_field + "</text>\n";

  svg += "</svg>\n";
  return svg;
}

void emit_svg_curve(const std::vector<ResultRow>& rows, const std::string& x_field,
                    const std::string& y_field, const std::string& path, bool log_y) {
  write_text_file(path, svg_chart(rows, x_field, y_field, log_y));
}

ThresholdTable threshold_estimate(const std::vector<ResultRow>& rows, double target_pe) {
  if (!(target_pe >= 0 && target_pe <= 1)) {
    throw ValidationError("target pe must lie in [0, 1]");
  }
  struct Group {
    SweepPoint point;
    std::vector<std::pair<int, double>> n_pe;
  };
  std::vector<Group> groups;
  for (const ResultRow& row : rows) {
    if (row.mode == "skipped") continue;
    Group* g = nullptr;
    for (Group& cand : groups) {
      if (cand.point.m == row.m && cand.point.r == row.r && cand.point.q == row.q &&
          cand.point.semiring == row.semiring) {
        g = &cand;
        break;
      }
    }
    if (!g) {
      groups.push_back({{row.m, row.r, row.q, row.semiring}, {}});
      g = &groups.back();
    }
    g->n_pe.emplace_back(row.n, row.pe_hat);
  }
  if (groups.empty()) throw ValidationError("threshold: no usable rows");

  ThresholdTable table;
  for (Group& g : groups) {
    std::sort(g.n_pe.begin(), g.n_pe.end());
    int n_star = -1;
    for (const auto& [n, pe] : g.n_pe) {
      if (pe <= target_pe) {
        n_star = n;
        break;
      }
    }
    if (n_star < 0) {
      throw NoCrossing("no n in the grid reaches pe_hat <= " + fmt_double(target_pe) +
                       " for " + series_label(g.point));
    }
    table.entries.push_back({g.point, n_star, 0, 0});
  }

  const ThresholdEntry& first = table.entries.front();
  const double m1 = first.point.m;
  table.c_linear = first.n_star / m1;
  table.c_mlogm = m1 > 1 ? first.n_star / (m1 * std::log(m1)) : 0;
  for (ThresholdEntry& e : table.entries) {
    const double m = e.point.m;
    e.ref_linear = table.c_linear * m;
    e.ref_mlogm = m > 1 ? table.c_mlogm * m * std::log(m) : 0;
  }
  return table;
}

}  // namespace itlab
