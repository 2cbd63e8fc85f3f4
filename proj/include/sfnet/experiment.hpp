#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sfnet/attacks.hpp"
#include "sfnet/error.hpp"
#include "sfnet/generation.hpp"
#include "sfnet/graph.hpp"
#include "sfnet/metrics.hpp"
#include "sfnet/rng.hpp"
#include "sfnet/statistics.hpp"

namespace sfnet {

inline constexpr attack_kind all_attacks[] = {attack_kind::degree, attack_kind::betweenness,
                                              attack_kind::bp};

struct experiment_config {
  std::size_t n = 1000;
  int m = 2;
  double gamma_start = 2.1;
  double gamma_stop = 4.0;
  double gamma_step = 0.1;
  std::size_t realizations = 100;
  std::uint64_t base_seed = 1;
  std::vector<attack_kind> attacks{all_attacks[0], all_attacks[1], all_attacks[2]};
  bp_params bp;
  std::string out_dir = "results";
  std::size_t threads = 0;  // 0 = hardware concurrency
  bool dump_cells = false;

  void validate() const {
    if (!(gamma_step > 0.0)) throw error(errc::invalid_config, "gamma_step must be > 0");
    if (!(gamma_start > 2.0)) throw error(errc::invalid_config, "gamma_start must be > 2");
    if (gamma_stop < gamma_start) throw error(errc::invalid_config, "gamma_stop < gamma_start");
    if (realizations < 1) throw error(errc::invalid_config, "realizations must be >= 1");
    if (m < 1) throw error(errc::invalid_config, "m must be >= 1");
    if (n < static_cast<std::size_t>(m) + 1) throw error(errc::invalid_config, "n must be >= m + 1");
    try {
      bp.validate();
    } catch (const error& e) {
      throw error(errc::invalid_config, e.what());
    }
  }

  /// Grid values rounded to one decimal.
  std::vector<double> gamma_grid() const {
    const auto count = static_cast<std::size_t>(std::floor((gamma_stop - gamma_start) / gamma_step + 1e-9)) + 1;
    std::vector<double> grid;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
      grid.push_back(std::round((gamma_start + static_cast<double>(i) * gamma_step) * 10.0) / 10.0);
    return grid;
  }

  bool has_attack(attack_kind k) const {
    return std::find(attacks.begin(), attacks.end(), k) != attacks.end();
  }
};

inline void to_json(nlohmann::json& j, const experiment_config& c) {
  std::vector<std::string> attacks;
  for (auto k : c.attacks) attacks.emplace_back(to_string(k));
  j = nlohmann::json{
      {"n", c.n},
      {"m", c.m},
      {"gamma_start", c.gamma_start},
      {"gamma_stop", c.gamma_stop},
      {"gamma_step", c.gamma_step},
      {"realizations", c.realizations},
      {"base_seed", c.base_seed},
      {"attacks", attacks},
      {"bp",
       {{"x", c.bp.x},
        {"tolerance", c.bp.tolerance},
        {"max_sweeps", c.bp.max_sweeps},
        {"damping", c.bp.damping},
        {"batch", c.bp.batch}}},
      {"out_dir", c.out_dir},
      {"threads", c.threads},
      {"dump_cells", c.dump_cells},
  };
}

inline void from_json(const nlohmann::json& j, experiment_config& c) {
  auto take = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  take("n", c.n);
  take("m", c.m);
  take("gamma_start", c.gamma_start);
  take("gamma_stop", c.gamma_stop);
  take("gamma_step", c.gamma_step);
  take("realizations", c.realizations);
  take("base_seed", c.base_seed);
  if (j.contains("attacks")) {
    c.attacks.clear();
    for (const auto& name : j.at("attacks")) c.attacks.push_back(parse_attack_kind(name.get<std::string>()));
  }
  if (j.contains("bp")) {
    const auto& b = j.at("bp");
    if (b.contains("x")) b.at("x").get_to(c.bp.x);
    if (b.contains("tolerance")) b.at("tolerance").get_to(c.bp.tolerance);
    if (b.contains("max_sweeps")) b.at("max_sweeps").get_to(c.bp.max_sweeps);
    if (b.contains("damping")) b.at("damping").get_to(c.bp.damping);
    if (b.contains("batch")) b.at("batch").get_to(c.bp.batch);
  }
  take("out_dir", c.out_dir);
  take("threads", c.threads);
  take("dump_cells", c.dump_cells);
}

inline experiment_config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::invalid_config, "cannot open config " + path.string());
  try {
    experiment_config c = nlohmann::json::parse(in).get<experiment_config>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw error(errc::invalid_config, path.string() + ": " + e.what());
  }
}

enum class seed_stage : std::uint64_t { generate = 0, randomize = 1, attack = 2 };

/// Independent stream seed for one pipeline stage of one cell. Each input
/// is folded in through a SplitMix64 finalizer round.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t gamma_index,
                                    std::uint64_t realization, seed_stage stage) {
  std::uint64_t h = mix64(base ^ 0x6a09e667f3bcc908ULL);
  h = mix64(h ^ (gamma_index * 0x9e3779b97f4a7c15ULL + 1));
  h = mix64(h ^ (realization * 0xc2b2ae3d27d4eb4fULL + 2));
  h = mix64(h ^ (static_cast<std::uint64_t>(stage) * 0x165667b19e3779f9ULL + 3));
  return h;
}

struct cell_result {
  double gamma = 0.0;
  std::size_t gamma_index = 0;
  std::size_t realization = 0;
  std::uint64_t generate_seed = 0;
  std::uint64_t randomize_seed = 0;
  degree_stats degrees;
  loop_stats loops;
  std::map<attack_kind, double> robustness;
  std::map<attack_kind, std::vector<std::size_t>> curves;
};

/// generate -> randomize -> degree stats -> loop stats -> each attack on a
/// fresh copy -> R.
inline cell_result run_cell(const experiment_config& config, std::size_t gamma_index,
                            std::size_t realization) {
  const auto grid = config.gamma_grid();
  if (gamma_index >= grid.size())
    throw error(errc::invalid_config, "gamma index " + std::to_string(gamma_index) + " outside grid");
  cell_result cell;
  cell.gamma = grid[gamma_index];
  cell.gamma_index = gamma_index;
  cell.realization = realization;
  cell.generate_seed = derive_seed(config.base_seed, gamma_index, realization, seed_stage::generate);
  cell.randomize_seed = derive_seed(config.base_seed, gamma_index, realization, seed_stage::randomize);

  const graph grown = price_generate({config.n, config.m, cell.gamma}, cell.generate_seed);
  graph g;
  try {
    g = randomize_preserving_degrees(grown, cell.randomize_seed);
  } catch (const error& e) {
    char where[96];
    std::snprintf(where, sizeof where, "cell gamma=%.1f realization=%zu: ", cell.gamma, realization);
    throw error(e.code(), where + std::string(e.what()));
  }
  cell.degrees = compute_degree_stats(g);
  cell.loops = shortest_loop_stats(g);
  for (attack_kind kind : config.attacks) {
    attack_strategy strategy{kind, config.bp};
    auto trace = run_attack(g, strategy);
    cell.robustness[kind] = robustness_index(trace, g.alive_count());
    cell.curves[kind] = std::move(trace.lcc_curve);
  }
  return cell;
}

/// Per-cell scalars retained for aggregation and --dump-cells.
struct cell_summary {
  double gamma = 0.0;
  std::size_t realization = 0;
  std::uint64_t seed = 0;
  double mean_degree = 0.0;
  double variance = 0.0;
  std::size_t k_max = 0;
  std::optional<double> mean_loop;
  std::size_t bridges = 0;
  std::map<attack_kind, double> robustness;
};

inline cell_summary summarize(const cell_result& c) {
  return {c.gamma,         c.realization,   c.generate_seed,     c.degrees.mean, c.degrees.variance,
          c.degrees.k_max, c.loops.mean,    c.loops.bridge_count, c.robustness};
}

struct mean_std {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double std = std::numeric_limits<double>::quiet_NaN();
};

inline mean_std describe(std::span<const double> xs) { return {stats::mean(xs), stats::sample_std(xs)}; }

struct gamma_row {
  double gamma = 0.0;
  mean_std variance;
  mean_std k_max;
  mean_std mean_loop;
  mean_std mean_degree;
  std::map<attack_kind, mean_std> robustness;
  histogram degree_distribution;  // pooled over realizations
  histogram loop_distribution;    // pooled over realizations
  std::map<attack_kind, std::vector<double>> mean_curve;  // mean S(t)/N, t = 1..n
};

struct results_table {
  experiment_config config;
  std::vector<gamma_row> rows;
  std::vector<cell_summary> cells;  // (gamma, realization) order
};

namespace detail {

// Integer accumulators per gamma; addition order does not matter.
struct gamma_accumulator {
  std::map<std::size_t, std::size_t> degree_counts;
  std::map<std::size_t, std::size_t> loop_counts;
  std::map<attack_kind, std::vector<std::uint64_t>> curve_sums;
};

inline histogram normalize(const std::map<std::size_t, std::size_t>& counts) {
  std::size_t total = 0;
  for (auto [k, c] : counts) total += c;
  histogram h;
  for (auto [k, c] : counts) h[k] = static_cast<double>(c) / static_cast<double>(total);
  return h;
}

}  // namespace detail

inline results_table aggregate(const experiment_config& config, std::vector<cell_summary> cells,
                               const std::vector<detail::gamma_accumulator>& acc) {
  results_table table;
  table.config = config;
  const auto grid = config.gamma_grid();
  const std::size_t reps = config.realizations;
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    gamma_row row;
    row.gamma = grid[gi];
    std::vector<double> var, kmax, loop, deg;
    std::map<attack_kind, std::vector<double>> r;
    for (std::size_t k = 0; k < reps; ++k) {
      const auto& c = cells[gi * reps + k];
      var.push_back(c.variance);
      kmax.push_back(static_cast<double>(c.k_max));
      deg.push_back(c.mean_degree);
      if (c.mean_loop) loop.push_back(*c.mean_loop);
      for (auto [kind, value] : c.robustness) r[kind].push_back(value);
    }
    row.variance = describe(var);
    row.k_max = describe(kmax);
    row.mean_loop = describe(loop);
    row.mean_degree = describe(deg);
    for (const auto& [kind, values] : r) row.robustness[kind] = describe(values);
    row.degree_distribution = detail::normalize(acc[gi].degree_counts);
    row.loop_distribution = detail::normalize(acc[gi].loop_counts);
    const double denom = static_cast<double>(reps) * static_cast<double>(config.n);
    for (const auto& [kind, sums] : acc[gi].curve_sums) {
      auto& curve = row.mean_curve[kind];
      for (std::uint64_t s : sums) curve.push_back(static_cast<double>(s) / denom);
    }
    table.rows.push_back(std::move(row));
  }
  table.cells = std::move(cells);
  return table;
}

/// Runs every (gamma, realization) cell across worker threads. Results do
/// not depend on the thread count or scheduling.
inline results_table compute_experiment(const experiment_config& config,
                                        const std::function<void(std::size_t, std::size_t)>& progress = {}) {
  config.validate();
  const auto grid = config.gamma_grid();
  const std::size_t reps = config.realizations;
  const std::size_t total = grid.size() * reps;

  std::vector<cell_summary> cells(total);
  std::vector<detail::gamma_accumulator> acc(grid.size());
  for (auto& a : acc)
    for (auto kind : config.attacks) a.curve_sums[kind].assign(config.n, 0);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex mutex;
  std::vector<std::string> failures;

  auto worker = [&] {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= total) return;
      const std::size_t gi = idx / reps;
      const std::size_t rep = idx % reps;
      try {
        cell_result cell = run_cell(config, gi, rep);
        cells[idx] = summarize(cell);
        std::lock_guard lock(mutex);
        auto& a = acc[gi];
        for (auto [k, c] : cell.degrees.counts) a.degree_counts[k] += c;
        for (auto [l, c] : cell.loops.counts) a.loop_counts[l] += c;
        for (const auto& [kind, curve] : cell.curves) {
          auto& sums = a.curve_sums[kind];
          for (std::size_t t = 0; t < curve.size(); ++t) sums[t] += curve[t];
        }
        if (progress) progress(++done, total);
      } catch (const std::exception& e) {
        std::lock_guard lock(mutex);
        failures.push_back(e.what());
      }
    }
  };

  std::size_t threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  threads = std::min(threads, total);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (!failures.empty()) {
    std::sort(failures.begin(), failures.end());
    std::string report = std::to_string(failures.size()) + " cell(s) failed:";
    for (const auto& f : failures) report += "\n  " + f;
    throw error(errc::randomization_failed, report);
  }
  return aggregate(config, std::move(cells), acc);
}

// ---------------------------------------------------------------------------
// Output

inline std::string format_g6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string format_gamma(double gamma) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.1f", gamma);
  return buf;
}

inline std::string format_exact(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline const char* cells_header() {
  return "gamma,realization,seed,mean_k,sigma2,kmax,mean_l,bridges,R_degree,R_betweenness,R_bp\n";
}

/// One cells.csv row with round-trip precision.
inline std::string format_cell_row(const cell_summary& c) {
  std::string row = format_gamma(c.gamma) + "," + std::to_string(c.realization) + "," +
                    std::to_string(c.seed) + "," + format_exact(c.mean_degree) + "," +
                    format_exact(c.variance) + "," + std::to_string(c.k_max) + "," +
                    (c.mean_loop ? format_exact(*c.mean_loop) : std::string()) + "," +
                    std::to_string(c.bridges);
  for (auto kind : all_attacks) {
    row += ",";
    if (auto it = c.robustness.find(kind); it != c.robustness.end()) row += format_exact(it->second);
  }
  return row + "\n";
}

inline std::string summary_csv(const results_table& table) {
  std::string out =
      "gamma,sigma2_mean,sigma2_std,kmax_mean,kmax_std,mean_l,mean_l_std,R_degree,R_degree_std,"
      "R_betweenness,R_betweenness_std,R_bp,R_bp_std\n";
  for (const auto& row : table.rows) {
    out += format_g6(row.gamma) + "," + format_g6(row.variance.mean) + "," + format_g6(row.variance.std) +
           "," + format_g6(row.k_max.mean) + "," + format_g6(row.k_max.std) + "," +
           format_g6(row.mean_loop.mean) + "," + format_g6(row.mean_loop.std);
    for (auto kind : all_attacks) {
      if (auto it = row.robustness.find(kind); it != row.robustness.end())
        out += "," + format_g6(it->second.mean) + "," + format_g6(it->second.std);
      else
        out += ",,";
    }
    out += "\n";
  }
  return out;
}

/// Writes summary.csv, per-gamma curves/loops/degrees files, config.json and
/// optionally cells.csv. On failure, files written so far are removed.
inline std::vector<std::filesystem::path> write_outputs(const results_table& table,
                                                        const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::vector<fs::path> written;
  auto emit = [&](const std::string& name, const std::string& content) {
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw error(errc::io_error, "cannot open " + path.string());
    written.push_back(path);
    out << content;
    if (!out) throw error(errc::io_error, "write failed for " + path.string());
  };
  try {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw error(errc::io_error, "cannot create " + dir.string() + ": " + ec.message());

    emit("summary.csv", summary_csv(table));
    for (const auto& row : table.rows) {
      const std::string g = format_gamma(row.gamma);
      for (const auto& [kind, curve] : row.mean_curve) {
        std::string csv = "q,S_over_N\n";
        const double n = static_cast<double>(curve.size());
        for (std::size_t t = 0; t < curve.size(); ++t)
          csv += format_g6(static_cast<double>(t + 1) / n) + "," + format_g6(curve[t]) + "\n";
        emit("curves_" + std::string(to_string(kind)) + "_" + g + ".csv", csv);
      }
      std::string loops = "l,probability\n";
      for (auto [l, p] : row.loop_distribution) loops += std::to_string(l) + "," + format_g6(p) + "\n";
      emit("loops_" + g + ".csv", loops);
      std::string degrees = "k,probability\n";
      for (auto [k, p] : row.degree_distribution) degrees += std::to_string(k) + "," + format_g6(p) + "\n";
      emit("degrees_" + g + ".csv", degrees);
    }
    if (table.config.dump_cells) {
      std::string cells = cells_header();
      for (const auto& c : table.cells) cells += format_cell_row(c);
      emit("cells.csv", cells);
    }
    nlohmann::json snapshot = table.config;
    snapshot["std_estimator"] = "sample (n-1)";
    emit("config.json", snapshot.dump(2) + "\n");
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) fs::remove(p, ec);
    throw;
  }
  return written;
}

inline results_table run_experiment(const experiment_config& config,
                                    const std::function<void(std::size_t, std::size_t)>& progress = {}) {
  auto table = compute_experiment(config, progress);
  write_outputs(table, config.out_dir);
  return table;
}

}  // namespace sfnet
