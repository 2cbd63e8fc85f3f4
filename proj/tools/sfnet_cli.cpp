// sfnet: command-line front end for generating scale-free networks,
// attacking them, measuring loops, and running full gamma sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sfnet/attacks.hpp"
#include "sfnet/experiment.hpp"
#include "sfnet/generation.hpp"
#include "sfnet/graph.hpp"
#include "sfnet/metrics.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_runtime = 3;

sfnet::graph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sfnet::error(sfnet::errc::io_error, "cannot open " + path);
  return sfnet::read_edge_list(in);
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw sfnet::error(sfnet::errc::io_error, "cannot open " + path);
  out << content;
  if (!out) throw sfnet::error(sfnet::errc::io_error, "write failed for " + path);
}

std::string fixed6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Options shared by `experiment` and `cell`; each one overrides the config file.
struct sweep_overrides {
  std::size_t n = 0;
  int m = 0;
  double gamma_start = 0, gamma_stop = 0, gamma_step = 0;
  std::size_t realizations = 0;
  std::vector<std::string> attacks;
  double bp_x = 0, bp_tol = 0, bp_damping = 0, bp_batch = 0;
  int bp_max_sweeps = 0;
  bool dump_cells = false;

  std::vector<std::pair<CLI::Option*, std::function<void(sfnet::experiment_config&)>>> setters;

  void attach(CLI::App* cmd) {
    auto add = [&](const std::string& flag, auto& field, const std::string& help, auto apply) {
      CLI::Option* opt = cmd->add_option(flag, field, help);
      setters.emplace_back(opt, apply);
    };
    add("--n", n, "node count", [this](auto& c) { c.n = n; });
    add("--m", m, "links per new node", [this](auto& c) { c.m = m; });
    add("--gamma-start", gamma_start, "first gamma", [this](auto& c) { c.gamma_start = gamma_start; });
    add("--gamma-stop", gamma_stop, "last gamma", [this](auto& c) { c.gamma_stop = gamma_stop; });
    add("--gamma-step", gamma_step, "gamma increment", [this](auto& c) { c.gamma_step = gamma_step; });
    add("--realizations", realizations, "realizations per gamma",
        [this](auto& c) { c.realizations = realizations; });
    CLI::Option* attacks_opt =
        cmd->add_option("--attacks", attacks, "subset of degree,betweenness,bp")->delimiter(',');
    setters.emplace_back(attacks_opt, [this](auto& c) {
      c.attacks.clear();
      for (const auto& a : attacks) c.attacks.push_back(sfnet::parse_attack_kind(a));
    });
    add("--bp-x", bp_x, "BP occupation weight x", [this](auto& c) { c.bp.x = bp_x; });
    add("--bp-tol", bp_tol, "BP convergence tolerance", [this](auto& c) { c.bp.tolerance = bp_tol; });
    add("--bp-max-sweeps", bp_max_sweeps, "BP sweep limit", [this](auto& c) { c.bp.max_sweeps = bp_max_sweeps; });
    add("--bp-damping", bp_damping, "BP damping in [0,1)", [this](auto& c) { c.bp.damping = bp_damping; });
    add("--bp-batch", bp_batch, "fraction of the 2-core removed per BP convergence",
        [this](auto& c) { c.bp.batch = bp_batch; });
    CLI::Option* dump = cmd->add_flag("--dump-cells", dump_cells, "also write per-cell cells.csv");
    setters.emplace_back(dump, [this](auto& c) { c.dump_cells = dump_cells; });
  }

  void apply(sfnet::experiment_config& c) const {
    for (const auto& [opt, set] : setters)
      if (opt->count() > 0) set(c);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scale-free network robustness laboratory"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::size_t threads = 0;
  std::uint64_t seed = 1;
  CLI::Option* out_opt = app.add_option("--out", out_dir, "output directory (experiment)");
  CLI::Option* threads_opt = app.add_option("--threads", threads, "worker threads (0 = all cores)");
  CLI::Option* seed_opt = app.add_option("--seed", seed, "64-bit base seed");
  app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);

  // generate
  auto* generate = app.add_subcommand("generate", "grow a Price network and randomize it; write an edge list");
  sfnet::price_params price;
  bool raw = false;
  std::string gen_output;
  generate->add_option("--n", price.n, "node count")->capture_default_str();
  generate->add_option("--m", price.m, "links per new node")->capture_default_str();
  generate->add_option("--gamma", price.gamma, "power-law exponent (> 2)")->capture_default_str();
  generate->add_flag("--raw", raw, "skip configuration-model randomization");
  generate->add_option("-o,--output", gen_output, "edge-list file (default stdout)");

  // attack
  auto* attack = app.add_subcommand("attack", "run a recalculated attack; write the trace CSV");
  std::string attack_input;
  std::string attack_output;
  std::string strategy_name = "degree";
  sfnet::bp_params bp;
  attack->add_option("input", attack_input, "edge-list file")->required();
  attack->add_option("--strategy", strategy_name, "degree | betweenness | bp")
      ->check(CLI::IsMember({"degree", "betweenness", "bp"}))
      ->capture_default_str();
  attack->add_option("--bp-x", bp.x, "BP occupation weight x")->capture_default_str();
  attack->add_option("--bp-tol", bp.tolerance, "BP convergence tolerance")->capture_default_str();
  attack->add_option("--bp-max-sweeps", bp.max_sweeps, "BP sweep limit")->capture_default_str();
  attack->add_option("--bp-damping", bp.damping, "BP damping in [0,1)")->capture_default_str();
  attack->add_option("--bp-batch", bp.batch, "fraction of the 2-core removed per convergence")
      ->capture_default_str();
  attack->add_option("-o,--output", attack_output, "trace CSV (default stdout)");

  // loops
  auto* loops = app.add_subcommand("loops", "shortest-loop length distribution of an edge list");
  std::string loops_input;
  std::string loops_output;
  loops->add_option("input", loops_input, "edge-list file")->required();
  loops->add_option("-o,--output", loops_output, "CSV file (default stdout)");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "degree statistics of an edge list as JSON");
  std::string stats_input;
  std::string stats_output;
  stats_cmd->add_option("input", stats_input, "edge-list file")->required();
  stats_cmd->add_option("-o,--output", stats_output, "JSON file (default stdout)");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run the full gamma sweep and write result tables");
  sweep_overrides exp_over;
  exp_over.attach(experiment);
  bool quiet = false;
  experiment->add_flag("-q,--quiet", quiet, "no progress output");

  // cell
  auto* cell = app.add_subcommand("cell", "run one (gamma, realization) cell and print its cells.csv row");
  sweep_overrides cell_over;
  cell_over.attach(cell);
  std::size_t gamma_index = 0;
  double gamma_value = 0.0;
  std::size_t realization = 0;
  auto* gi_opt = cell->add_option("--gamma-index", gamma_index, "index into the gamma grid");
  auto* gv_opt = cell->add_option("--gamma", gamma_value, "gamma value on the grid");
  gi_opt->excludes(gv_opt);
  cell->add_option("--realization", realization, "realization index")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_config;
  }

  auto resolve_config = [&](const sweep_overrides& over) {
    sfnet::experiment_config config;
    if (!config_path.empty()) config = sfnet::load_config(config_path);
    over.apply(config);
    if (out_opt->count() > 0) config.out_dir = out_dir;
    if (threads_opt->count() > 0) config.threads = threads;
    if (seed_opt->count() > 0) config.base_seed = seed;
    config.validate();
    return config;
  };

  try {
    if (*generate) {
      sfnet::graph g = sfnet::price_generate(price, sfnet::derive_seed(seed, 0, 0, sfnet::seed_stage::generate));
      if (!raw) g = sfnet::randomize_preserving_degrees(g, sfnet::derive_seed(seed, 0, 0, sfnet::seed_stage::randomize));
      emit(gen_output, sfnet::to_edge_list(g));
    } else if (*attack) {
      bp.validate();
      const sfnet::graph g = load_graph(attack_input);
      const auto trace = sfnet::run_attack(g, {sfnet::parse_attack_kind(strategy_name), bp});
      std::string csv = "t,removed_node,lcc_size\n";
      for (std::size_t t = 0; t < trace.size(); ++t)
        csv += std::to_string(t + 1) + "," + std::to_string(trace.removal_order[t]) + "," +
               std::to_string(trace.lcc_curve[t]) + "\n";
      emit(attack_output, csv);
    } else if (*loops) {
      const sfnet::graph g = load_graph(loops_input);
      const auto ls = sfnet::shortest_loop_stats(g);
      std::string csv = "l,count,probability\n";
      for (auto [l, c] : ls.counts)
        csv += std::to_string(l) + "," + std::to_string(c) + "," + fixed6(ls.distribution.at(l)) + "\n";
      csv += "# mean_l=" + (ls.mean ? fixed6(*ls.mean) : std::string("nan")) +
             " bridges=" + std::to_string(ls.bridge_count) + "\n";
      if (ls.no_loops()) std::cerr << "NoLoops: every link is a bridge\n";
      emit(loops_output, csv);
    } else if (*stats_cmd) {
      const sfnet::graph g = load_graph(stats_input);
      const auto ds = sfnet::compute_degree_stats(g);
      nlohmann::json hist = nlohmann::json::array();
      for (auto [k, p] : ds.distribution) hist.push_back({{"k", k}, {"probability", p}});
      nlohmann::json j{{"nodes", g.alive_count()},     {"edges", g.edge_count()},
                       {"mean_degree", ds.mean},       {"second_moment", ds.second_moment},
                       {"variance", ds.variance},      {"k_max", ds.k_max},
                       {"histogram", hist}};
      emit(stats_output, j.dump(2) + "\n");
    } else if (*experiment) {
      const auto config = resolve_config(exp_over);
      std::function<void(std::size_t, std::size_t)> progress;
      if (!quiet)
        progress = [](std::size_t done, std::size_t total) {
          std::fprintf(stderr, "\r%zu/%zu cells", done, total);
          if (done == total) std::fputc('\n', stderr);
        };
      const auto table = sfnet::run_experiment(config, progress);
      std::cerr << "wrote " << table.rows.size() << " gamma rows to " << config.out_dir << "\n";
    } else if (*cell) {
      const auto config = resolve_config(cell_over);
      std::size_t index = gamma_index;
      if (gv_opt->count() > 0) {
        const auto grid = config.gamma_grid();
        auto it = std::find_if(grid.begin(), grid.end(),
                               [&](double g) { return std::abs(g - gamma_value) < 1e-9; });
        if (it == grid.end())
          throw sfnet::error(sfnet::errc::invalid_config, "gamma " + std::to_string(gamma_value) + " not on grid");
        index = static_cast<std::size_t>(it - grid.begin());
      }
      const auto result = sfnet::run_cell(config, index, realization);
      std::cout << sfnet::cells_header() << sfnet::format_cell_row(sfnet::summarize(result));
    }
  } catch (const sfnet::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case sfnet::errc::invalid_config:
      case sfnet::errc::invalid_params:
      case sfnet::errc::gamma_out_of_range:
        return exit_config;
      default:
        return exit_runtime;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_runtime;
  }
  return 0;
}
