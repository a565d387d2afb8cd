// lawclust command-line interface.
//
// Subcommands:
//   cluster    cluster data sets and write matrix/dendrogram/partition files
//   distance   compute the distance matrix only
//   gof-test   single-direction two-sample goodness-of-fit test
//   threshold  evaluate the dendrogram cut threshold for a given setup
//   simulate   Monte Carlo study of the clustering procedure
//
// Exit status: 0 on success, 1 on usage error, 2 on data error.

#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lawclust/lawclust.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonInputs {
  std::vector<std::string> files;
  std::string format = "wide";
  std::uint64_t seed = 0;
};

void add_input_options(CLI::App* cmd, CommonInputs& in, std::size_t min_files) {
  cmd->add_option("files", in.files, "input CSV files")->required()->expected(static_cast<int>(min_files), -1);
  cmd->add_option("--format", in.format, "input layout: wide (one set per file) or long")
      ->check(CLI::IsMember({"wide", "long"}))
      ->capture_default_str();
  cmd->add_option("--seed", in.seed, "RNG seed for the direction draws")->capture_default_str();
}

std::vector<lawclust::DataSet> load_inputs(const CommonInputs& in) {
  std::vector<fs::path> paths(in.files.begin(), in.files.end());
  return lawclust::load_datasets(
      paths, in.format == "wide" ? lawclust::DataFormat::Wide : lawclust::DataFormat::Long);
}

json input_fingerprints(const CommonInputs& in, const std::vector<lawclust::DataSet>& datasets) {
  json files = json::array();
  for (const auto& f : in.files)
    files.push_back({{"path", f}, {"digest", lawclust::fnv1a_file_digest(f)}});
  json sets = json::array();
  for (const auto& ds : datasets)
    sets.push_back({{"id", ds.id()}, {"samples", ds.sample_count()}});
  return json{{"files", std::move(files)}, {"sets", std::move(sets)}};
}

json grid_summary(const lawclust::Grid& grid) {
  return json{{"points", grid.size()}, {"horizon", grid.horizon()}};
}

void write_manifest(const fs::path& out_dir, json manifest) {
  manifest["tool"] = "lawclust";
  manifest["version"] = lawclust::kVersion;
  lawclust::write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

void print_partition(const lawclust::Partition& p) {
  std::vector<std::vector<std::string>> clusters(p.cluster_count());
  for (const auto& [label, cluster] : p.assignment()) clusters[cluster].push_back(label);
  std::cout << "clusters (" << clusters.size() << "):\n";
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    std::cout << "  " << c << ":";
    for (const auto& l : clusters[c]) std::cout << ' ' << l;
    std::cout << '\n';
  }
}

struct ClusterOptions {
  CommonInputs in;
  double alpha = 0.0;  // 0 = use sqrt(1/min N)
  std::size_t directions = 0;
  std::size_t sigma = 10;
  double constant_c = std::numbers::e;
  std::size_t delta_grid = 512;
  std::string out_dir = ".";
  unsigned threads = 0;
  bool export_directions = false;
};

void run_cluster(const ClusterOptions& opt, bool matrix_only) {
  const auto datasets = load_inputs(opt.in);
  if (datasets.size() < 2) throw lawclust::TooFewSets("need at least 2 data sets");
  const lawclust::Grid grid = lawclust::validate_common_grid(datasets);

  std::size_t min_n = datasets.front().sample_count();
  for (const auto& ds : datasets) min_n = std::min(min_n, ds.sample_count());
  const std::size_t m = opt.directions > 0 ? opt.directions : opt.sigma * min_n;
  const double alpha =
      opt.alpha > 0.0 ? opt.alpha : std::sqrt(1.0 / static_cast<double>(min_n));

  const auto dirs = lawclust::sample_directions(grid, m, opt.in.seed);
  const auto dmat = lawclust::distance_matrix(datasets, dirs, opt.threads);

  const fs::path out_dir(opt.out_dir);
  fs::create_directories(out_dir);
  lawclust::write_text(out_dir / "distance_matrix.csv", lawclust::distance_matrix_csv(dmat));
  lawclust::write_text(out_dir / "distance_variance.csv",
                       lawclust::distance_matrix_csv(dmat, true));
  if (opt.export_directions)
    lawclust::write_text(out_dir / "directions.csv", lawclust::directions_csv(dirs));

  json manifest;
  manifest["command"] = matrix_only ? "distance" : "cluster";
  manifest["config"] = {{"alpha", alpha},
                        {"directions", m},
                        {"constant_c", opt.constant_c},
                        {"delta_grid_size", opt.delta_grid},
                        {"seed", opt.in.seed},
                        {"format", opt.in.format},
                        {"quadrature", "trapezoid"}};
  manifest["inputs"] = input_fingerprints(opt.in, datasets);
  manifest["grid"] = grid_summary(grid);
  json outputs = {{"distance_matrix", (out_dir / "distance_matrix.csv").string()},
                  {"distance_variance", (out_dir / "distance_variance.csv").string()}};

  if (matrix_only) {
    manifest["outputs"] = std::move(outputs);
    write_manifest(out_dir, std::move(manifest));
    std::cout << lawclust::distance_matrix_csv(dmat);
    return;
  }

  lawclust::ThresholdConfig tc;
  tc.alpha = alpha;
  tc.dkw_constant = opt.constant_c;
  tc.delta_grid_size = opt.delta_grid;
  tc.directions = m;
  tc.min_samples = dmat.min_samples();
  tc.max_variance = dmat.max_variance();
  const auto thr = lawclust::select_cut_threshold(tc);

  const auto dendro = lawclust::complete_linkage(dmat);
  const auto partition = lawclust::cut_at_threshold(dendro, thr.value);

  lawclust::write_text(out_dir / "dendrogram.json",
                       lawclust::dendrogram_json(dendro).dump(2) + "\n");
  lawclust::write_text(out_dir / "partition.csv", lawclust::partition_csv(partition));

  outputs["threshold"] = thr.value;
  outputs["threshold_delta"] = thr.delta;
  outputs["dendrogram"] = (out_dir / "dendrogram.json").string();
  outputs["partition"] = (out_dir / "partition.csv").string();
  manifest["outputs"] = std::move(outputs);
  write_manifest(out_dir, std::move(manifest));

  std::cout << "threshold = " << lawclust::format_double(thr.value)
            << " (delta = " << lawclust::format_double(thr.delta) << ")\n";
  print_partition(partition);
}

struct SimulateOptions {
  std::string model = "sbb";
  std::vector<double> thetas;
  std::vector<std::size_t> n_values{40, 60, 80, 100, 120, 140, 160};
  std::vector<std::size_t> sigma_values{10, 30, 50};
  std::size_t replicates = 100;
  std::size_t grid_points = 80;
  std::uint64_t seed = 0;
  double constant_c = std::numbers::e;
  std::size_t delta_grid = 512;
  double alpha = 0.0;  // 0 = sqrt(1/N) rule
  unsigned threads = 0;
  std::string out_dir = ".";
  bool svg = false;
};

void run_simulate(const SimulateOptions& opt) {
  lawclust::ExperimentConfig cfg;
  cfg.model = opt.model == "sbb" ? lawclust::Model::SBB : lawclust::Model::AR;
  cfg.thetas = opt.thetas;
  if (cfg.thetas.empty())
    cfg.thetas = cfg.model == lawclust::Model::SBB
                     ? std::vector<double>{1, 1, 2, 2, 2, 4, 4}
                     : std::vector<double>{0.99, 0.99, 0.66, 0.66, 0.66, 0.33, 0.33};
  cfg.n_values = opt.n_values;
  cfg.sigma_values = opt.sigma_values;
  cfg.replicates = opt.replicates;
  cfg.grid_points = opt.grid_points;
  cfg.seed = opt.seed;
  cfg.dkw_constant = opt.constant_c;
  cfg.delta_grid_size = opt.delta_grid;
  cfg.alpha_override = opt.alpha;
  cfg.threads = opt.threads;

  const auto report = lawclust::run_experiment(cfg);
  const std::string csv = lawclust::report_csv(report);

  const fs::path out_dir(opt.out_dir);
  fs::create_directories(out_dir);
  lawclust::write_text(out_dir / "report.csv", csv);

  json manifest;
  manifest["command"] = "simulate";
  manifest["config"] = {{"model", opt.model},
                        {"thetas", cfg.thetas},
                        {"n_values", cfg.n_values},
                        {"sigma_values", cfg.sigma_values},
                        {"replicates", cfg.replicates},
                        {"grid_points", cfg.grid_points},
                        {"seed", cfg.seed},
                        {"constant_c", cfg.dkw_constant},
                        {"delta_grid_size", cfg.delta_grid_size},
                        {"alpha_rule", "sqrt(1/N)"},
                        {"quadrature", "trapezoid"}};
  manifest["inputs"] = json::array();
  json outputs = {{"report", (out_dir / "report.csv").string()}};
  if (opt.svg) {
    const fs::path chart = out_dir / ("report_" + opt.model + ".svg");
    lawclust::write_text(chart, lawclust::report_chart_svg(report));
    outputs["chart"] = chart.string();
  }
  manifest["outputs"] = std::move(outputs);
  write_manifest(out_dir, std::move(manifest));

  std::cout << csv;
}

struct GofOptions {
  CommonInputs in;
  double alpha = 0.05;
};

void run_gof(const GofOptions& opt) {
  const auto datasets = load_inputs(opt.in);
  if (datasets.size() != 2)
    throw lawclust::InvalidParameter("goodness-of-fit test needs exactly 2 data sets");
  const lawclust::Grid grid = lawclust::validate_common_grid(datasets);

  std::mt19937_64 rng(lawclust::derive_seed(opt.in.seed, 0x676fu));
  const auto direction = lawclust::sample_brownian_bridge(grid, rng);

  std::vector<double> proj_x, proj_y;
  for (const auto& s : datasets[0].samples())
    proj_x.push_back(lawclust::project(s, direction, grid));
  for (const auto& s : datasets[1].samples())
    proj_y.push_back(lawclust::project(s, direction, grid));

  const auto res = lawclust::ks_gof_test(proj_x, proj_y);
  std::cout << "statistic = " << lawclust::format_double(res.statistic) << '\n'
            << "p_value = " << lawclust::format_double(res.p_value) << '\n'
            << "reject at level " << opt.alpha << ": " << (res.p_value < opt.alpha ? "yes" : "no")
            << '\n';
}

struct ThresholdOptions {
  double alpha = 0.05;
  std::size_t samples = 2;
  std::size_t directions = 2;
  double v_star = 0.0;
  double constant_c = std::numbers::e;
  std::size_t delta_grid = 512;
};

void run_threshold(const ThresholdOptions& opt) {
  lawclust::ThresholdConfig tc;
  tc.alpha = opt.alpha;
  tc.dkw_constant = opt.constant_c;
  tc.delta_grid_size = opt.delta_grid;
  tc.directions = opt.directions;
  tc.min_samples = opt.samples;
  tc.max_variance = opt.v_star;
  const auto thr = lawclust::select_cut_threshold(tc);
  std::cout << "threshold = " << lawclust::format_double(thr.value) << '\n'
            << "delta = " << lawclust::format_double(thr.delta) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cluster sets of functional data by their generating probability law"};
  app.require_subcommand(1);

  ClusterOptions cluster_opt;
  auto* cluster = app.add_subcommand("cluster", "cluster data sets and write all artifacts");
  add_input_options(cluster, cluster_opt.in, 1);
  cluster->add_option("--alpha", cluster_opt.alpha, "test level (default sqrt(1/min N))");
  auto* dir_opt = cluster->add_option("--directions", cluster_opt.directions,
                                      "number of random directions M");
  cluster->add_option("--sigma", cluster_opt.sigma, "directions per sample: M = sigma * min N")
      ->excludes(dir_opt)
      ->capture_default_str();
  cluster->add_option("--constant-c", cluster_opt.constant_c, "DKW constant C (>= 2)")
      ->check(CLI::Range(2.0, 1e9))
      ->capture_default_str();
  cluster->add_option("--delta-grid", cluster_opt.delta_grid, "delta search grid size")
      ->check(CLI::Range(std::size_t{16}, std::size_t{100000000}))
      ->capture_default_str();
  cluster->add_option("--out", cluster_opt.out_dir, "output directory")->capture_default_str();
  cluster->add_option("--threads", cluster_opt.threads, "worker threads (0 = auto)")
      ->capture_default_str();
  cluster->add_flag("--export-directions", cluster_opt.export_directions,
                    "also write the sampled directions as CSV");
  cluster->callback([&] { run_cluster(cluster_opt, false); });

  ClusterOptions distance_opt;
  auto* distance = app.add_subcommand("distance", "compute the distance matrix only");
  add_input_options(distance, distance_opt.in, 1);
  auto* ddir = distance->add_option("--directions", distance_opt.directions,
                                    "number of random directions M");
  distance->add_option("--sigma", distance_opt.sigma, "directions per sample: M = sigma * min N")
      ->excludes(ddir)
      ->capture_default_str();
  distance->add_option("--out", distance_opt.out_dir, "output directory")->capture_default_str();
  distance->add_option("--threads", distance_opt.threads, "worker threads (0 = auto)")
      ->capture_default_str();
  distance->add_flag("--export-directions", distance_opt.export_directions,
                     "also write the sampled directions as CSV");
  distance->callback([&] { run_cluster(distance_opt, true); });

  GofOptions gof_opt;
  auto* gof = app.add_subcommand("gof-test",
                                 "two-sample goodness-of-fit test on one random direction");
  add_input_options(gof, gof_opt.in, 2);
  gof->add_option("--alpha", gof_opt.alpha, "test level")->capture_default_str();
  gof->callback([&] { run_gof(gof_opt); });

  ThresholdOptions thr_opt;
  auto* thr = app.add_subcommand("threshold", "evaluate the dendrogram cut threshold");
  thr->add_option("--alpha", thr_opt.alpha, "test level")->required()->check(CLI::Range(1e-12, 1.0));
  thr->add_option("--samples", thr_opt.samples, "smallest sample count N")->required();
  thr->add_option("--directions", thr_opt.directions, "direction count M")->required();
  thr->add_option("--v-star", thr_opt.v_star, "worst-case empirical variance")
      ->capture_default_str();
  thr->add_option("--constant-c", thr_opt.constant_c, "DKW constant C (>= 2)")
      ->check(CLI::Range(2.0, 1e9))
      ->capture_default_str();
  thr->add_option("--delta-grid", thr_opt.delta_grid, "delta search grid size")
      ->capture_default_str();
  thr->callback([&] { run_threshold(thr_opt); });

  SimulateOptions sim_opt;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo study of the clustering procedure");
  sim->add_option("--model", sim_opt.model, "data model")
      ->check(CLI::IsMember({"sbb", "ar"}))
      ->required();
  sim->add_option("--thetas", sim_opt.thetas, "generating parameter per data set")
      ->delimiter(',');
  sim->add_option("--n", sim_opt.n_values, "sample sizes N")->delimiter(',')
      ->capture_default_str();
  sim->add_option("--sigma", sim_opt.sigma_values, "direction multipliers (M = sigma N)")
      ->delimiter(',')
      ->capture_default_str();
  sim->add_option("--replicates", sim_opt.replicates, "replicates per cell")
      ->capture_default_str();
  sim->add_option("--grid-points", sim_opt.grid_points, "grid points per function")
      ->capture_default_str();
  sim->add_option("--seed", sim_opt.seed, "master RNG seed")->capture_default_str();
  sim->add_option("--alpha", sim_opt.alpha, "fixed test level (default: sqrt(1/N) per cell)");
  sim->add_option("--constant-c", sim_opt.constant_c, "DKW constant C (>= 2)")
      ->check(CLI::Range(2.0, 1e9))
      ->capture_default_str();
  sim->add_option("--delta-grid", sim_opt.delta_grid, "delta search grid size")
      ->capture_default_str();
  sim->add_option("--threads", sim_opt.threads, "worker threads (0 = auto)")
      ->capture_default_str();
  sim->add_option("--out", sim_opt.out_dir, "output directory")->capture_default_str();
  sim->add_flag("--svg", sim_opt.svg, "also write an SVG line chart");
  sim->callback([&] { run_simulate(sim_opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const lawclust::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
