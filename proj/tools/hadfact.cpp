// hadfact: rank-r Hadamard decompositions from the command line.
#include "hadfact/experiment.hpp"
#include "hadfact/io.hpp"
#include "hadfact/standard.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace hadfact;

namespace {

constexpr int kExitBadInput = 2;
constexpr int kExitInitUnavailable = 3;

struct DecomposeArgs {
  std::string input;
  long rank = 0;
  std::string algo = "projbcd";
  std::string init = "all";
  double time_limit = 60.0;
  long max_iters = 100000000;
  double tol = 0.0;
  double tau = 0.95;
  int kw = 2;
  int kh = 2;
  std::optional<double> beta0;
  std::uint64_t seed = 0;
  std::string output_dir = "hadfact-out";
  bool emit_reconstruction = false;
};

struct BenchArgs {
  std::string spec;
  bool table1 = false;
  bool table2 = false;
  long size = 400;
  int samples = 10;
  double budget = 40.0;
  std::vector<long> ranks{10};
  int threads = 1;
  std::string output_dir = "hadfact-bench";
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join_inits(const std::vector<InitKind>& kinds) {
  std::string out;
  for (const InitKind k : kinds) out += (out.empty() ? "" : ", ") + to_string(k);
  return out;
}

int cmd_decompose(const DecomposeArgs& a) {
  MatrixHandle x;
  try {
    x = io::read_matrix(a.input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  const Index m = x.rows();
  const Index n = x.cols();
  const Index r = a.rank;
  if (r < 1 || r > std::min(m, n)) {
    std::cerr << "error: --rank must lie in [1, " << std::min(m, n) << "]\n";
    return kExitBadInput;
  }

  std::vector<Algorithm> algos;
  std::vector<InitKind> inits;
  bool all_inits_requested = false;
  try {
    for (const auto& s : split(a.algo)) {
      if (s == "all") {
        algos = default_algorithms();
      } else {
        algos.push_back(parse_algorithm(s));
      }
    }
    for (const auto& s : split(a.init)) {
      if (s == "all") {
        all_inits_requested = true;
        inits = hadfact::all_inits();
      } else {
        inits.push_back(parse_init(s));
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  if (algos.empty() || inits.empty()) {
    std::cerr << "error: no algorithm or initialization selected\n";
    return kExitBadInput;
  }

  std::vector<InitKind> available;
  for (const InitKind k : hadfact::all_inits()) {
    if (init_available(k, m, n, r)) available.push_back(k);
  }
  if (all_inits_requested) {
    inits = available;
  } else {
    for (const InitKind k : inits) {
      if (!init_available(k, m, n, r)) {
        std::cerr << "error: initialization '" << to_string(k) << "' needs r^2 <= min(m, n) = "
                  << std::min(m, n) << "; available: " << join_inits(available) << '\n';
        return kExitInitUnavailable;
      }
    }
  }

  AlgorithmOptions options;
  options.config.tau = a.tau;
  options.config.kw = a.kw;
  options.config.kh = a.kh;
  options.config.time_limit = a.time_limit;
  options.config.max_iters = a.max_iters;
  options.config.tol = a.tol;
  options.beta0 = a.beta0;
  try {
    options.config.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  }

  nlohmann::json runs = nlohmann::json::array();
  std::optional<RunRecord> best;
  for (const InitKind k : inits) {
    const auto t0 = std::chrono::steady_clock::now();
    HadamardFactors start;
    try {
      start = initialize(k, x, r);
    } catch (const std::exception& e) {
      runs.push_back({{"init", to_string(k)}, {"status", std::string("init: ") + e.what()}});
      continue;
    }
    const double init_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const Algorithm algo : algos) {
      nlohmann::json j{{"algorithm", to_string(algo)}, {"init", to_string(k)},
                       {"init_seconds", init_seconds}};
      try {
        RunRecord rec = run_algorithm(algo, x, r, start, options);
        rec.initialization = to_string(k);
        j["relative_error"] = rec.best_error;
        j["elapsed"] = rec.elapsed;
        j["iterations"] = rec.iterations;
        j["accepted"] = rec.accepted;
        j["stop"] = to_string(rec.stop);
        j["status"] = "ok";
        std::cout << to_string(algo) << " / " << to_string(k) << ": relative error "
                  << rec.best_error << " after " << rec.iterations << " iterations ("
                  << rec.elapsed << " s)\n";
        if (!best || rec.best_error < best->best_error) best = std::move(rec);
      } catch (const std::exception& e) {
        j["status"] = std::string("solver: ") + e.what();
        std::cerr << "warning: " << to_string(algo) << " / " << to_string(k) << ": " << e.what()
                  << '\n';
      }
      runs.push_back(std::move(j));
    }
  }
  if (!best) {
    std::cerr << "error: no run completed\n";
    return kExitBadInput;
  }

  const fs::path out(a.output_dir);
  fs::create_directories(out);
  io::write_hdmat(out / "W1.hdmat", best->factors.W1);
  io::write_hdmat(out / "H1.hdmat", best->factors.H1);
  io::write_hdmat(out / "W2.hdmat", best->factors.W2);
  io::write_hdmat(out / "H2.hdmat", best->factors.H2);

  const RStar rs = r_star(x, r, best->best_error);
  const Index k2 = std::min<Index>(std::min(m, n), 2 * r);
  nlohmann::json summary{{"input", a.input},
                         {"rows", m},
                         {"cols", n},
                         {"rank", r},
                         {"seed", a.seed},
                         {"best_algorithm", best->algorithm},
                         {"best_init", best->initialization},
                         {"relative_error", best->best_error},
                         {"tsvd_2r_error", tsvd_errors(x, k2)(k2)},
                         {"r_star", rs.r_star},
                         {"q_star", rs.q_star},
                         {"r_star_capped", rs.capped},
                         {"no_accepted_iteration", best->accepted == 0 && best->iterations > 0},
                         {"runs", runs}};
  if (a.emit_reconstruction) {
    const Matrix rec = best->factors.reconstruct();
    if (fs::path(a.input).extension() == ".pgm") {
      io::write_pgm(out / "reconstruction.pgm", rec);
      summary["reconstruction"] = (out / "reconstruction.pgm").string();
    } else {
      io::write_hdmat(out / "reconstruction.hdmat", rec);
      summary["reconstruction"] = (out / "reconstruction.hdmat").string();
    }
  }
  std::ofstream(out / "summary.json") << summary.dump(2) << '\n';
  if (best->accepted == 0 && best->iterations > 0) {
    std::cerr << "warning: the budget ended without an accepted iteration\n";
  }
  std::cout << "best: " << best->algorithm << " / " << best->initialization
            << ", relative error " << best->best_error << ", r* = " << rs.r_star
            << ", q* = " << rs.q_star << '\n';
  return 0;
}

void print_summary(const ExperimentSpec& spec, const ExperimentResult& result) {
  std::cout << spec.name << '\n';
  for (const auto& s : result.summary) {
    std::cout << "  " << s.dataset << " r=" << s.rank << " " << s.algorithm << " [" << s.variant
              << "]: " << 100.0 * s.mean_error << "% +- " << 100.0 * s.std_error
              << " (tsvd 2r " << 100.0 * s.mean_tsvd_2r << "%, r* " << s.mean_r_star << ")\n";
  }
}

int cmd_bench(const BenchArgs& a) {
  std::vector<ExperimentSpec> specs;
  const int modes = (a.spec.empty() ? 0 : 1) + (a.table1 ? 1 : 0) + (a.table2 ? 1 : 0);
  if (modes != 1) {
    std::cerr << "error: give exactly one of --spec, --table1, --table2\n";
    return kExitBadInput;
  }
  if (!a.spec.empty()) {
    try {
      specs.push_back(load_spec(a.spec));
    } catch (const std::exception& e) {
      std::cerr << "error: " << a.spec << ": " << e.what() << '\n';
      return kExitBadInput;
    }
  } else if (a.table1) {
    specs.push_back(table1_spec(a.size, a.samples, a.budget));
  } else {
    std::vector<Index> ranks(a.ranks.begin(), a.ranks.end());
    specs = table2_specs(a.size, a.samples, a.budget, ranks);
  }
  for (auto& spec : specs) {
    if (a.spec.empty()) spec.threads = a.threads;
    const fs::path out(a.output_dir);
    if (spec.csv.empty()) spec.csv = (out / (spec.name + ".csv")).string();
    if (spec.summary_csv.empty()) spec.summary_csv = (out / (spec.name + "_summary.csv")).string();
    if (spec.json.empty()) spec.json = (out / (spec.name + ".json")).string();
    const ExperimentResult result = run_experiment(spec);
    write_outputs(spec, result);
    print_summary(spec, result);
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-r Hadamard decompositions X ~ (W1 H1^T) .* (W2 H2^T)"};
  app.require_subcommand(1);

  DecomposeArgs d;
  auto* dec = app.add_subcommand("decompose", "Decompose one matrix");
  dec->add_option("--input", d.input, "Matrix file (.mtx, .csv, .hdmat, .pgm)")->required();
  dec->add_option("--rank", d.rank, "Rank r of each Hadamard factor")->required();
  dec->add_option("--algo", d.algo, "projbcd|manbcd|bcd|rgd|scaledgd|all (comma list)");
  dec->add_option("--init", d.init, "svd|fs|fsl|fsr|all (comma list)");
  dec->add_option("--time-limit", d.time_limit, "Seconds per (algorithm, init) run");
  dec->add_option("--max-iters", d.max_iters, "Outer iteration cap");
  dec->add_option("--tol", d.tol, "Stop at this relative error");
  dec->add_option("--tau", d.tau, "Step fraction of 1/L, in (0, 2)");
  dec->add_option("--kw", d.kw, "Inner W-block updates");
  dec->add_option("--kh", d.kh, "Inner H-block updates");
  dec->add_option("--beta0", d.beta0, "Initial extrapolation parameter");
  dec->add_option("--seed", d.seed, "Recorded in the summary");
  dec->add_option("--output-dir", d.output_dir, "Directory for factors and summary.json");
  dec->add_flag("--emit-reconstruction", d.emit_reconstruction, "Also write the reconstruction");

  BenchArgs b;
  auto* bench = app.add_subcommand("bench", "Run an experiment spec or a preset protocol");
  bench->add_option("--spec", b.spec, "Experiment spec file");
  bench->add_flag("--table1", b.table1, "Extrapolation / rescaling ablation");
  bench->add_flag("--table2", b.table2, "Synthetic generic / low-rank / decomposable data");
  bench->add_option("--size", b.size, "Matrix size for presets");
  bench->add_option("--samples", b.samples, "Seeds per preset");
  bench->add_option("--budget", b.budget, "Seconds per (algorithm, init) run");
  bench->add_option("--ranks", b.ranks, "Ranks for --table2")->delimiter(',');
  bench->add_option("--threads", b.threads, "Worker threads for presets");
  bench->add_option("--output-dir", b.output_dir, "Directory for CSV and JSON outputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }
  try {
    if (*dec) return cmd_decompose(d);
    return cmd_bench(b);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
