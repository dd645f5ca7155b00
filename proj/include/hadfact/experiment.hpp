#pragma once

#include "hadfact/init.hpp"
#include "hadfact/metrics.hpp"
#include "hadfact/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hadfact {

enum class Algorithm { projbcd, manbcd, bcd, rgd, scaledgd };

std::string to_string(Algorithm algo);
/// Throws std::invalid_argument for unknown names.
Algorithm parse_algorithm(const std::string& name);
/// The benchmark default set: projbcd, manbcd, bcd, rgd (scaled GD is opt-in).
std::vector<Algorithm> default_algorithms();

/// Solver options shared by every algorithm of a run.
struct AlgorithmOptions {
  SolverConfig config;
  std::optional<double> beta0; // overrides the algorithm's default tuple
  double gd_eta = 1e-3;
  bool gd_scaled = true;
};

/// Runs one algorithm. BCD starts from the [0.75, 1, 1.05, 1.01, 1.5] tuple,
/// projbcd / manbcd from options.config.extrapolation.
RunRecord run_algorithm(Algorithm algo, const MatrixHandle& x, Index r,
                        const HadamardFactors& init, const AlgorithmOptions& options);

/// Extrapolation / rescaling switches of the ablation study.
enum class Variant { none, extrapolation, rescaling, both };

std::string to_string(Variant v);
Variant parse_variant(const std::string& name);

struct ExperimentSpec {
  std::string name = "experiment";
  std::string source = "generic"; // generic | lowrank | hd | file
  std::string input;              // path when source = file
  Index rows = 400;
  Index cols = 400;
  std::vector<Index> ranks{10};
  std::vector<Algorithm> algorithms = default_algorithms();
  std::vector<InitKind> inits = all_inits();
  std::vector<Variant> variants{Variant::both};
  std::vector<std::uint64_t> seeds{1};
  double budget = 40.0; // seconds per (algorithm, init) run
  long max_iters = 100000000;
  double tol = 0.0;
  double tau = 0.95;
  int kw = 2;
  int kh = 2;
  std::optional<double> beta0;
  int threads = 1;
  bool compute_r_star = true;
  bool keep_traces = true;
  std::string csv;         // per-run rows
  std::string summary_csv; // aggregated rows
  std::string json;        // runs and traces
};

/// A spec file line that does not fit the schema.
class SpecError : public std::runtime_error {
public:
  SpecError(int line, const std::string& message);
  int line() const { return line_; }

private:
  int line_;
};

/// Parses the flat `key = value` format: '#' starts a comment, lists are
/// comma separated. Unknown keys, bad values and an empty file raise SpecError.
ExperimentSpec parse_spec(std::istream& in);
ExperimentSpec load_spec(const std::string& path);

/// One (seed, rank, algorithm, init, variant) run.
struct CompressionReport {
  std::string dataset;
  std::uint64_t seed = 0;
  Index rank = 0;
  std::string algorithm;
  std::string init;
  std::string variant;
  double relative_error = 0.0;
  double elapsed = 0.0;      // solver seconds
  double init_seconds = 0.0;
  long iterations = 0;
  long accepted = 0;
  std::string stop;
  bool monotone = true;      // accepted errors nonincreasing
  bool best_init = false;    // within 1e-4 of the best init of its group
  double group_best = 0.0;   // best-of-inits error of its group
  double tsvd_2r_error = 0.0;
  Index r_star = 0;
  double q_star = 0.0;
  std::string status = "ok"; // error message when the run failed
  std::vector<IterationRecord> trace;
};

/// Mean / standard deviation over seeds of the best-of-inits errors.
struct SummaryRow {
  std::string dataset;
  Index rank = 0;
  std::string algorithm;
  std::string variant;
  int samples = 0;
  double mean_error = 0.0;
  double std_error = 0.0;
  double mean_tsvd_2r = 0.0;
  double mean_r_star = 0.0;
  double mean_q_star = 0.0;
  std::vector<int> init_wins; // per spec init, ties counted for every winner
};

struct ExperimentResult {
  std::vector<CompressionReport> reports;
  std::vector<SummaryRow> summary;
};

inline constexpr double kTieThreshold = 1e-4;

/// Worker threads: spec.threads capped by HADFACT_THREADS and the hardware.
int effective_threads(int requested);

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Fills best_init / group_best / r_star fields and returns the summary.
std::vector<SummaryRow> summarize(const ExperimentSpec& spec,
                                  std::vector<CompressionReport>& reports);

void write_reports_csv(const std::string& path, const std::vector<CompressionReport>& reports);
void write_summary_csv(const std::string& path, const ExperimentSpec& spec,
                       const std::vector<SummaryRow>& rows);
void write_json(const std::string& path, const ExperimentSpec& spec,
                const ExperimentResult& result);

/// Writes whichever outputs the spec names.
void write_outputs(const ExperimentSpec& spec, const ExperimentResult& result);

/// Ablation over {none, extrapolation, rescaling, both} for manbcd and projbcd
/// on generic size x size data with r = 10.
ExperimentSpec table1_spec(Index size, int samples, double budget);
/// Generic, rank-2r and Hadamard-decomposable data for each rank.
std::vector<ExperimentSpec> table2_specs(Index size, int samples, double budget,
                                         const std::vector<Index>& ranks);

} // namespace hadfact
