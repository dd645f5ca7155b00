#pragma once

#include "hadfact/extrapolation.hpp"
#include "hadfact/factors.hpp"

#include <chrono>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace hadfact {

/// Raised when an iterate stops being finite.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SolverConfig {
  double tau = 0.95;           // step fraction of 1/L, in (0, 2)
  int kw = 2;                  // inner updates of the W-block
  int kh = 2;                  // inner updates of the H-block
  long max_iters = 100000000;
  double time_limit = std::numeric_limits<double>::infinity(); // seconds
  double tol = 0.0;            // stop once the relative error is <= tol
  ExtrapolationParams extrapolation{};
  bool use_extrapolation = true;
  bool use_rescaling = true;
  int stagnation_window = 100; // consecutive rejections (with beta < 1e-6)
  bool record_trace = true;

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct IterationRecord {
  long iteration = 0;
  double relative_error = 0.0;
  double elapsed = 0.0;
  double beta = 0.0;
  bool accepted = false;
};

enum class StopReason { tolerance, max_iterations, time_limit, stagnation, zero_data };

std::string to_string(StopReason reason);

/// Diagnostics of the manifold-flow inner step, aggregated over a run.
struct FlowDiagnostics {
  double max_norm_drift = 0.0;    // | ||x_i|| - 1 | before renormalization
  double max_norm_error = 0.0;    // | ||x_i|| - 1 | after renormalization
  double max_ratio_drift = 0.0;   // relative change of mu_i / nu_i in one step
  double min_omega_radicand = 1.0; // min over capped rows of 1 - theta h / rho
  long steps = 0;

  void merge(const FlowDiagnostics& other);
};

struct RunRecord {
  std::string algorithm;
  std::string initialization;
  HadamardFactors factors;       // approximate the original (unnormalized) X
  double initial_error = 0.0;    // relative
  double best_error = 0.0;       // relative, of the returned factors
  long iterations = 0;
  long accepted = 0;
  double elapsed = 0.0;          // seconds
  StopReason stop = StopReason::max_iterations;
  std::vector<IterationRecord> trace;
  FlowDiagnostics flow;

  /// True when the accepted errors (initial error first) never increase.
  bool accepted_errors_nonincreasing() const;
};

/// Accept/reject bookkeeping and stopping rules shared by the iterative solvers.
class ProgressTracker {
public:
  ProgressTracker(const SolverConfig& config, double initial_error);

  /// Records one outer iteration; returns false once a stopping rule fires.
  bool record(double error, bool accepted, double beta);

  double best_error() const { return best_; }
  double elapsed() const;
  long iterations() const { return iterations_; }
  /// Ends the run early for a reason detected by the caller.
  void stop(StopReason reason) { stop_ = reason; }
  /// Moves the trace and counters into `record`.
  void finish(RunRecord& record);

private:
  const SolverConfig& config_;
  std::chrono::steady_clock::time_point start_;
  double best_;
  long iterations_ = 0;
  long accepted_ = 0;
  int consecutive_rejections_ = 0;
  StopReason stop_ = StopReason::max_iterations;
  double initial_;
  std::vector<IterationRecord> trace_;
};

} // namespace hadfact
