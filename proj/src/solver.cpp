#include "hadfact/solver.hpp"

#include <algorithm>
#include <cmath>

namespace hadfact {

namespace {
constexpr double kStagnationBeta = 1e-6;
}

void SolverConfig::validate() const {
  if (!(tau > 0.0 && tau < 2.0)) throw std::invalid_argument("tau must lie in (0, 2)");
  if (kw < 1 || kh < 1) throw std::invalid_argument("kw and kh must be at least 1");
  if (max_iters < 0) throw std::invalid_argument("max_iters must be nonnegative");
  if (!(time_limit > 0.0)) throw std::invalid_argument("time_limit must be positive");
  if (!(tol >= 0.0)) throw std::invalid_argument("tol must be nonnegative");
  if (stagnation_window < 1) throw std::invalid_argument("stagnation_window must be positive");
  extrapolation.validate();
}

std::string to_string(StopReason reason) {
  switch (reason) {
  case StopReason::tolerance: return "tolerance";
  case StopReason::max_iterations: return "max_iterations";
  case StopReason::time_limit: return "time_limit";
  case StopReason::stagnation: return "stagnation";
  case StopReason::zero_data: return "zero_data";
  }
  return "unknown";
}

void FlowDiagnostics::merge(const FlowDiagnostics& other) {
  max_norm_drift = std::max(max_norm_drift, other.max_norm_drift);
  max_norm_error = std::max(max_norm_error, other.max_norm_error);
  max_ratio_drift = std::max(max_ratio_drift, other.max_ratio_drift);
  min_omega_radicand = std::min(min_omega_radicand, other.min_omega_radicand);
  steps += other.steps;
}

bool RunRecord::accepted_errors_nonincreasing() const {
  double prev = initial_error;
  for (const auto& it : trace) {
    if (!it.accepted) continue;
    if (it.relative_error > prev) return false;
    prev = it.relative_error;
  }
  return true;
}

ProgressTracker::ProgressTracker(const SolverConfig& config, double initial_error)
    : config_(config), start_(std::chrono::steady_clock::now()), best_(initial_error),
      initial_(initial_error) {}

double ProgressTracker::elapsed() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

bool ProgressTracker::record(double error, bool accepted, double beta) {
  ++iterations_;
  const double t = elapsed();
  if (accepted) {
    ++accepted_;
    best_ = error;
    consecutive_rejections_ = 0;
  } else {
    ++consecutive_rejections_;
  }
  if (config_.record_trace) trace_.push_back({iterations_, error, t, beta, accepted});

  if (best_ <= config_.tol) {
    stop_ = StopReason::tolerance;
    return false;
  }
  if (iterations_ >= config_.max_iters) {
    stop_ = StopReason::max_iterations;
    return false;
  }
  if (t >= config_.time_limit) {
    stop_ = StopReason::time_limit;
    return false;
  }
  if (consecutive_rejections_ >= config_.stagnation_window && beta < kStagnationBeta) {
    stop_ = StopReason::stagnation;
    return false;
  }
  return true;
}

void ProgressTracker::finish(RunRecord& record) {
  record.initial_error = initial_;
  record.best_error = best_;
  record.iterations = iterations_;
  record.accepted = accepted_;
  record.elapsed = elapsed();
  record.stop = stop_;
  if (iterations_ == 0 && best_ <= config_.tol) record.stop = StopReason::tolerance;
  record.trace = std::move(trace_);
}

} // namespace hadfact
