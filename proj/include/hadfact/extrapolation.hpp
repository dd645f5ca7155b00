#pragma once

namespace hadfact {

/// The tuple [beta0, beta_bar, gamma, gamma_bar, eta] driving adaptive
/// extrapolation. Requires 1 < gamma_bar <= gamma <= eta and
/// 0 <= beta0 <= beta_bar <= 1.
struct ExtrapolationParams {
  double beta0 = 0.25;
  double beta_bar = 1.0;
  double gamma = 1.05;
  double gamma_bar = 1.01;
  double eta = 1.5;

  void validate() const;

  static ExtrapolationParams block_defaults() { return {}; }
  static ExtrapolationParams bcd_defaults() { return {0.75, 1.0, 1.05, 1.01, 1.5}; }
};

struct ExtrapolationState {
  double beta = 0.25;
  double beta_bar = 1.0;
  double beta_old = 0.25;
  double gamma = 1.05;
  double gamma_bar = 1.01;
  double eta = 1.5;

  /// Validates the parameters; beta_old starts at beta0.
  explicit ExtrapolationState(const ExtrapolationParams& params = {});
};

/// One adaptive step. After a decrease: beta_old <- beta,
/// beta <- min(beta_bar, gamma*beta), beta_bar <- min(1, gamma_bar*beta_bar).
/// Otherwise: beta_bar <- beta_old, beta <- beta/eta.
ExtrapolationState update_beta(ExtrapolationState state, bool error_decreased);

} // namespace hadfact
