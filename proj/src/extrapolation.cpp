#include "hadfact/extrapolation.hpp"

#include <algorithm>
#include <stdexcept>

namespace hadfact {

void ExtrapolationParams::validate() const {
  if (!(1.0 < gamma_bar && gamma_bar <= gamma && gamma <= eta)) {
    throw std::invalid_argument("extrapolation: need 1 < gamma_bar <= gamma <= eta");
  }
  if (!(0.0 <= beta0 && beta0 <= beta_bar && beta_bar <= 1.0)) {
    throw std::invalid_argument("extrapolation: need 0 <= beta0 <= beta_bar <= 1");
  }
}

ExtrapolationState::ExtrapolationState(const ExtrapolationParams& params) {
  params.validate();
  beta = params.beta0;
  beta_bar = params.beta_bar;
  beta_old = params.beta0;
  gamma = params.gamma;
  gamma_bar = params.gamma_bar;
  eta = params.eta;
}

ExtrapolationState update_beta(ExtrapolationState state, bool error_decreased) {
  if (error_decreased) {
    state.beta_old = state.beta;
    state.beta = std::min(state.beta_bar, state.gamma * state.beta);
    state.beta_bar = std::min(1.0, state.gamma_bar * state.beta_bar);
  } else {
    state.beta_bar = state.beta_old;
    state.beta = state.beta / state.eta;
  }
  return state;
}

} // namespace hadfact
