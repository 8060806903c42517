#include "mpr/actors.hpp"

#include <numeric>
#include <stdexcept>

namespace mpr {

VerifierState::VerifierState(FrequencyPlan plan, std::size_t window_len)
    : plan_(plan), reference_(plan.count()), window_len_(window_len) {
  if (window_len == 0) throw std::invalid_argument("smoothing window must hold at least one estimate");
}

void VerifierState::begin_exchange(Rng& rng) {
  for (auto& r : reference_) r = WrappedPhase(rng.phase());
}

void VerifierState::set_reference_phases(std::vector<WrappedPhase> phases) {
  if (phases.size() != plan_.count()) throw std::invalid_argument("one reference phase per carrier");
  reference_ = std::move(phases);
}

void VerifierState::set_secret_offsets(std::vector<WrappedPhase> offsets) {
  if (offsets.size() != plan_.count()) throw std::invalid_argument("one secret offset per carrier");
  offsets_ = std::move(offsets);
}

double VerifierState::push_distance(double distance_m) {
  history_.push_back(distance_m);
  while (history_.size() > window_len_) history_.pop_front();
  return std::accumulate(history_.begin(), history_.end(), 0.0) /
         static_cast<double>(history_.size());
}

Tone interrogate(const VerifierState& v, std::size_t carrier) {
  if (carrier >= v.plan().count()) throw std::out_of_range("carrier index out of range");
  return {v.plan().frequency(carrier), 1.0, v.reference_phases()[carrier]};
}

Tone respond(const ProverState& p, const ToneObservation& incoming, std::size_t carrier,
             Rng& rng) {
  WrappedPhase phase = estimate_phase(incoming);
  if (p.secret_offsets) {
    if (carrier >= p.secret_offsets->size()) throw std::out_of_range("carrier index out of range");
    phase = phase + (*p.secret_offsets)[carrier];
  }
  if (p.lock_error_std > 0.0) phase = phase + WrappedPhase(rng.normal(p.lock_error_std));
  return {incoming.tone.frequency, 1.0, phase};
}

PhaseProfile measure_profile(const VerifierState& v, std::span<const ToneObservation> responses) {
  const auto& plan = v.plan();
  if (responses.size() != plan.count()) throw std::invalid_argument("one response per carrier");
  std::vector<WrappedPhase> theta;
  theta.reserve(plan.count());
  for (std::size_t i = 0; i < plan.count(); ++i) {
    WrappedPhase lag = v.reference_phases()[i] - estimate_phase(responses[i]);
    if (v.secret_offsets()) lag = lag + (*v.secret_offsets())[i];
    theta.push_back(lag);
  }
  return {plan, std::move(theta)};
}

double smoothed_distance(VerifierState& v, const RangeEstimate& estimate) {
  return v.push_distance(estimate.distance);
}

}  // namespace mpr
