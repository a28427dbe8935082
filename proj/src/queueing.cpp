// Copyright 2026 the fogplan authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fogplan/queueing.hpp"

#include <algorithm>
#include <string>

namespace fogplan::queueing {

double mm1_latency(double service_rate, double arrival_rate) {
  if (!(service_rate > 0.0) || arrival_rate < 0.0) {
    throw std::invalid_argument("mm1_latency: need service_rate > 0 and arrival_rate >= 0");
  }
  if (arrival_rate >= service_rate) {
    throw UnstableQueueError("mm1_latency: arrival rate " + std::to_string(arrival_rate) +
                             " >= service rate " + std::to_string(service_rate));
  }
  return 1.0 / (service_rate - arrival_rate);
}

double erlang_c(int servers, double arrival_rate, double service_rate) {
  if (servers < 1 || arrival_rate < 0.0 || !(service_rate > 0.0)) {
    throw std::invalid_argument("erlang_c: need servers >= 1, lambda >= 0, mu > 0");
  }
  if (arrival_rate >= servers * service_rate) {
    throw UnstableQueueError("erlang_c: offered load exceeds capacity");
  }
  const double a = arrival_rate / service_rate;
  // Single server: the waiting probability is the utilization itself.
  if (servers == 1) return a;
  // Erlang-B recurrence B(k) = a*B(k-1) / (k + a*B(k-1)), starting at B(0)=1.
  double b = 1.0;
  for (int k = 1; k <= servers; ++k) {
    b = a * b / (static_cast<double>(k) + a * b);
  }
  const double rho = arrival_rate / (servers * service_rate);
  return b / (1.0 - rho * (1.0 - b));
}

double mmn_response_time(int servers, double arrival_rate, double service_rate) {
  const double c = erlang_c(servers, arrival_rate, service_rate);
  return c / (servers * service_rate - arrival_rate) + 1.0 / service_rate;
}

QueueState buffer_step(const QueueState& state, const SlotEvent& event) {
  if (event.arrivals < 0 || event.admitted < 0 || event.input_drain < 0 || event.output_drain < 0) {
    throw std::invalid_argument("buffer_step: negative slot event field");
  }
  if (event.admitted > event.arrivals) {
    throw AdmissionPolicyError("buffer_step: admitted exceeds arrivals");
  }
  if (event.input_drain > state.input_backlog) {
    throw AdmissionPolicyError("buffer_step: input drain exceeds input backlog");
  }
  if (event.output_drain > state.output_backlog) {
    throw AdmissionPolicyError("buffer_step: output drain exceeds output backlog");
  }

  QueueState next = state;
  next.input_backlog = (state.input_backlog - event.input_drain) + event.admitted;
  next.output_backlog = (state.output_backlog - event.output_drain) + event.input_drain;
  if (next.input_backlog > state.input_cap) {
    throw AdmissionPolicyError("buffer_step: admission exceeds input capacity");
  }
  if (next.output_backlog > state.output_cap) {
    throw AdmissionPolicyError("buffer_step: input drain exceeds output capacity");
  }
  return next;
}

SlotEvent tail_drop_event(const QueueState& state, std::int64_t arrivals,
                          std::int64_t input_service, std::int64_t output_service) {
  if (arrivals < 0 || input_service < 0 || output_service < 0) {
    throw std::invalid_argument("tail_drop_event: negative argument");
  }
  SlotEvent e;
  e.arrivals = arrivals;
  e.output_drain = std::min(state.output_backlog, output_service);
  const std::int64_t output_free = state.output_cap - (state.output_backlog - e.output_drain);
  e.input_drain = std::min({state.input_backlog, input_service, output_free});
  const std::int64_t input_free = state.input_cap - (state.input_backlog - e.input_drain);
  e.admitted = std::min(arrivals, input_free);
  return e;
}

std::int64_t poisson_arrivals(double rate, double slot_seconds, RngStream& rng) {
  if (rate < 0.0 || slot_seconds < 0.0) {
    throw std::invalid_argument("poisson_arrivals: negative rate or slot");
  }
  return rng.poisson(rate * slot_seconds);
}

}  // namespace fogplan::queueing
