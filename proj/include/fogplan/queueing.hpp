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

#ifndef FOGPLAN_QUEUEING_HPP
#define FOGPLAN_QUEUEING_HPP

#include <cstdint>
#include <stdexcept>

#include "fogplan/rng.hpp"

namespace fogplan::queueing {

// Arrival rate at or above the service capacity: the queue has no steady
// state. Raised by the analytic formulas; callers treat it as a QoS
// constraint violation.
class UnstableQueueError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A slot event that would overdrain a buffer or overflow a capacity.
class AdmissionPolicyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mean M/M/1 response time 1/(service_rate - arrival_rate).
// Requires service_rate > arrival_rate >= 0.
double mm1_latency(double service_rate, double arrival_rate);

// Erlang's C formula: probability that an arrival waits in an M/M/n queue.
// Evaluated through the Erlang-B recurrence, so no factorials are formed and
// large n stays in range. Requires arrival_rate < n * service_rate.
double erlang_c(int servers, double arrival_rate, double service_rate);

// Mean M/M/n response time: C(n, a) / (n*mu - lambda) + 1/mu.
double mmn_response_time(int servers, double arrival_rate, double service_rate);

// Slotted FCN buffer pair. Backlogs are request counts.
struct QueueState {
  std::int64_t input_backlog = 0;
  std::int64_t output_backlog = 0;
  std::int64_t input_cap = 0;
  std::int64_t output_cap = 0;
};

// What happened during one slot: arrivals offered, arrivals admitted by the
// ACR, and the amounts drained from each buffer.
struct SlotEvent {
  std::int64_t arrivals = 0;
  std::int64_t admitted = 0;
  std::int64_t input_drain = 0;
  std::int64_t output_drain = 0;
};

// One step of the backlog recurrences:
//   q1_input  = (q_input - input_drain) + admitted
//   q1_output = (q_output - output_drain) + input_drain
// Throws AdmissionPolicyError when a drain exceeds its backlog or a backlog
// would leave its capacity.
QueueState buffer_step(const QueueState& state, const SlotEvent& event);

// Tail-drop admission: drain what the service offers, then admit arrivals up
// to the free input capacity and decline the rest. Output drain is limited by
// the output backlog and input drain by the free space it would claim in the
// output queue.
SlotEvent tail_drop_event(const QueueState& state, std::int64_t arrivals,
                          std::int64_t input_service, std::int64_t output_service);

// Poisson(rate * slot_seconds) sample from the given stream.
std::int64_t poisson_arrivals(double rate, double slot_seconds, RngStream& rng);

}  // namespace fogplan::queueing

#endif  // FOGPLAN_QUEUEING_HPP
