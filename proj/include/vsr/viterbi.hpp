// Copyright 2026 The vsr3d Authors
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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vsr {

/// Sparse transition structure stored as incoming edges per state, sorted by
/// source index. Weights are linear (>= 0); zero-weight edges are dropped.
class Transitions {
 public:
  explicit Transitions(std::size_t states = 0) : incoming_(states) {}

  std::size_t states() const { return incoming_.size(); }
  void add(std::size_t from, std::size_t to, double weight);
  /// Sorts incoming lists by source. Called automatically by the decoder.
  void finalize();

  struct Edge {
    std::size_t from;
    double log_weight;
  };
  const std::vector<Edge>& incoming(std::size_t to) const { return incoming_[to]; }
  std::size_t edge_count() const;
  /// Outgoing targets of a state (linear scan; intended for inspection and tests).
  std::vector<std::size_t> outgoing(std::size_t from) const;

 private:
  std::vector<std::vector<Edge>> incoming_;
};

/// Dense step x state matrix of log observation weights (-inf = impossible).
struct LogObservations {
  std::size_t steps = 0;
  std::size_t states = 0;
  std::vector<double> values;

  LogObservations() = default;
  LogObservations(std::size_t n_steps, std::size_t n_states, double fill);
  double& at(std::size_t step, std::size_t state) { return values[step * states + state]; }
  double at(std::size_t step, std::size_t state) const { return values[step * states + state]; }
};

struct ViterbiPath {
  std::vector<std::size_t> states;
  double log_score = 0.0;
};

/// Most likely state path maximizing prior * obs_0 * prod(transition * obs).
/// Works in log space; ties resolve to the smallest state index. Throws
/// DataError when every path has zero weight.
ViterbiPath viterbi_log(std::span<const double> log_priors, const Transitions& transitions,
                        const LogObservations& log_obs);

/// Linear-weight front end: priors[s] and observations[t][s] are >= 0.
ViterbiPath viterbi_generic(std::span<const double> priors, const Transitions& transitions,
                            const std::vector<std::vector<double>>& observations);

/// Log score of a given path under the same model, for verification.
double path_log_score(std::span<const double> log_priors, const Transitions& transitions,
                      const LogObservations& log_obs, std::span<const std::size_t> path);

}  // namespace vsr
