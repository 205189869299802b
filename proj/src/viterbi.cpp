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

#include "vsr/viterbi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "vsr/common.hpp"

namespace vsr {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double w) {
  if (w < 0.0 || std::isnan(w)) throw std::invalid_argument("weights must be non-negative");
  return w == 0.0 ? kNegInf : std::log(w);
}
}  // namespace

void Transitions::add(std::size_t from, std::size_t to, double weight) {
  if (from >= states() || to >= states()) throw std::out_of_range("transition state out of range");
  const double lw = safe_log(weight);
  if (lw == kNegInf) return;
  incoming_[to].push_back({from, lw});
}

void Transitions::finalize() {
  for (auto& list : incoming_) {
    std::stable_sort(list.begin(), list.end(),
                     [](const Edge& a, const Edge& b) { return a.from < b.from; });
  }
}

std::size_t Transitions::edge_count() const {
  std::size_t n = 0;
  for (const auto& list : incoming_) n += list.size();
  return n;
}

std::vector<std::size_t> Transitions::outgoing(std::size_t from) const {
  std::vector<std::size_t> out;
  for (std::size_t to = 0; to < incoming_.size(); ++to) {
    for (const auto& e : incoming_[to]) {
      if (e.from == from) {
        out.push_back(to);
        break;
      }
    }
  }
  return out;
}

LogObservations::LogObservations(std::size_t n_steps, std::size_t n_states, double fill)
    : steps(n_steps), states(n_states), values(n_steps * n_states, fill) {}

ViterbiPath viterbi_log(std::span<const double> log_priors, const Transitions& transitions,
                        const LogObservations& log_obs) {
  const std::size_t n_states = transitions.states();
  if (log_obs.steps == 0) throw std::invalid_argument("viterbi needs at least one step");
  if (log_priors.size() != n_states || log_obs.states != n_states) {
    throw std::invalid_argument("viterbi: prior/observation size does not match state count");
  }
  for (std::size_t s = 0; s < n_states; ++s) {
    const auto& list = transitions.incoming(s);
    if (!std::is_sorted(list.begin(), list.end(),
                        [](const auto& a, const auto& b) { return a.from < b.from; })) {
      throw std::invalid_argument("viterbi: transitions not finalized");
    }
  }

  const std::size_t steps = log_obs.steps;
  std::vector<double> prev(n_states), cur(n_states);
  std::vector<std::uint32_t> back(steps * n_states, 0);

  for (std::size_t s = 0; s < n_states; ++s) prev[s] = log_priors[s] + log_obs.at(0, s);

  for (std::size_t t = 1; t < steps; ++t) {
    for (std::size_t j = 0; j < n_states; ++j) {
      const double obs = log_obs.at(t, j);
      double best = kNegInf;
      std::size_t arg = 0;
      if (obs != kNegInf) {
        for (const auto& e : transitions.incoming(j)) {
          const double v = prev[e.from] + e.log_weight;
          if (v > best) {
            best = v;
            arg = e.from;
          }
        }
      }
      cur[j] = best == kNegInf ? kNegInf : best + obs;
      back[t * n_states + j] = static_cast<std::uint32_t>(arg);
    }
    std::swap(prev, cur);
  }

  double best = kNegInf;
  std::size_t last = 0;
  for (std::size_t s = 0; s < n_states; ++s) {
    if (prev[s] > best) {
      best = prev[s];
      last = s;
    }
  }
  if (best == kNegInf) throw DataError("viterbi: no path with non-zero weight");

  ViterbiPath result;
  result.log_score = best;
  result.states.resize(steps);
  result.states[steps - 1] = last;
  for (std::size_t t = steps - 1; t > 0; --t) {
    result.states[t - 1] = back[t * n_states + result.states[t]];
  }
  return result;
}

ViterbiPath viterbi_generic(std::span<const double> priors, const Transitions& transitions,
                            const std::vector<std::vector<double>>& observations) {
  const std::size_t n_states = transitions.states();
  std::vector<double> log_priors(priors.size());
  std::transform(priors.begin(), priors.end(), log_priors.begin(), safe_log);
  LogObservations obs(observations.size(), n_states, kNegInf);
  for (std::size_t t = 0; t < observations.size(); ++t) {
    if (observations[t].size() != n_states) {
      throw std::invalid_argument("viterbi: observation row size does not match state count");
    }
    for (std::size_t s = 0; s < n_states; ++s) obs.at(t, s) = safe_log(observations[t][s]);
  }
  return viterbi_log(log_priors, transitions, obs);
}

double path_log_score(std::span<const double> log_priors, const Transitions& transitions,
                      const LogObservations& log_obs, std::span<const std::size_t> path) {
  if (path.empty() || path.size() != log_obs.steps) {
    throw std::invalid_argument("path length does not match observation steps");
  }
  double score = log_priors[path[0]] + log_obs.at(0, path[0]);
  for (std::size_t t = 1; t < path.size(); ++t) {
    double w = kNegInf;
    for (const auto& e : transitions.incoming(path[t])) {
      if (e.from == path[t - 1]) {
        w = e.log_weight;
        break;
      }
    }
    score += w + log_obs.at(t, path[t]);
  }
  return score;
}

}  // namespace vsr
