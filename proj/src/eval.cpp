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

#include "vsr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vsr {

const std::map<std::string, std::string>& jeffers_viseme_table() {
  static const std::map<std::string, std::string> table = [] {
    const std::vector<std::pair<std::string, std::vector<std::string>>> groups = {
        {"/A", {"F", "V"}},
        {"/B", {"OW", "R", "W", "UH", "UW", "ER"}},
        {"/C", {"B", "P", "M"}},
        {"/D", {"AW"}},
        {"/E", {"DH", "TH"}},
        {"/F", {"CH", "JH", "SH", "ZH"}},
        {"/G", {"OY", "AO"}},
        {"/H", {"S", "Z"}},
        {"/I", {"AA", "AE", "AH", "AY", "EH", "EY", "IH", "IY", "Y"}},
        {"/J", {"D", "L", "N", "T"}},
        {"/K", {"G", "K", "NG"}},
        {"/L", {"sil"}},
    };
    std::map<std::string, std::string> t;
    for (const auto& [viseme, phonemes] : groups) {
      for (const auto& p : phonemes) t.emplace(p, viseme);
    }
    return t;
  }();
  return table;
}

std::optional<std::string> viseme_of(const std::string& token) {
  if (token == "HH") return std::nullopt;
  const auto& table = jeffers_viseme_table();
  if (auto it = table.find(token); it != table.end()) return it->second;
  if (token.size() == 2 && token[0] == '/' && token[1] >= 'A' && token[1] <= 'L') return token;
  throw std::invalid_argument("token '" + token + "' has no viseme mapping");
}

LabelSequence map_to_visemes(std::span<const std::string> seq) {
  LabelSequence out;
  for (const auto& tok : seq) {
    if (auto v = viseme_of(tok)) out.push_back(*v);
  }
  return out;
}

LabelSequence strip_internal_silence(std::span<const std::string> seq) {
  std::size_t first = 0, last = seq.size();
  while (first < last && seq[first] == kSilence) ++first;
  while (last > first && seq[last - 1] == kSilence) --last;
  LabelSequence out;
  if (first > 0) out.push_back(kSilence);
  for (std::size_t i = first; i < last; ++i) {
    if (seq[i] != kSilence) out.push_back(seq[i]);
  }
  if (last < seq.size() && first < last) out.push_back(kSilence);
  return out;
}

AlignmentCounts& AlignmentCounts::operator+=(const AlignmentCounts& o) {
  total += o.total;
  correct += o.correct;
  substitutions += o.substitutions;
  deletions += o.deletions;
  insertions += o.insertions;
  return *this;
}

Alignment align_nw(std::span<const std::string> ref, std::span<const std::string> hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::vector<int>> cost(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = 0; i <= n; ++i) cost[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= m; ++j) cost[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const int diag = cost[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cost[i][j] = std::min({diag, cost[i - 1][j] + 1, cost[i][j - 1] + 1});
    }
  }

  Alignment out;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && cost[i][j] == cost[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1)) {
      out.pairs.push_back({ref[i - 1], hyp[j - 1]});
      if (ref[i - 1] == hyp[j - 1]) {
        ++out.counts.correct;
      } else {
        ++out.counts.substitutions;
      }
      --i;
      --j;
    } else if (i > 0 && cost[i][j] == cost[i - 1][j] + 1) {
      out.pairs.push_back({ref[i - 1], std::nullopt});
      ++out.counts.deletions;
      --i;
    } else {
      out.pairs.push_back({std::nullopt, hyp[j - 1]});
      ++out.counts.insertions;
      --j;
    }
  }
  std::reverse(out.pairs.begin(), out.pairs.end());
  out.counts.total = static_cast<int>(n);
  return out;
}

double accuracy(const AlignmentCounts& c) {
  if (c.total <= 0) throw std::invalid_argument("accuracy: reference sequence is empty");
  return static_cast<double>(c.correct - c.insertions) / c.total;
}

ConfusionMatrix confusion_matrix(std::span<const std::vector<AlignedPair>> alignments,
                                 std::span<const std::string> labels) {
  ConfusionMatrix cm;
  cm.labels.assign(labels.begin(), labels.end());
  const std::size_t L = labels.size();
  cm.cells.assign(L + 1, std::vector<long>(L + 1, 0));
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < L; ++i) index.emplace(labels[i], i);
  const auto lookup = [&](const std::string& tok) {
    auto it = index.find(tok);
    if (it == index.end()) throw std::invalid_argument("confusion_matrix: unknown token '" + tok + "'");
    return it->second;
  };
  for (const auto& alignment : alignments) {
    for (const auto& p : alignment) {
      if (p.ref && p.hyp) {
        ++cm.cells[lookup(*p.ref)][lookup(*p.hyp)];
      } else if (p.ref) {
        ++cm.cells[lookup(*p.ref)][cm.deletion_column()];
      } else if (p.hyp) {
        ++cm.cells[cm.insertion_row()][lookup(*p.hyp)];
      }
    }
  }
  return cm;
}

namespace {

// Continued fraction for I_x(a, b), modified Lentz evaluation.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete beta: a and b must be positive");
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("incomplete beta: x outside [0, 1]");
  if (x == 0.0 || x == 1.0) return x;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_upper_tail(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("student t: degrees of freedom must be positive");
  if (t == 0.0) return 0.5;
  const double x = df / (df + t * t);
  const double half_two_sided = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, x);
  return t > 0.0 ? half_two_sided : 1.0 - half_two_sided;
}

TTestResult paired_t_test_one_tailed(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired t-test: samples differ in length");
  const std::size_t n = a.size();
  if (n < 2) throw std::invalid_argument("paired t-test: need at least 2 pairs");
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = (a[i] - b[i]) - mean;
    ss += e * e;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) throw std::invalid_argument("paired t-test: differences have zero variance");
  TTestResult r;
  r.df = static_cast<int>(n - 1);
  r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  r.p = student_t_upper_tail(r.t, r.df);
  return r;
}

}  // namespace vsr
