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

// Scoring of decoded label sequences against references.

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vsr {

using LabelSequence = std::vector<std::string>;

/// Jeffers phoneme -> viseme table (/A .. /L). HH is absent on purpose.
const std::map<std::string, std::string>& jeffers_viseme_table();

/// Viseme of an ARPAbet token (or the token itself when it already is a
/// viseme); nullopt for HH. Throws std::invalid_argument for unknown tokens.
std::optional<std::string> viseme_of(const std::string& token);

/// Token-wise mapping; HH entries are dropped, consecutive duplicates kept.
LabelSequence map_to_visemes(std::span<const std::string> seq);

/// Removes every "sil" except one leading and one trailing token.
LabelSequence strip_internal_silence(std::span<const std::string> seq);

inline const std::string kSilence = "sil";

struct AlignmentCounts {
  int total = 0;          // T: reference length
  int correct = 0;        // C
  int substitutions = 0;  // S
  int deletions = 0;      // D
  int insertions = 0;     // I

  AlignmentCounts& operator+=(const AlignmentCounts& o);
  bool operator==(const AlignmentCounts&) const = default;
};

/// One column of a global alignment; a missing side is a gap.
struct AlignedPair {
  std::optional<std::string> ref;
  std::optional<std::string> hyp;
};

struct Alignment {
  AlignmentCounts counts;
  std::vector<AlignedPair> pairs;
};

/// Needleman-Wunsch with unit substitution/insertion/deletion costs.
/// Backtracking prefers the diagonal, then deletion, then insertion.
Alignment align_nw(std::span<const std::string> ref, std::span<const std::string> hyp);

/// (C - I) / T. Throws std::invalid_argument for T = 0.
double accuracy(const AlignmentCounts& counts);

/// Counts over labels plus a deletion column (index L) and insertion row (index L).
struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<long>> cells;  // (L+1) x (L+1)

  std::size_t deletion_column() const { return labels.size(); }
  std::size_t insertion_row() const { return labels.size(); }
};

ConfusionMatrix confusion_matrix(std::span<const std::vector<AlignedPair>> alignments,
                                 std::span<const std::string> labels);

/// Regularized incomplete beta I_x(a, b) via Lentz's continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// P(T > t) for Student's t with `df` degrees of freedom.
double student_t_upper_tail(double t, double df);

struct TTestResult {
  double t = 0.0;
  double p = 0.0;
  int df = 0;
};

/// One-tailed paired t-test of H1: mean(a - b) > 0.
TTestResult paired_t_test_one_tailed(std::span<const double> a, std::span<const double> b);

}  // namespace vsr
