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


#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "vsr/eval.hpp"

#ifdef VSR_HAVE_BOOST_MATH
#include <boost/math/distributions/students_t.hpp>
#endif

using namespace vsr;

namespace {

const std::vector<std::string> kArpabet = {"AA", "AE", "AH", "AO", "AW", "AY", "B",  "CH", "D",  "DH",
                                           "EH", "ER", "EY", "F",  "G",  "HH", "IH", "IY", "JH", "K",
                                           "L",  "M",  "N",  "NG", "OW", "OY", "P",  "R",  "S",  "SH",
                                           "T",  "TH", "UH", "UW", "V",  "W",  "Y",  "Z",  "ZH", "sil"};

LabelSequence random_tokens(std::mt19937_64& rng, std::size_t max_len, int alphabet) {
  LabelSequence s(rng() % (max_len + 1));
  for (auto& t : s) t = std::string(1, static_cast<char>('a' + rng() % alphabet));
  return s;
}

}  // namespace

TEST_CASE("viseme mapping") {
  CHECK(map_to_visemes(LabelSequence{"F", "V"}) == LabelSequence{"/A", "/A"});
  CHECK(map_to_visemes(LabelSequence{"HH"}).empty());
  CHECK(map_to_visemes(LabelSequence{"sil"}) == LabelSequence{"/L"});
  CHECK(map_to_visemes(LabelSequence{"M", "HH", "AE", "T"}) == LabelSequence{"/C", "/I", "/J"});
  CHECK(viseme_of("/K") == "/K");
  int mapped = 0;
  for (const auto& p : kArpabet) {
    const auto v = viseme_of(p);
    if (p == "HH") {
      CHECK_FALSE(v.has_value());
    } else {
      REQUIRE(v.has_value());
      CHECK(v->size() == 2);
      ++mapped;
    }
  }
  CHECK(mapped == 39);
  CHECK(jeffers_viseme_table().size() == 39);
  try {
    viseme_of("QQ");
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("QQ") != std::string::npos);
  }
}

TEST_CASE("internal silence is removed") {
  CHECK(strip_internal_silence(LabelSequence{"sil", "AE", "sil", "T", "sil"}) == LabelSequence{"sil", "AE", "T", "sil"});
  CHECK(strip_internal_silence(LabelSequence{"AE", "T"}) == LabelSequence{"AE", "T"});
  CHECK(strip_internal_silence(LabelSequence{"sil", "sil", "AE"}) == LabelSequence{"sil", "AE"});
  CHECK(strip_internal_silence(LabelSequence{"AE", "sil", "sil"}) == LabelSequence{"AE", "sil"});
  CHECK(strip_internal_silence(LabelSequence{"sil"}) == LabelSequence{"sil"});
  CHECK(strip_internal_silence(LabelSequence{}).empty());
}

TEST_CASE("alignment examples") {
  const LabelSequence abc{"A", "B", "C"};
  const auto same = align_nw(abc, abc);
  CHECK(same.counts == AlignmentCounts{3, 3, 0, 0, 0});
  CHECK(align_nw(abc, LabelSequence{}).counts == AlignmentCounts{3, 0, 0, 3, 0});
  CHECK(align_nw(LabelSequence{}, abc).counts == AlignmentCounts{0, 0, 0, 0, 3});
  const auto drop = align_nw(abc, LabelSequence{"A", "C"});
  CHECK(drop.counts == AlignmentCounts{3, 2, 0, 1, 0});
  REQUIRE(drop.pairs.size() == 3);
  CHECK(drop.pairs[1].ref == "B");
  CHECK_FALSE(drop.pairs[1].hyp.has_value());
  CHECK(oracle::exhaustive_min_edits(abc, LabelSequence{"A", "C"}) == 1);
}

TEST_CASE("alignment agrees with independent edit distance oracles") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 400; ++trial) {
    const auto ref = random_tokens(rng, 10, 4);
    const auto hyp = random_tokens(rng, 10, 4);
    const auto a = align_nw(ref, hyp);
    const auto& c = a.counts;
    CHECK(c.total == static_cast<int>(ref.size()));
    CHECK(c.total == c.correct + c.substitutions + c.deletions);
    CHECK(static_cast<int>(hyp.size()) == c.correct + c.substitutions + c.insertions);
    const int edits = c.substitutions + c.deletions + c.insertions;
    CHECK(edits == oracle::levenshtein(ref, hyp));
    if (ref.size() <= 6 && hyp.size() <= 6) CHECK(edits == oracle::exhaustive_min_edits(ref, hyp));
    // The pairs reproduce both sequences.
    LabelSequence r, h;
    for (const auto& p : a.pairs) {
      CHECK((p.ref || p.hyp));
      if (p.ref) r.push_back(*p.ref);
      if (p.hyp) h.push_back(*p.hyp);
    }
    CHECK(r == ref);
    CHECK(h == hyp);
  }
}

TEST_CASE("accuracy") {
  CHECK(accuracy({2728, 587, 0, 0, 39}) == doctest::Approx(548.0 / 2728.0));
  CHECK(accuracy({2518, 1029, 0, 0, 37}) == doctest::Approx(992.0 / 2518.0));
  CHECK(accuracy({5, 5, 0, 0, 0}) == 1.0);
  CHECK(accuracy({2, 0, 2, 0, 3}) == -1.5);
  CHECK_THROWS_AS(accuracy({}), std::invalid_argument);

  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    auto ref = random_tokens(rng, 8, 3);
    if (ref.empty()) ref.push_back("a");
    auto hyp = random_tokens(rng, 8, 3);
    const double before = accuracy(align_nw(ref, hyp).counts);
    hyp.insert(hyp.begin() + static_cast<long>(rng() % (hyp.size() + 1)), "z");
    CHECK(accuracy(align_nw(ref, hyp).counts) <= before);
  }
}

TEST_CASE("confusion matrix") {
  const std::vector<std::string> labels{"a", "b", "c"};
  const auto perfect = align_nw(LabelSequence{"a", "b", "c", "a"}, LabelSequence{"a", "b", "c", "a"});
  const std::vector<std::vector<AlignedPair>> one{perfect.pairs};
  const auto m = confusion_matrix(one, labels);
  for (std::size_t i = 0; i <= 3; ++i) {
    for (std::size_t j = 0; j <= 3; ++j) CHECK(m.cells[i][j] == (i == j && i < 3 ? (i == 0 ? 2 : 1) : 0));
  }

  std::mt19937_64 rng(43);
  std::vector<std::vector<AlignedPair>> all;
  std::vector<long> ref_count(3, 0), hyp_count(3, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ref = random_tokens(rng, 9, 3);
    const auto hyp = random_tokens(rng, 9, 3);
    for (const auto& t : ref) ++ref_count[t[0] - 'a'];
    for (const auto& t : hyp) ++hyp_count[t[0] - 'a'];
    all.push_back(align_nw(ref, hyp).pairs);
  }
  const auto cm = confusion_matrix(all, labels);
  for (std::size_t i = 0; i < 3; ++i) {
    long row = 0, col = 0;
    for (std::size_t j = 0; j <= 3; ++j) row += cm.cells[i][j];
    for (std::size_t j = 0; j <= 3; ++j) col += cm.cells[j][i];
    CHECK(row == ref_count[i]);
    CHECK(col == hyp_count[i]);
  }
  CHECK(cm.cells[3][3] == 0);
  CHECK_THROWS_AS(confusion_matrix(std::vector<std::vector<AlignedPair>>{{{std::string("q"), std::nullopt}}}, labels),
                  std::invalid_argument);
}

TEST_CASE("incomplete beta identities") {
  for (double x : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
    CHECK(regularized_incomplete_beta(1.0, 1.0, x) == doctest::Approx(x).epsilon(1e-12));
    CHECK(regularized_incomplete_beta(3.5, 1.0, x) == doctest::Approx(std::pow(x, 3.5)).epsilon(1e-10));
    CHECK(regularized_incomplete_beta(2.5, 7.0, x) ==
          doctest::Approx(1.0 - regularized_incomplete_beta(7.0, 2.5, 1.0 - x)).epsilon(1e-10));
  }
}

TEST_CASE("student t tail") {
  CHECK(student_t_upper_tail(0.0, 79.0) == 0.5);
  CHECK(student_t_upper_tail(0.0, 3.0) == 0.5);
  double prev = 1.0;
  for (double t = -6.0; t <= 6.0; t += 0.1) {
    const double p = student_t_upper_tail(t, 12.0);
    CHECK(p < prev);
    prev = p;
  }
  // Cauchy closed form for one degree of freedom.
  for (double t : {-3.0, 0.4, 2.0, 10.0}) {
    CHECK(student_t_upper_tail(t, 1.0) == doctest::Approx(0.5 - std::atan(t) / 3.141592653589793).epsilon(1e-10));
  }
  CHECK(std::fabs(student_t_upper_tail(2.5, 79.0) - 0.0072) < 2e-4);
#ifdef VSR_HAVE_BOOST_MATH
  for (double df : {1.0, 2.0, 5.0, 30.0, 79.0, 158.0}) {
    const boost::math::students_t dist(df);
    for (double t : {-4.0, -1.0, 0.3, 1.7, 2.302, 2.5, 6.0}) {
      const double expect = boost::math::cdf(boost::math::complement(dist, t));
      CHECK(student_t_upper_tail(t, df) == doctest::Approx(expect).epsilon(1e-9));
    }
  }
#endif
}

TEST_CASE("paired t test") {
  const std::vector<double> a{0.5, 0.6, 0.7, 0.4, 0.65};
  const std::vector<double> b{0.45, 0.5, 0.68, 0.41, 0.55};
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / 5.0;
  double ss = 0.0;
  for (double x : d) ss += (x - mean) * (x - mean);
  const double t = mean / (std::sqrt(ss / 4.0) / std::sqrt(5.0));
  const auto r = paired_t_test_one_tailed(a, b);
  CHECK(r.df == 4);
  CHECK(r.t == doctest::Approx(t).epsilon(1e-12));
  CHECK(r.p == doctest::Approx(student_t_upper_tail(t, 4.0)).epsilon(1e-12));

  const std::vector<double> base{0.3, 0.4, 0.5, 0.6};
  const std::vector<double> noisy{0.3 + 1e-6, 0.4 - 1e-6, 0.5 + 1e-6, 0.6 - 1e-6};
  const auto flat = paired_t_test_one_tailed(noisy, base);
  CHECK(std::fabs(flat.t) < 1e-6);
  CHECK(flat.p == doctest::Approx(0.5).epsilon(1e-6));

  CHECK_THROWS_AS(paired_t_test_one_tailed(std::vector<double>{1.0}, std::vector<double>{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(paired_t_test_one_tailed(base, base), std::invalid_argument);
  CHECK_THROWS_AS(paired_t_test_one_tailed(base, std::vector<double>{0.1, 0.2}), std::invalid_argument);
}
