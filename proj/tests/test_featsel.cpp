#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cosmix/featsel.hpp"
#include "cosmix/rng.hpp"
#include "cosmix/testkit.hpp"
#include "cosmix/textprep.hpp"

using namespace cosmix;

namespace {

DocTermMatrix from_dense(const std::vector<std::vector<double>>& rows) {
  DocTermMatrix m;
  std::vector<std::string> terms;
  for (std::size_t h = 0; h < rows[0].size(); ++h)
    terms.push_back(testkit::term_token(static_cast<std::int32_t>(h)));
  m.vocab = Vocabulary::from_sorted_terms(std::move(terms));
  m.weighting = Weighting::raw_count;
  m.row_start.assign(rows.size() + 1, 0);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (std::size_t h = 0; h < rows[j].size(); ++h) {
      if (rows[j][h] != 0.0) {
        m.cols.push_back(static_cast<std::int32_t>(h));
        m.vals.push_back(rows[j][h]);
      }
    }
    m.row_start[j + 1] = static_cast<std::int64_t>(m.cols.size());
  }
  m.recompute_norms();
  return m;
}

// dense brute-force oracle, independent of the sparse kernel
std::vector<double> entropy_oracle(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  const std::size_t p = rows[0].size();
  std::vector<double> h(p, 0.0);
  for (std::size_t t = 0; t < p; ++t) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) total += rows[j][t];
    if (total <= 0.0) continue;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (rows[j][t] > 0.0) {
        double f = rows[j][t] / total;
        acc -= f * std::log(f);
      }
    }
    h[t] = acc / std::log(static_cast<double>(n));
  }
  return h;
}

}  // namespace

TEST_CASE("entropy of extreme term distributions") {
  // term 0 only in one doc -> 0; term 1 uniform over all docs -> 1
  std::vector<std::vector<double>> rows = {
      {5.0, 2.0}, {0.0, 2.0}, {0.0, 2.0}, {0.0, 2.0}};
  DocTermMatrix m = from_dense(rows);
  auto h = term_entropy(m);
  CHECK(h[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(h[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("entropy hand value: n=4, term equally in 2 docs") {
  std::vector<std::vector<double>> rows = {{3.0}, {3.0}, {0.0}, {0.0}};
  // avoid an all-zero row affecting nothing: entropy only reads columns
  DocTermMatrix m = from_dense(rows);
  auto h = term_entropy(m);
  CHECK(h[0] == doctest::Approx(std::log(2.0) / std::log(4.0)).epsilon(1e-12));
  CHECK(h[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("entropy requires at least two documents") {
  DocTermMatrix m = from_dense({{1.0, 2.0}});
  CHECK_THROWS_AS(term_entropy(m), data_error);
}

TEST_CASE("sparse entropy matches the dense oracle on random matrices") {
  Rng rng(404);
  for (int t = 0; t < 20; ++t) {
    std::size_t n = 3 + rng.below(10);
    std::size_t p = 2 + rng.below(12);
    std::vector<std::vector<double>> rows(n, std::vector<double>(p, 0.0));
    for (auto& row : rows)
      for (auto& v : row)
        if (rng.uniform() < 0.4) v = 1.0 + static_cast<double>(rng.below(9));
    DocTermMatrix m = from_dense(rows);
    auto got = term_entropy(m);
    auto want = entropy_oracle(rows);
    for (std::size_t h = 0; h < p; ++h) CHECK(std::abs(got[h] - want[h]) < 1e-12);
  }
}

TEST_CASE("entropy invariant to positive scaling of a term column") {
  std::vector<std::vector<double>> rows = {{2.0, 1.0}, {4.0, 3.0}, {0.0, 5.0}};
  auto base = term_entropy(from_dense(rows));
  for (auto& r : rows) r[0] *= 7.5;
  auto scaled = term_entropy(from_dense(rows));
  CHECK(std::abs(base[0] - scaled[0]) < 1e-12);
}

TEST_CASE("entropy computed on idf weights equals raw for surviving columns") {
  // idf rescales each column by a constant, which f_jh absorbs
  auto data = testkit::generate(testkit::single_epoch_scenario(3, 20, 25, 15, 0.6), 8);
  DocTermMatrix raw = data.epochs[0].raw;
  DocTermMatrix idf = apply_idf(raw);
  auto h_raw = term_entropy(raw);
  auto h_idf = term_entropy(idf);
  std::vector<std::int32_t> df(static_cast<std::size_t>(raw.n_terms()), 0);
  for (std::int32_t c : raw.cols) ++df[static_cast<std::size_t>(c)];
  for (std::int32_t h = 0; h < raw.n_terms(); ++h) {
    if (df[static_cast<std::size_t>(h)] == raw.n_docs()) continue;  // pruned column
    CHECK(std::abs(h_raw[static_cast<std::size_t>(h)] - h_idf[static_cast<std::size_t>(h)]) < 1e-12);
  }
}

TEST_CASE("threshold selection") {
  // 3 informative terms spread over all docs, 3 single-doc terms
  std::vector<std::vector<double>> rows = {
      {1.0, 2.0, 1.0, 9.0, 0.0, 0.0},
      {1.0, 1.0, 2.0, 0.0, 4.0, 0.0},
      {2.0, 1.0, 1.0, 0.0, 0.0, 7.0},
  };
  DocTermMatrix m = from_dense(rows);
  auto h = term_entropy(m);
  DocTermMatrix sel = select_by_threshold(m, h, 0.4);
  CHECK(sel.n_terms() == 3);
  CHECK(sel.n_docs() == 3);

  DocTermMatrix all = select_by_threshold(m, h, 0.0);
  CHECK(all.n_terms() == m.n_terms());
  CHECK(all.cols == m.cols);
  CHECK(all.vals == m.vals);

  CHECK_THROWS_AS(select_by_threshold(m, h, 1.5), data_error);
  std::vector<double> zeros(static_cast<std::size_t>(m.n_terms()), 0.0);
  CHECK_THROWS_AS(select_by_threshold(m, zeros, 0.5), data_error);
}

TEST_CASE("top-n selection with lexicographic tie-break") {
  std::vector<std::vector<double>> rows = {
      {1.0, 1.0, 3.0, 0.0},
      {1.0, 1.0, 0.0, 3.0},
  };
  DocTermMatrix m = from_dense(rows);
  auto h = term_entropy(m);
  // terms 0 and 1 are uniform (H=1, tie); terms 2,3 single-doc (H=0)
  TopNSelection sel = select_top_n(m, h, 1);
  REQUIRE(sel.matrix.n_terms() == 1);
  CHECK(sel.matrix.vocab.terms[0] == m.vocab.terms[0]);  // smaller term wins the tie
  CHECK_FALSE(sel.truncated_to_all);

  TopNSelection all = select_top_n(m, h, 4);
  CHECK(all.matrix.n_terms() == 4);
  CHECK_FALSE(all.truncated_to_all);

  TopNSelection over = select_top_n(m, h, 10);
  CHECK(over.matrix.n_terms() == 4);
  CHECK(over.truncated_to_all);
}

TEST_CASE("selection recomputes norms") {
  std::vector<std::vector<double>> rows = {{3.0, 4.0, 12.0}};
  DocTermMatrix m = from_dense(rows);
  std::vector<double> h = {0.9, 0.8, 0.1};
  DocTermMatrix sel = select_by_threshold(m, h, 0.5);
  CHECK(sel.doc_norms[0] == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("entropy histogram covers the unit interval") {
  std::vector<double> h = {0.0, 0.05, 0.5, 0.99, 1.0};
  auto bins = entropy_histogram(h, 20);
  REQUIRE(bins.size() == 20);
  std::int64_t total = 0;
  for (const auto& b : bins) total += b.count;
  CHECK(total == 5);
  CHECK(bins[0].count == 1);   // 0.0
  CHECK(bins[1].count == 1);   // 0.05
  CHECK(bins[10].count == 1);  // 0.5
  CHECK(bins[19].count == 2);  // 0.99 and the closed top edge 1.0
}
