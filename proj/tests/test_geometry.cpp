#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "cosmix/geometry.hpp"
#include "cosmix/rng.hpp"
#include "cosmix/testkit.hpp"

using namespace cosmix;

namespace {

DocTermMatrix dense_matrix(const std::vector<std::vector<double>>& rows) {
  DocTermMatrix m;
  std::vector<std::string> terms;
  for (std::size_t h = 0; h < rows[0].size(); ++h) terms.push_back(testkit::term_token(static_cast<std::int32_t>(h)));
  m.vocab = Vocabulary::from_sorted_terms(std::move(terms));
  m.weighting = Weighting::idf_weighted;
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

// independent numerical direction search: seeded random restarts plus
// projected gradient ascent on the weighted mean objective
double direction_search_objective(const DocTermMatrix& m, std::span<const double> w,
                                  std::uint64_t seed) {
  const std::int32_t p = m.n_terms();
  auto objective = [&](const std::vector<double>& xi) {
    Centroid c{xi};
    double s = 0.0;
    for (std::int32_t j = 0; j < m.n_docs(); ++j)
      if (w[static_cast<std::size_t>(j)] > 0.0)
        s += w[static_cast<std::size_t>(j)] * row_centroid_distance(m, j, c);
    return s;
  };
  Rng rng(seed);
  double best = 1e300;
  for (int restart = 0; restart < 8; ++restart) {
    std::vector<double> xi(static_cast<std::size_t>(p));
    for (auto& x : xi) x = 0.05 + rng.uniform();
    double norm = 0.0;
    for (double x : xi) norm += x * x;
    for (auto& x : xi) x /= std::sqrt(norm);

    double cur = objective(xi);
    double step = 0.5;
    for (int it = 0; it < 400 && step > 1e-12; ++it) {
      // gradient of sum_j w_j (1 - <yhat_j, xi>) on the sphere
      std::vector<double> grad(static_cast<std::size_t>(p), 0.0);
      for (std::int32_t j = 0; j < m.n_docs(); ++j) {
        double wj = w[static_cast<std::size_t>(j)];
        double nj = m.doc_norms[static_cast<std::size_t>(j)];
        if (wj <= 0.0 || nj <= 0.0) continue;
        for (std::int64_t e = m.row_start[j]; e < m.row_start[j + 1]; ++e)
          grad[static_cast<std::size_t>(m.cols[static_cast<std::size_t>(e)])] +=
              wj * m.vals[static_cast<std::size_t>(e)] / nj;
      }
      std::vector<double> trial(static_cast<std::size_t>(p));
      double tn = 0.0;
      for (std::int32_t h = 0; h < p; ++h) {
        trial[static_cast<std::size_t>(h)] =
            std::max(0.0, xi[static_cast<std::size_t>(h)] + step * grad[static_cast<std::size_t>(h)]);
        tn += trial[static_cast<std::size_t>(h)] * trial[static_cast<std::size_t>(h)];
      }
      if (tn <= 0.0) {
        step *= 0.5;
        continue;
      }
      for (auto& x : trial) x /= std::sqrt(tn);
      double got = objective(trial);
      if (got < cur - 1e-15) {
        xi = trial;
        cur = got;
      } else {
        step *= 0.5;
      }
    }
    best = std::min(best, cur);
  }
  return best;
}

}  // namespace

TEST_CASE("cosine distance basics") {
  std::vector<double> x = {1.0, 1.0, 0.0};
  std::vector<double> y = {1.0, 0.0, 0.0};
  std::vector<double> z = {0.0, 0.0, 2.0};
  CHECK(cosine_distance(x, x) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(cosine_distance(x, z) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cosine_distance(x, y) == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(cosine_distance(x, y) == doctest::Approx(0.29289).epsilon(1e-4));
}

TEST_CASE("cosine distance scale invariance and symmetry") {
  Rng rng(11);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> x(6), y(6);
    for (auto& v : x) v = rng.uniform();
    for (auto& v : y) v = rng.uniform();
    double c = 0.1 + 10.0 * rng.uniform();
    std::vector<double> cx = x;
    for (auto& v : cx) v *= c;
    CHECK(std::abs(cosine_distance(cx, y) - cosine_distance(x, y)) < 1e-12);
    CHECK(cosine_distance(x, y) == cosine_distance(y, x));
  }
}

TEST_CASE("zero vector convention bumps the counter") {
  reset_zero_distance_count();
  std::vector<double> zero = {0.0, 0.0};
  std::vector<double> one = {1.0, 0.0};
  CHECK(cosine_distance(zero, one) == 1.0);
  CHECK(zero_distance_count() == 1);
  reset_zero_distance_count();
}

TEST_CASE("spherical mean: single doc and two orthogonal docs") {
  DocTermMatrix m = dense_matrix({{3.0, 0.0}, {0.0, 5.0}});
  std::vector<double> only_first = {1.0, 0.0};
  Centroid c1 = spherical_mean(m, only_first);
  CHECK(c1.v[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(row_centroid_distance(m, 0, c1) == doctest::Approx(0.0).epsilon(1e-12));

  std::vector<double> both = {1.0, 1.0};
  Centroid c = spherical_mean(m, both);
  CHECK(c.v[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(c.v[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(row_centroid_distance(m, 0, c) == doctest::Approx(0.29289).epsilon(1e-4));
  CHECK(row_centroid_distance(m, 1, c) == doctest::Approx(0.29289).epsilon(1e-4));
}

TEST_CASE("spherical mean degenerate inputs") {
  DocTermMatrix m = dense_matrix({{1.0, 0.0}, {0.0, 1.0}});
  std::vector<double> zero_w = {0.0, 0.0};
  CHECK_THROWS_AS(spherical_mean(m, zero_w), numeric_error);
}

TEST_CASE("closed-form spherical mean matches a numerical direction search") {
  // 20 random instances at p in {3, 10}; closed form must not lose by > 1e-9
  for (int inst = 0; inst < 20; ++inst) {
    Rng rng(1000 + static_cast<std::uint64_t>(inst));
    const std::int32_t p = inst % 2 == 0 ? 3 : 10;
    const std::int32_t n = 6 + static_cast<std::int32_t>(rng.below(5));
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(n),
                                          std::vector<double>(static_cast<std::size_t>(p), 0.0));
    for (auto& row : rows)
      for (auto& v : row) v = rng.uniform() < 0.3 ? 0.0 : 0.2 + rng.uniform();
    // ensure no zero rows
    for (auto& row : rows) row[0] += 0.05;
    DocTermMatrix m = dense_matrix(rows);
    std::vector<double> w(static_cast<std::size_t>(n));
    for (auto& x : w) x = 0.1 + rng.uniform();

    Centroid closed = spherical_mean(m, w);
    double closed_obj = 0.0;
    for (std::int32_t j = 0; j < n; ++j)
      closed_obj += w[static_cast<std::size_t>(j)] * row_centroid_distance(m, j, closed);
    double searched = direction_search_objective(m, w, 555 + static_cast<std::uint64_t>(inst));
    CHECK(closed_obj <= searched + 1e-9);
  }
}

TEST_CASE("spherical kmeans k=1 equals global spherical mean") {
  DocTermMatrix m = dense_matrix({{1.0, 0.2, 0.0}, {0.8, 0.3, 0.1}, {0.9, 0.1, 0.05}});
  KmeansResult r = spherical_kmeans(m, 1, 3, 7);
  std::vector<double> ones(3, 1.0);
  Centroid global = spherical_mean(m, ones);
  for (std::size_t h = 0; h < 3; ++h)
    CHECK(r.centroids[0].v[h] == doctest::Approx(global.v[h]).epsilon(1e-12));
  CHECK(r.labels == std::vector<std::int32_t>{0, 0, 0});
}

TEST_CASE("spherical kmeans recovers two planted bundles") {
  auto scenario = testkit::single_epoch_scenario(2, 40, 20, 30, 0.85);
  auto data = testkit::generate(scenario, 21);
  KmeansResult r = spherical_kmeans(data.epochs[0].raw, 2, 5, 17);
  double ari = testkit::adjusted_rand_index(r.labels, data.epochs[0].labels);
  CHECK(ari == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spherical kmeans k=n drives the objective to zero") {
  DocTermMatrix m = dense_matrix({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
  KmeansResult r = spherical_kmeans(m, 3, 4, 3);
  CHECK(r.objective == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("spherical kmeans leaves zero rows unassigned") {
  DocTermMatrix m = dense_matrix({{1.0, 0.0}, {0.0, 0.0}, {0.0, 1.0}});
  KmeansResult r = spherical_kmeans(m, 2, 2, 5);
  CHECK(r.labels[1] == -1);
  CHECK(r.labels[0] >= 0);
  CHECK(r.labels[2] >= 0);
}

TEST_CASE("spherical kmeans objective never beats more clusters on average") {
  auto scenario = testkit::single_epoch_scenario(3, 30, 30, 20, 0.7);
  auto data = testkit::generate(scenario, 5);
  double prev = 1e300;
  for (std::int32_t k = 1; k <= 4; ++k) {
    KmeansResult r = spherical_kmeans(data.epochs[0].raw, k, 4, 99);
    CHECK(r.objective <= prev + 1e-9);
    prev = r.objective;
  }
}

TEST_CASE("spherical kmeans objective never increases within a run") {
  auto scenario = testkit::single_epoch_scenario(4, 40, 30, 20, 0.5);
  auto data = testkit::generate(scenario, 77);
  KmeansResult r = spherical_kmeans(data.epochs[0].raw, 4, 1, 31);
  REQUIRE(r.objective_trace.size() >= 2);
  for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
    CHECK(r.objective_trace[i] <= r.objective_trace[i - 1] + 1e-10);
}

TEST_CASE("spherical kmeans determinism per seed") {
  auto scenario = testkit::single_epoch_scenario(3, 25, 25, 20, 0.6);
  auto data = testkit::generate(scenario, 9);
  KmeansResult a = spherical_kmeans(data.epochs[0].raw, 3, 5, 1234);
  KmeansResult b = spherical_kmeans(data.epochs[0].raw, 3, 5, 1234);
  CHECK(a.labels == b.labels);
  CHECK(a.objective == b.objective);
}
