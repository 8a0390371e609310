#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cosmix/kernels.hpp"
#include "cosmix/mixture.hpp"
#include "cosmix/rng.hpp"
#include "cosmix/testkit.hpp"
#include "cosmix/textprep.hpp"

using namespace cosmix;

namespace {

std::vector<double> random_weights(Rng& rng, std::int32_t k, double floor_w = 0.05) {
  std::vector<double> w(static_cast<std::size_t>(k));
  double sum = 0.0;
  for (auto& x : w) {
    x = floor_w + rng.uniform();
    sum += x;
  }
  for (auto& x : w) x /= sum;
  return w;
}

double lhs_value(std::span<const double> dist, std::int32_t n, std::int32_t k,
                 std::span<const double> weights, double lambda) {
  double total = 0.0;
  for (std::int32_t j = 0; j < n; ++j) {
    const double* row = dist.data() + static_cast<std::int64_t>(j) * k;
    std::int32_t near = 0;
    for (std::int32_t i = 1; i < k; ++i)
      if (row[i] < row[near]) near = i;
    for (std::int32_t i = 0; i < k; ++i)
      total += weights[i] / weights[near] * std::exp(-lambda * (row[i] - row[near]));
  }
  return total;
}

DocTermMatrix idf_matrix_of(const testkit::PlantedData& data) {
  return apply_idf(data.epochs[0].raw);
}

}  // namespace

TEST_CASE("per-doc alpha hand values") {
  double lambda = 10.0 * std::log(19.0);  // ~29.444
  std::vector<double> d = {0.2, 0.3};
  std::vector<double> pi = {0.5, 0.5};
  CHECK(alpha_from_distances(d, pi, lambda) == doctest::Approx(0.05).epsilon(1e-12));
  // lambda -> 0: alpha -> 1 - pi_near
  CHECK(alpha_from_distances(d, pi, 1e-9) == doctest::Approx(0.5).epsilon(1e-6));
  // equal distances: alpha = 1 - pi_near for any lambda
  std::vector<double> eq = {0.25, 0.25};
  std::vector<double> pi2 = {0.3, 0.7};
  for (double lam : {0.01, 1.0, 100.0})
    CHECK(alpha_from_distances(eq, pi2, lam) == doctest::Approx(1.0 - 0.3).epsilon(1e-12));
}

TEST_CASE("alpha equals one minus the nearest-component posterior") {
  Rng rng(1212);
  for (int trial = 0; trial < 200; ++trial) {
    std::int32_t k = 2 + static_cast<std::int32_t>(rng.below(6));
    auto pi = random_weights(rng, k);
    std::vector<double> d(static_cast<std::size_t>(k));
    for (auto& x : d) x = rng.uniform();
    double lambda = 0.1 + 50.0 * rng.uniform();

    std::int32_t near = 0;
    for (std::int32_t i = 1; i < k; ++i)
      if (d[static_cast<std::size_t>(i)] < d[static_cast<std::size_t>(near)]) near = i;

    std::vector<double> post(static_cast<std::size_t>(k));
    kernels::posteriors_from_distances(d, 1, k, pi, lambda, post.data());
    double alpha = alpha_from_distances(d, pi, lambda);
    CHECK(std::abs(alpha - (1.0 - post[static_cast<std::size_t>(near)])) < 1e-12);
  }
}

TEST_CASE("alpha(lambda) is nonincreasing with the stated limits") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    std::int32_t k = 2 + static_cast<std::int32_t>(rng.below(5));
    auto pi = random_weights(rng, k);
    std::vector<double> d(static_cast<std::size_t>(k));
    d[0] = 0.1;
    for (std::int32_t i = 1; i < k; ++i)
      d[static_cast<std::size_t>(i)] = 0.11 + rng.uniform() * 0.5;  // gaps >= 0.01

    double prev = 2.0;
    for (double loglam = -6.0; loglam <= 4.0; loglam += 0.1) {
      double alpha = alpha_from_distances(d, pi, std::pow(10.0, loglam));
      CHECK(alpha <= prev + 1e-12);
      prev = alpha;
    }
    CHECK(std::abs(alpha_from_distances(d, pi, 1e-6) - (1.0 - pi[0])) <= 1e-4);
    CHECK(alpha_from_distances(d, pi, 1e4) <= 1e-8);
  }
}

TEST_CASE("solve_lambda closed-form single-document case") {
  std::vector<double> dist = {0.2, 0.3};
  std::vector<double> pi = {0.5, 0.5};
  double lambda = solve_lambda(dist, 1, 2, pi, {0.05});
  CHECK(lambda == doctest::Approx(29.444389791664403).epsilon(1e-6));
  // and the aggregate equation holds at the root
  CHECK(lhs_value(dist, 1, 2, pi, lambda) ==
        doctest::Approx(1.0 / 0.95).epsilon(1e-10));
}

TEST_CASE("solve_lambda boundary: alpha = 0.5 with equal weights is unattainable") {
  std::vector<double> dist = {0.2, 0.3};
  std::vector<double> pi = {0.5, 0.5};
  CHECK_THROWS_AS(solve_lambda(dist, 1, 2, pi, {0.5}), numeric_error);
  try {
    solve_lambda(dist, 1, 2, pi, {0.5});
  } catch (const numeric_error& e) {
    CHECK(std::string(e.what()).find("attainable") != std::string::npos);
  }
}

TEST_CASE("solve_lambda rejects a single component") {
  std::vector<double> dist = {0.2};
  std::vector<double> pi = {1.0};
  CHECK_THROWS_AS(solve_lambda(dist, 1, 1, pi, {0.05}), numeric_error);
}

TEST_CASE("solve_lambda satisfies the aggregate equation on random instances") {
  Rng rng(313);
  for (int trial = 0; trial < 50; ++trial) {
    std::int32_t n = 5 + static_cast<std::int32_t>(rng.below(40));
    std::int32_t k = 2 + static_cast<std::int32_t>(rng.below(6));
    auto pi = random_weights(rng, k);
    std::vector<double> dist(static_cast<std::size_t>(n) * k);
    for (auto& x : dist) x = 0.05 + 0.9 * rng.uniform();
    double alpha = 0.02 + 0.2 * rng.uniform();
    double lambda = 0.0;
    try {
      lambda = solve_lambda(dist, n, k, pi, {alpha});
    } catch (const numeric_error&) {
      continue;  // concentrated instance without a root; not the property under test
    }
    double target = static_cast<double>(n) / (1.0 - alpha);
    double lhs = lhs_value(dist, n, k, pi, lambda);
    CHECK(std::abs(lhs - target) / target < 1e-8);
  }
}

TEST_CASE("lambda grows monotonically with the requested consistent rate") {
  auto data = testkit::generate(testkit::single_epoch_scenario(4, 30, 40, 20, 0.6), 99);
  DocTermMatrix idf = idf_matrix_of(data);
  KmeansResult km = spherical_kmeans(idf, 4, 3, 7);
  std::vector<double> pi(4, 0.0);
  for (std::int32_t lab : km.labels) pi[static_cast<std::size_t>(lab)] += 1.0;
  for (auto& x : pi) x /= static_cast<double>(idf.n_docs());
  std::vector<double> dist(static_cast<std::size_t>(idf.n_docs()) * 4);
  kernels::doc_centroid_distances(idf, km.centroids, dist.data());

  double prev_lambda = 0.0;
  for (double rate : {0.80, 0.85, 0.90, 0.95, 0.99}) {
    double lambda = solve_lambda(dist, idf.n_docs(), 4, pi, {1.0 - rate});
    CHECK(lambda > prev_lambda);  // higher consistent rate demands higher lambda
    prev_lambda = lambda;
  }
}

TEST_CASE("realized consistent rate approximates the target on calibration data") {
  // the aggregate equation fixes the mean of T_j = 1/(1-alpha_j); on a
  // well-clustered configuration the per-document mean of 1-alpha_j stays
  // within 0.01 of the requested rate
  auto data = testkit::generate(testkit::single_epoch_scenario(4, 50, 40, 20, 0.6), 55);
  DocTermMatrix idf = idf_matrix_of(data);
  const std::int32_t k = 4;
  KmeansResult km = spherical_kmeans(idf, k, 3, 21);
  std::vector<double> pi(static_cast<std::size_t>(k), 0.0);
  for (std::int32_t lab : km.labels) pi[static_cast<std::size_t>(lab)] += 1.0;
  for (auto& x : pi) x /= static_cast<double>(idf.n_docs());
  std::vector<double> dist(static_cast<std::size_t>(idf.n_docs()) * k);
  kernels::doc_centroid_distances(idf, km.centroids, dist.data());

  const double alpha = 0.05;
  double lambda = solve_lambda(dist, idf.n_docs(), k, pi, {alpha});
  double mean_rate = 0.0;
  for (std::int32_t j = 0; j < idf.n_docs(); ++j) {
    std::span<const double> row(dist.data() + static_cast<std::int64_t>(j) * k,
                                static_cast<std::size_t>(k));
    mean_rate += 1.0 - alpha_from_distances(row, pi, lambda);
  }
  mean_rate /= static_cast<double>(idf.n_docs());
  CHECK(std::abs(mean_rate - (1.0 - alpha)) <= 0.01);
}

TEST_CASE("e_step posterior hand values") {
  // pi=(.5,.5), lambda=10, d=(0.1,0.2): z1 = 1/(1+e^-1)
  std::vector<double> d = {0.1, 0.2};
  std::vector<double> pi = {0.5, 0.5};
  std::vector<double> post(2);
  kernels::posteriors_from_distances(d, 1, 2, pi, 10.0, post.data());
  CHECK(post[0] == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-12));
  CHECK(post[0] == doctest::Approx(0.73106).epsilon(1e-5));

  // equal pi, equal distances, k=3 -> 1/3 each
  std::vector<double> d3 = {0.4, 0.4, 0.4};
  std::vector<double> pi3 = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  std::vector<double> post3(3);
  kernels::posteriors_from_distances(d3, 1, 3, pi3, 7.0, post3.data());
  for (double z : post3) CHECK(z == doctest::Approx(1.0 / 3).epsilon(1e-12));

  // enormous lambda -> one-hot
  std::vector<double> dl = {0.1, 0.3};
  std::vector<double> postl(2);
  kernels::posteriors_from_distances(dl, 1, 2, pi, 1e6, postl.data());
  CHECK(postl[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(postl[1] <= 1e-12);
}

TEST_CASE("m_step from one-hot and uniform posteriors") {
  auto data = testkit::generate(testkit::single_epoch_scenario(2, 12, 20, 12, 0.7), 3);
  DocTermMatrix idf = idf_matrix_of(data);
  const std::int32_t n = idf.n_docs();

  // one-hot: pi must equal the exact label proportions
  std::vector<double> onehot(static_cast<std::size_t>(n) * 2, 0.0);
  for (std::int32_t j = 0; j < n; ++j)
    onehot[static_cast<std::int64_t>(j) * 2 + data.epochs[0].labels[static_cast<std::size_t>(j)]] = 1.0;
  MStepOut ms = m_step(idf, onehot, 2, {0.05}, LambdaMode::fixed, 10.0);
  CHECK(ms.weights[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ms.lambda == 10.0);

  // uniform: both centroids coincide with the global spherical mean
  std::vector<double> uniform(static_cast<std::size_t>(n) * 2, 0.5);
  MStepOut mu = m_step(idf, uniform, 2, {0.05}, LambdaMode::fixed, 10.0);
  CHECK(mu.weights[0] == doctest::Approx(0.5).epsilon(1e-12));
  std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
  Centroid global = spherical_mean(idf, ones);
  for (std::int32_t h = 0; h < idf.n_terms(); ++h) {
    CHECK(mu.centroids[0].v[static_cast<std::size_t>(h)] ==
          doctest::Approx(global.v[static_cast<std::size_t>(h)]).epsilon(1e-10));
    CHECK(mu.centroids[0].v[static_cast<std::size_t>(h)] ==
          doctest::Approx(mu.centroids[1].v[static_cast<std::size_t>(h)]).epsilon(1e-12));
  }
}

TEST_CASE("m_step resolve mode equals solve_lambda on the new distances") {
  auto data = testkit::generate(testkit::single_epoch_scenario(2, 15, 20, 12, 0.6), 4);
  DocTermMatrix idf = idf_matrix_of(data);
  const std::int32_t n = idf.n_docs();
  std::vector<double> onehot(static_cast<std::size_t>(n) * 2, 0.0);
  for (std::int32_t j = 0; j < n; ++j)
    onehot[static_cast<std::int64_t>(j) * 2 + data.epochs[0].labels[static_cast<std::size_t>(j)]] = 1.0;

  MStepOut ms = m_step(idf, onehot, 2, {0.05}, LambdaMode::resolve_each_iter, 0.0);
  std::vector<double> dist(static_cast<std::size_t>(n) * 2);
  kernels::doc_centroid_distances(idf, ms.centroids, dist.data());
  double expect = solve_lambda(dist, n, 2, ms.weights, {0.05});
  CHECK(ms.lambda == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("m_step reports component collapse") {
  auto data = testkit::generate(testkit::single_epoch_scenario(2, 10, 20, 12, 0.6), 6);
  DocTermMatrix idf = idf_matrix_of(data);
  const std::int32_t n = idf.n_docs();
  std::vector<double> onehot(static_cast<std::size_t>(n) * 2, 0.0);
  for (std::int32_t j = 0; j < n; ++j) onehot[static_cast<std::int64_t>(j) * 2] = 1.0;
  CHECK_THROWS_AS(m_step(idf, onehot, 2, {0.05}, LambdaMode::fixed, 5.0), numeric_error);
}

TEST_CASE("fit_em recovers a planted three-topic corpus") {
  // n = 300, p = 120 (48 shared + 3 x 24 exclusive), separation 0.6; the
  // separation is calibrated so k-means alone already clears ARI 0.8
  auto data = testkit::generate(testkit::single_epoch_scenario(3, 100, 48, 24, 0.6), 1);
  DocTermMatrix idf = idf_matrix_of(data);

  KmeansResult km = spherical_kmeans(idf, 3, 5, 42);
  CHECK(testkit::adjusted_rand_index(km.labels, data.epochs[0].labels) >= 0.8);

  LambdaAverage avg = average_lambda_over_k(idf, 2, 6, {0.05}, 42, 3);
  EmOptions opt;
  opt.fixed_lambda = avg.lambda_bar;
  opt.seed = 42;
  EmFit fit = fit_em(idf, 3, {0.05}, {}, opt);
  double ari = testkit::adjusted_rand_index(fit.result.hard_labels, data.epochs[0].labels);
  CHECK(ari >= 0.9);
  CHECK(fit.result.converged);
}

TEST_CASE("fit_em from perfect labels is a fixed point on separated data") {
  auto data = testkit::generate(testkit::single_epoch_scenario(3, 40, 30, 30, 0.8), 12);
  DocTermMatrix idf = idf_matrix_of(data);
  EmInit init;
  init.labels = data.epochs[0].labels;
  EmOptions opt;
  opt.fixed_lambda = 30.0;
  EmFit fit = fit_em(idf, 3, {0.05}, init, opt);
  CHECK(fit.result.n_iterations <= 3);
  CHECK(testkit::adjusted_rand_index(fit.result.hard_labels, data.epochs[0].labels) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit_em on duplicated single document collapses") {
  Corpus c;
  for (int j = 0; j < 8; ++j) {
    Document d;
    d.doc_id = j;
    d.text = "identical wording every time plus rarity";
    c.docs.push_back(std::move(d));
  }
  DocTermMatrix raw = build_matrix(c, StopwordPolicy::defaults());
  // idf would zero everything (all df = n); weight manually to keep the rows
  DocTermMatrix idf = raw;
  idf.weighting = Weighting::idf_weighted;
  EmOptions opt;
  opt.fixed_lambda = 10.0;
  CHECK_THROWS_AS(fit_em(idf, 2, {0.05}, {}, opt), numeric_error);
}

TEST_CASE("fixed-lambda EM is monotone with proper posteriors") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto data = testkit::generate(testkit::single_epoch_scenario(3, 30, 40, 20, 0.5), 100 + seed);
    DocTermMatrix idf = idf_matrix_of(data);
    EmOptions opt;
    opt.fixed_lambda = 20.0;
    opt.seed = seed;
    opt.tol = 1e-12;

    // re-run EM manually to watch the trace
    KmeansResult km = spherical_kmeans(idf, 3, 3, Rng::derive(seed, 0x6b6d));
    const std::int32_t n = idf.n_docs();
    std::vector<double> post(static_cast<std::size_t>(n) * 3, 0.0);
    for (std::int32_t j = 0; j < n; ++j) {
      std::int32_t lab = km.labels[static_cast<std::size_t>(j)];
      if (lab >= 0) post[static_cast<std::int64_t>(j) * 3 + lab] = 1.0;
      else
        for (int i = 0; i < 3; ++i) post[static_cast<std::int64_t>(j) * 3 + i] = 1.0 / 3.0;
    }
    MixtureModel model;
    model.k = 3;
    model.lambda = 20.0;
    model.vocab_fingerprint = idf.vocab.fingerprint();
    double prev = -1e300;
    for (int iter = 0; iter < 25; ++iter) {
      MStepOut ms = m_step(idf, post, 3, {0.05}, LambdaMode::fixed, 20.0, iter);
      model.centroids = std::move(ms.centroids);
      model.weights = ms.weights;
      EStepOut es = e_step(model, idf);
      post = std::move(es.posteriors);
      CHECK(es.partial_loglik >= prev - 1e-10);
      prev = es.partial_loglik;

      double pi_sum = 0.0;
      for (double w : model.weights) pi_sum += w;
      CHECK(std::abs(pi_sum - 1.0) < 1e-12);
      for (std::int32_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) s += post[static_cast<std::int64_t>(j) * 3 + i];
        CHECK(std::abs(s - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("EM hard labels agree with exhaustive classification likelihood") {
  // n <= 8, p <= 4, k = 2: enumerate every assignment with both clusters
  // nonempty, score the classification likelihood at the shared lambda
  const double lambda = 25.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(9000 + seed);
    const std::int32_t n = 8, p = 4;
    std::vector<std::vector<double>> rows(n, std::vector<double>(p, 0.0));
    for (std::int32_t j = 0; j < n; ++j) {
      // two separated direction bundles
      if (j < n / 2) {
        rows[static_cast<std::size_t>(j)][0] = 3.0 + rng.uniform();
        rows[static_cast<std::size_t>(j)][1] = rng.uniform() * 0.2;
      } else {
        rows[static_cast<std::size_t>(j)][2] = 3.0 + rng.uniform();
        rows[static_cast<std::size_t>(j)][3] = rng.uniform() * 0.2;
      }
    }
    DocTermMatrix m;
    std::vector<std::string> terms;
    for (std::int32_t h = 0; h < p; ++h) terms.push_back(testkit::term_token(h));
    m.vocab = Vocabulary::from_sorted_terms(std::move(terms));
    m.weighting = Weighting::idf_weighted;
    m.row_start.assign(static_cast<std::size_t>(n) + 1, 0);
    for (std::int32_t j = 0; j < n; ++j) {
      for (std::int32_t h = 0; h < p; ++h) {
        if (rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(h)] != 0.0) {
          m.cols.push_back(h);
          m.vals.push_back(rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(h)]);
        }
      }
      m.row_start[static_cast<std::size_t>(j) + 1] = static_cast<std::int64_t>(m.cols.size());
    }
    m.recompute_norms();

    double best = -1e300;
    std::vector<std::int32_t> best_assign;
    for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
      std::vector<std::int32_t> assign(static_cast<std::size_t>(n));
      std::vector<double> w0(static_cast<std::size_t>(n), 0.0), w1(static_cast<std::size_t>(n), 0.0);
      double n0 = 0;
      for (std::int32_t j = 0; j < n; ++j) {
        assign[static_cast<std::size_t>(j)] = (mask >> j) & 1;
        if (assign[static_cast<std::size_t>(j)] == 0) {
          w0[static_cast<std::size_t>(j)] = 1.0;
          ++n0;
        } else {
          w1[static_cast<std::size_t>(j)] = 1.0;
        }
      }
      Centroid c0 = spherical_mean(m, w0);
      Centroid c1 = spherical_mean(m, w1);
      double pi0 = n0 / n;
      double ll = 0.0;
      for (std::int32_t j = 0; j < n; ++j) {
        const Centroid& c = assign[static_cast<std::size_t>(j)] == 0 ? c0 : c1;
        double pi = assign[static_cast<std::size_t>(j)] == 0 ? pi0 : 1.0 - pi0;
        ll += std::log(pi) - lambda * row_centroid_distance(m, j, c);
      }
      if (ll > best) {
        best = ll;
        best_assign = assign;
      }
    }

    EmOptions opt;
    opt.fixed_lambda = lambda;
    opt.seed = seed;
    EmFit fit = fit_em(m, 2, {0.05}, {}, opt);
    CHECK(testkit::adjusted_rand_index(fit.result.hard_labels, best_assign) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("average lambda over a single k is that lambda") {
  auto data = testkit::generate(testkit::single_epoch_scenario(2, 30, 30, 20, 0.6), 14);
  DocTermMatrix idf = idf_matrix_of(data);
  LambdaAverage avg = average_lambda_over_k(idf, 2, 2, {0.05}, 5, 3);
  REQUIRE(avg.per_k.size() == 1);
  CHECK(avg.lambda_bar == avg.per_k[0].second);
  CHECK(avg.skipped.empty());
}

TEST_CASE("average lambda is deterministic and usable downstream") {
  auto data = testkit::generate(testkit::single_epoch_scenario(3, 40, 40, 20, 0.6), 15);
  DocTermMatrix idf = idf_matrix_of(data);
  LambdaAverage a = average_lambda_over_k(idf, 2, 6, {0.05}, 77, 3);
  LambdaAverage b = average_lambda_over_k(idf, 2, 6, {0.05}, 77, 3);
  CHECK(a.lambda_bar == b.lambda_bar);
  CHECK(a.lambda_bar > 0.0);
  CHECK(std::isfinite(a.lambda_bar));

  // fixed-lambda fits at several k are comparable under AIC
  std::vector<SweepEntry> entries;
  for (std::int32_t k = 2; k <= 4; ++k) {
    EmOptions opt;
    opt.fixed_lambda = a.lambda_bar;
    opt.seed = 5;
    EmFit fit = fit_em(idf, k, {0.05}, {}, opt);
    SweepEntry e;
    e.k = k;
    e.lambda = fit.model.lambda;
    e.vocab_fingerprint = fit.model.vocab_fingerprint;
    e.partial_loglik = fit.result.partial_loglik;
    e.ic = information_criteria(fit.result, fit.model, idf.n_docs(), idf.n_terms());
    entries.push_back(e);
  }
  CHECK_NOTHROW(best_k_by_aic(entries));
}

TEST_CASE("information criteria penalties") {
  MixtureModel small, large;
  small.k = 3;
  large.k = 4;
  ClusteringResult r;
  r.partial_loglik = -1000.0;
  auto ic_small = information_criteria(r, small, 100, 50);
  auto ic_large = information_criteria(r, large, 100, 50);
  CHECK(ic_small.dof == 2 + 3 * 49);
  CHECK(ic_small.aic < ic_large.aic);  // equal fit, smaller k wins
  CHECK(ic_small.bic < ic_large.bic);
}

TEST_CASE("mixed-lambda comparison is rejected") {
  SweepEntry a, b;
  a.k = 2;
  a.lambda = 10.0;
  a.vocab_fingerprint = 1;
  b.k = 3;
  b.lambda = 11.0;
  b.vocab_fingerprint = 1;
  std::vector<SweepEntry> entries = {a, b};
  CHECK_THROWS_AS(best_k_by_aic(entries), numeric_error);
}

TEST_CASE("e_step rejects a mismatched vocabulary") {
  auto data = testkit::generate(testkit::single_epoch_scenario(2, 10, 20, 10, 0.6), 2);
  DocTermMatrix idf = idf_matrix_of(data);
  MixtureModel model;
  model.k = 2;
  model.lambda = 5.0;
  model.weights = {0.5, 0.5};
  model.vocab_fingerprint = idf.vocab.fingerprint() + 1;
  std::vector<double> ones(static_cast<std::size_t>(idf.n_docs()), 1.0);
  model.centroids = {spherical_mean(idf, ones), spherical_mean(idf, ones)};
  CHECK_THROWS_AS(e_step(model, idf), data_error);
}
