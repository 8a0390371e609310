// Benchmark of the OpenMP kernels against their serial reference loops on a
// synthetic corpus. Also verifies the two paths agree bit-for-bit.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "cosmix/featsel.hpp"
#include "cosmix/geometry.hpp"
#include "cosmix/kernels.hpp"
#include "cosmix/mixture.hpp"
#include "cosmix/rng.hpp"
#include "cosmix/testkit.hpp"

using namespace cosmix;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    double t0 = now_ms();
    f();
    best = std::min(best, now_ms() - t0);
  }
  return best;
}

struct Row {
  const char* name;
  double serial_ms;
  double parallel_ms;
  bool equal;
};

void print_rows(const std::vector<Row>& rows) {
  std::printf("%-28s %12s %12s %9s %s\n", "kernel", "serial (ms)", "openmp (ms)", "speedup",
              "bit-equal");
  for (const auto& r : rows) {
    std::printf("%-28s %12.2f %12.2f %8.2fx %s\n", r.name, r.serial_ms, r.parallel_ms,
                r.serial_ms / std::max(r.parallel_ms, 1e-9), r.equal ? "yes" : "NO");
  }
}

bool bytes_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  int n_docs = 4000;
  int n_topics = 8;
  int reps = 3;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--docs" && i + 1 < argc) n_docs = std::atoi(argv[++i]);
    else if (arg == "--topics" && i + 1 < argc) n_topics = std::atoi(argv[++i]);
    else if (arg == "--reps" && i + 1 < argc) reps = std::atoi(argv[++i]);
  }

  std::printf("threads: %d, documents: %d, topics: %d\n", omp_get_max_threads(), n_docs,
              n_topics);

  auto scenario = testkit::single_epoch_scenario(n_topics, n_docs / n_topics, 120, 40, 0.6);
  auto data = testkit::generate(scenario, 42);
  DocTermMatrix idf = apply_idf(data.epochs[0].raw);
  const std::int32_t n = idf.n_docs();
  const std::int32_t k = n_topics;

  std::vector<Centroid> centroids;
  {
    Rng rng(7);
    for (std::int32_t i = 0; i < k; ++i) {
      std::vector<double> v(static_cast<std::size_t>(idf.n_terms()));
      for (auto& x : v) x = rng.uniform();
      centroids.push_back(Centroid::from_unnormalized(std::move(v)));
    }
  }

  std::vector<Row> rows;

  std::vector<double> dist_p(static_cast<std::size_t>(n) * k), dist_s(dist_p.size());
  {
    double ts = time_best_of(reps, [&] { kernels::serial::doc_centroid_distances(idf, centroids, dist_s.data()); });
    double tp = time_best_of(reps, [&] { kernels::doc_centroid_distances(idf, centroids, dist_p.data()); });
    rows.push_back({"doc_centroid_distances", ts, tp, bytes_equal(dist_p, dist_s)});
  }

  std::vector<double> pi(static_cast<std::size_t>(k), 1.0 / k);
  std::vector<double> post_p(dist_p.size()), post_s(dist_p.size());
  {
    double pll_s = 0.0, pll_p = 0.0;
    double ts = time_best_of(reps, [&] {
      pll_s = kernels::serial::posteriors_from_distances(dist_s, n, k, pi, 25.0, post_s.data());
    });
    double tp = time_best_of(reps, [&] {
      pll_p = kernels::posteriors_from_distances(dist_p, n, k, pi, 25.0, post_p.data());
    });
    rows.push_back({"posteriors_from_distances", ts, tp,
                    bytes_equal(post_p, post_s) && pll_s == pll_p});
  }

  {
    std::vector<std::vector<double>> sums_s, sums_p;
    double ts = time_best_of(reps, [&] { kernels::serial::weighted_normalized_sums(idf, post_s, k, sums_s); });
    double tp = time_best_of(reps, [&] { kernels::weighted_normalized_sums(idf, post_p, k, sums_p); });
    bool eq = sums_s.size() == sums_p.size();
    for (std::size_t i = 0; eq && i < sums_s.size(); ++i) eq = bytes_equal(sums_s[i], sums_p[i]);
    rows.push_back({"weighted_normalized_sums", ts, tp, eq});
  }

  {
    CscView csc = transpose(idf);
    std::vector<double> h_s(static_cast<std::size_t>(idf.n_terms()));
    std::vector<double> h_p(h_s.size());
    double ts = time_best_of(reps, [&] { kernels::serial::term_entropy(csc, n, h_s); });
    double tp = time_best_of(reps, [&] { kernels::term_entropy(csc, n, h_p); });
    rows.push_back({"term_entropy", ts, tp, bytes_equal(h_s, h_p)});
  }

  {
    // calibration gap/ratio structure from the nearest component per doc
    std::vector<double> gaps(dist_p.size()), ratios(dist_p.size());
    for (std::int32_t j = 0; j < n; ++j) {
      const double* row = dist_p.data() + static_cast<std::int64_t>(j) * k;
      std::int32_t near = 0;
      for (std::int32_t i = 1; i < k; ++i)
        if (row[i] < row[near]) near = i;
      for (std::int32_t i = 0; i < k; ++i) {
        gaps[static_cast<std::int64_t>(j) * k + i] = row[i] - row[near];
        ratios[static_cast<std::int64_t>(j) * k + i] = 1.0;
      }
    }
    std::vector<double> scratch(static_cast<std::size_t>(n));
    double v_s = 0.0, v_p = 0.0;
    double ts = time_best_of(reps, [&] {
      v_s = kernels::serial::calibration_lhs(gaps, ratios, n, k, 20.0, scratch);
    });
    double tp = time_best_of(reps, [&] {
      v_p = kernels::calibration_lhs(gaps, ratios, n, k, 20.0, scratch);
    });
    rows.push_back({"calibration_lhs", ts, tp, v_s == v_p});
  }

  {
    std::vector<std::int32_t> members;
    for (std::int32_t j = 0; j < std::min<std::int32_t>(n, 1500); ++j) members.push_back(j);
    double v_s = 0.0, v_p = 0.0;
    double ts = time_best_of(reps, [&] { v_s = kernels::serial::mean_pairwise_distance(idf, members); });
    double tp = time_best_of(reps, [&] { v_p = kernels::mean_pairwise_distance(idf, members); });
    rows.push_back({"mean_pairwise_distance", ts, tp, v_s == v_p});
  }

  print_rows(rows);
  for (const auto& r : rows)
    if (!r.equal) return 1;
  return 0;
}
