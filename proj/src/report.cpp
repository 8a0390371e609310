#include "cosmix/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cosmix/kernels.hpp"
#include "cosmix/rng.hpp"

namespace cosmix {

CohesionValue cohesion(const DocTermMatrix& matrix, std::span<const std::int32_t> members,
                       std::size_t exact_limit, std::uint64_t seed) {
  if (members.empty()) throw data_error("cohesion: empty cluster");
  CohesionValue out;
  double dbar = 0.0;
  if (members.size() <= 1) {
    dbar = 0.0;
  } else if (members.size() <= exact_limit) {
    dbar = kernels::mean_pairwise_distance(matrix, members);
  } else {
    constexpr std::size_t kSamplePairs = 200000;
    Rng rng(seed);
    std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
    pairs.reserve(kSamplePairs);
    for (std::size_t s = 0; s < kSamplePairs; ++s) {
      std::size_t a = rng.below(members.size());
      std::size_t b = rng.below(members.size() - 1);
      if (b >= a) ++b;
      pairs.emplace_back(members[a], members[b]);
    }
    std::vector<double> d(pairs.size());
    kernels::pairwise_distance_batch(matrix, pairs, d.data());
    for (double x : d) dbar += x;
    dbar /= static_cast<double>(pairs.size());
    out.estimated = true;
  }
  out.value = std::sqrt(std::max(0.0, 1.0 - dbar * dbar));
  return out;
}

std::vector<RankedTerm> top_terms(const DocTermMatrix& matrix,
                                  std::span<const std::int32_t> members, std::int32_t m) {
  if (members.empty()) throw data_error("top_terms: empty cluster");
  std::map<std::int32_t, double> sums;
  for (std::int32_t j : members)
    for (std::int64_t e = matrix.row_start[j]; e < matrix.row_start[j + 1]; ++e)
      sums[matrix.cols[static_cast<std::size_t>(e)]] += matrix.vals[static_cast<std::size_t>(e)];

  std::vector<std::pair<std::int32_t, double>> items(sums.begin(), sums.end());
  std::sort(items.begin(), items.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;  // column order is lexicographic
  });
  std::vector<RankedTerm> out;
  const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(m), items.size());
  out.reserve(take);
  for (std::size_t r = 0; r < take; ++r)
    out.push_back({matrix.vocab.terms[static_cast<std::size_t>(items[r].first)], items[r].second});
  return out;
}

RepresentativeDoc representative_doc(const DocTermMatrix& matrix,
                                     std::span<const std::int32_t> members, const Centroid& c) {
  if (members.empty()) throw data_error("representative_doc: empty cluster");
  RepresentativeDoc best;
  for (std::int32_t j : members) {
    double d = row_centroid_distance(matrix, j, c);
    if (best.doc_id < 0 || d < best.distance || (d == best.distance && j < best.doc_id)) {
      best.doc_id = j;
      best.distance = d;
    }
  }
  return best;
}

namespace {

// Cyclic Jacobi eigendecomposition of a small symmetric matrix.
// Eigenvalues in `eval`, matching eigenvectors in the columns of `evec`.
void jacobi_eigen(std::vector<double>& a, std::int32_t n, std::vector<double>& eval,
                  std::vector<double>& evec) {
  evec.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (std::int32_t i = 0; i < n; ++i) evec[static_cast<std::size_t>(i) * n + i] = 1.0;
  auto A = [&](std::int32_t r, std::int32_t c) -> double& {
    return a[static_cast<std::size_t>(r) * n + c];
  };
  auto V = [&](std::int32_t r, std::int32_t c) -> double& {
    return evec[static_cast<std::size_t>(r) * n + c];
  };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::int32_t r = 0; r < n; ++r)
      for (std::int32_t c = r + 1; c < n; ++c) off += A(r, c) * A(r, c);
    if (off < 1e-30) break;
    for (std::int32_t p = 0; p < n - 1; ++p) {
      for (std::int32_t q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) < 1e-300) continue;
        double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double cth = 1.0 / std::sqrt(t * t + 1.0);
        double sth = t * cth;
        for (std::int32_t r = 0; r < n; ++r) {
          double arp = A(r, p), arq = A(r, q);
          A(r, p) = cth * arp - sth * arq;
          A(r, q) = sth * arp + cth * arq;
        }
        for (std::int32_t c = 0; c < n; ++c) {
          double apc = A(p, c), aqc = A(q, c);
          A(p, c) = cth * apc - sth * aqc;
          A(q, c) = sth * apc + cth * aqc;
        }
        for (std::int32_t r = 0; r < n; ++r) {
          double vrp = V(r, p), vrq = V(r, q);
          V(r, p) = cth * vrp - sth * vrq;
          V(r, q) = sth * vrp + cth * vrq;
        }
      }
    }
  }
  eval.assign(static_cast<std::size_t>(n), 0.0);
  for (std::int32_t i = 0; i < n; ++i) eval[static_cast<std::size_t>(i)] = A(i, i);
}

}  // namespace

MdsLayout mds_from_distances(std::span<const double> distances, std::int32_t k) {
  if (k < 2) throw data_error("mds: need at least two points");

  // B = -1/2 J D^2 J, double-centered squared distances
  std::vector<double> b(static_cast<std::size_t>(k) * k, 0.0);
  for (std::int32_t r = 0; r < k; ++r) {
    for (std::int32_t c = 0; c < k; ++c) {
      double d = distances[static_cast<std::size_t>(r) * k + c];
      b[static_cast<std::size_t>(r) * k + c] = -0.5 * d * d;
    }
  }
  std::vector<double> row_mean(static_cast<std::size_t>(k), 0.0);
  double grand = 0.0;
  for (std::int32_t r = 0; r < k; ++r) {
    for (std::int32_t c = 0; c < k; ++c) row_mean[static_cast<std::size_t>(r)] += b[static_cast<std::size_t>(r) * k + c];
    row_mean[static_cast<std::size_t>(r)] /= k;
    grand += row_mean[static_cast<std::size_t>(r)];
  }
  grand /= k;
  for (std::int32_t r = 0; r < k; ++r)
    for (std::int32_t c = 0; c < k; ++c)
      b[static_cast<std::size_t>(r) * k + c] +=
          grand - row_mean[static_cast<std::size_t>(r)] - row_mean[static_cast<std::size_t>(c)];

  std::vector<double> eval, evec;
  jacobi_eigen(b, k, eval, evec);

  std::array<std::int32_t, 2> top{0, 0};
  {
    std::vector<std::int32_t> order(static_cast<std::size_t>(k));
    for (std::int32_t i = 0; i < k; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](std::int32_t x, std::int32_t y) {
      if (eval[static_cast<std::size_t>(x)] != eval[static_cast<std::size_t>(y)])
        return eval[static_cast<std::size_t>(x)] > eval[static_cast<std::size_t>(y)];
      return x < y;
    });
    top = {order[0], order[1]};
  }

  MdsLayout out;
  out.points.assign(static_cast<std::size_t>(k), {0.0, 0.0});
  for (int axis = 0; axis < 2; ++axis) {
    double lam = eval[static_cast<std::size_t>(top[static_cast<std::size_t>(axis)])];
    if (lam <= 1e-12) {
      if (axis == 1) out.rank_deficient = true;
      continue;  // axis stays zero
    }
    double scale = std::sqrt(lam);
    // sign convention: first coordinate of magnitude > 1e-12 made positive
    double sign = 1.0;
    for (std::int32_t r = 0; r < k; ++r) {
      double v = evec[static_cast<std::size_t>(r) * k + top[static_cast<std::size_t>(axis)]];
      if (std::abs(v) > 1e-12) {
        sign = v > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    for (std::int32_t r = 0; r < k; ++r)
      out.points[static_cast<std::size_t>(r)][static_cast<std::size_t>(axis)] =
          sign * scale * evec[static_cast<std::size_t>(r) * k + top[static_cast<std::size_t>(axis)]];
  }
  return out;
}

MdsLayout mds_layout(std::span<const Centroid> centroids) {
  const std::int32_t k = static_cast<std::int32_t>(centroids.size());
  if (k < 2) throw data_error("mds_layout: need at least two centroids");
  std::vector<double> d(static_cast<std::size_t>(k) * k, 0.0);
  for (std::int32_t r = 0; r < k; ++r)
    for (std::int32_t c = r + 1; c < k; ++c) {
      double v = cosine_distance(centroids[static_cast<std::size_t>(r)].v,
                                 centroids[static_cast<std::size_t>(c)].v);
      d[static_cast<std::size_t>(r) * k + c] = v;
      d[static_cast<std::size_t>(c) * k + r] = v;
    }
  return mds_from_distances(d, k);
}

std::vector<ClusterReport> build_reports(const MixtureModel& model,
                                         const ClusteringResult& result,
                                         const DocTermMatrix& matrix, std::int32_t n_top_terms) {
  if (model.vocab_fingerprint != matrix.vocab.fingerprint())
    throw data_error("build_reports: model and matrix vocabularies differ");
  const std::int32_t k = model.k;
  std::vector<std::vector<std::int32_t>> members(static_cast<std::size_t>(k));
  for (std::int32_t j = 0; j < matrix.n_docs(); ++j)
    members[static_cast<std::size_t>(result.hard_labels[static_cast<std::size_t>(j)])].push_back(j);

  MdsLayout layout = mds_layout(model.centroids);

  std::vector<ClusterReport> reports;
  reports.reserve(static_cast<std::size_t>(k));
  for (std::int32_t i = 0; i < k; ++i) {
    ClusterReport r;
    r.cluster = i;
    r.size = static_cast<std::int64_t>(members[static_cast<std::size_t>(i)].size());
    r.layout = layout.points[static_cast<std::size_t>(i)];
    if (!members[static_cast<std::size_t>(i)].empty()) {
      r.cohesion = cohesion(matrix, members[static_cast<std::size_t>(i)]);
      r.terms = top_terms(matrix, members[static_cast<std::size_t>(i)], n_top_terms);
      r.representative = representative_doc(matrix, members[static_cast<std::size_t>(i)],
                                            model.centroids[static_cast<std::size_t>(i)]);
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

std::string reports_to_json(std::span<const ClusterReport> reports) {
  nlohmann::ordered_json j;
  j["format"] = "cosmix-cluster-report";
  j["version"] = 1;
  j["k"] = reports.size();
  j["clusters"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json c;
    c["cluster"] = r.cluster;
    c["size"] = r.size;
    c["cohesion"] = r.cohesion.value;
    c["cohesion_estimated"] = r.cohesion.estimated;
    c["top_terms"] = nlohmann::ordered_json::array();
    for (const auto& t : r.terms)
      c["top_terms"].push_back({{"term", t.term}, {"weight", t.weight}});
    c["representative_doc"] = {{"doc_id", r.representative.doc_id},
                               {"distance", r.representative.distance}};
    c["layout"] = {{"x", r.layout[0]}, {"y", r.layout[1]}};
    j["clusters"].push_back(std::move(c));
  }
  return j.dump(2) + "\n";
}

std::string reports_to_balloon_csv(std::span<const ClusterReport> reports) {
  std::ostringstream os;
  os << "cluster,x,y,size,cohesion\n";
  char buf[128];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%lld,%.9g\n", r.cluster, r.layout[0],
                  r.layout[1], static_cast<long long>(r.size), r.cohesion.value);
    os << buf;
  }
  return os.str();
}

}  // namespace cosmix
