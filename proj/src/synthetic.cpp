#include "dao/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "dao/errors.hpp"

namespace dao::synthetic {

RiskDraw gen_risks(const RiskSpec& spec) {
  if (spec.log_sigma < 0.0) throw InvalidSpec("log_sigma must be non-negative");
  std::mt19937_64 rng(spec.seed);
  RiskDraw out;
  auto draw = [&] {
    if (spec.log_sigma == 0.0) return std::exp(spec.log_mean);
    std::normal_distribution<double> normal(spec.log_mean, spec.log_sigma);
    return std::exp(normal(rng));
  };
  out.calib.reserve(spec.n_calib);
  out.test.reserve(spec.n_test);
  for (std::size_t i = 0; i < spec.n_calib; ++i) out.calib.push_back(draw());
  for (std::size_t i = 0; i < spec.n_test; ++i) out.test.push_back(draw());
  return out;
}

namespace {

// Orthonormal basis of `count` random directions in R^dim (Gram-Schmidt).
std::vector<Vector> random_orthonormal(std::size_t count, std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> basis;
  while (basis.size() < count) {
    Vector v(dim);
    for (auto& x : v) x = normal(rng);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const double d = dot(v, b);
        for (std::size_t i = 0; i < dim; ++i) v[i] -= d * b[i];
      }
    }
    double n = std::sqrt(dot(v, v));
    if (n < 1e-6) continue;
    for (auto& x : v) x /= n;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

ClusteredPoints gen_clustered_points(const ClusterSpec& spec) {
  if (spec.n_clusters == 0 || spec.n_points < spec.n_clusters)
    throw InvalidSpec("need at least one point per cluster");
  if (!(spec.spread >= 0.0 && spec.spread < 1.0)) throw InvalidSpec("spread must be in [0, 1)");
  if (!(spec.separation > 2.0 * spec.spread)) throw InvalidSpec("separation must exceed twice the spread");
  if (!(spec.separation <= 2.0)) throw InvalidSpec("separation must be at most 2");

  const std::size_t k = spec.n_clusters;
  const double kd = static_cast<double>(k);
  const double cos_a = std::sqrt(1.0 - spec.spread), sin_a = std::sqrt(spec.spread);
  // A point is cos_a * centre + sin_a * u with every u orthogonal to everything
  // else, so same-cluster pairs sit at exactly `spread` and cross-cluster pairs
  // at 1 - (1 - spread) * c, where c is the cosine between centres.
  const double c = k == 1 ? 0.0 : (1.0 - spec.separation) / (1.0 - spec.spread);
  if (k > 1 && c < -1.0 / (kd - 1.0)) throw InvalidSpec("separation not realisable for this cluster count");

  std::mt19937_64 rng(spec.seed);
  const std::size_t dim = std::max(spec.min_dimension, k + spec.n_points);
  const auto basis = random_orthonormal(k + spec.n_points, dim, rng);

  // Centres with pairwise cosine c: sqrt(1 - c) * (e_i - g * mean(e)).
  const double g = 1.0 - std::sqrt(1.0 + c * kd / (1.0 - c));
  std::vector<Vector> centres(k, Vector(dim, 0.0));
  for (std::size_t ci = 0; ci < k; ++ci) {
    for (std::size_t j = 0; j < k; ++j) {
      const double coef = std::sqrt(1.0 - c) * ((j == ci ? 1.0 : 0.0) - g / kd);
      for (std::size_t i = 0; i < dim; ++i) centres[ci][i] += coef * basis[j][i];
    }
  }

  ClusteredPoints out;
  out.dimension = dim;
  out.achieved_separation = k == 1 ? 0.0 : 1.0 - (1.0 - spec.spread) * c;
  std::vector<std::size_t> order(spec.n_points);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  for (auto p : order) {
    const std::size_t ci = p % k;
    const auto& u = basis[k + p];
    Vector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = cos_a * centres[ci][i] + sin_a * u[i];
    out.points.push_back(normalized(v));
    out.labels.push_back(ci);
  }
  return out;
}

EmbeddedIndex as_index(const ClusteredPoints& points) {
  EmbeddedIndex index;
  index.dimension = points.dimension;
  for (std::size_t i = 0; i < points.points.size(); ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "p%04zu", i);
    ReferenceEntry e;
    e.sentence = Sentence::make(id, id);
    e.annotation.sentence_id = id;
    index.entries.push_back(std::move(e));
    index.vectors.push_back(points.points[i]);
  }
  return index;
}

}  // namespace dao::synthetic
