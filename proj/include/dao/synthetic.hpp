#pragma once

#include <cstdint>
#include <vector>

#include "dao/corpus.hpp"

namespace dao::synthetic {

struct RiskSpec {
  std::uint64_t seed = 0;
  std::size_t n_calib = 99;
  std::size_t n_test = 1;
  double log_mean = 0.0;    // risks are exp(N(log_mean, log_sigma^2))
  double log_sigma = 1.0;   // 0 gives constant risks
};

struct RiskDraw {
  std::vector<double> calib;
  std::vector<double> test;
};

/// i.i.d. log-normal risks; a pure function of the spec.
RiskDraw gen_risks(const RiskSpec& spec);

struct ClusterSpec {
  std::uint64_t seed = 0;
  std::size_t n_points = 30;
  std::size_t n_clusters = 3;
  double spread = 0.1;      // cosine distance between any two points of a cluster
  double separation = 0.9;  // required lower bound on cross-cluster cosine distance
  std::size_t min_dimension = 8;
};

struct ClusteredPoints {
  std::vector<Vector> points;       // unit vectors, shuffled
  std::vector<std::size_t> labels;  // planted cluster of each point
  std::size_t dimension = 0;
  double achieved_separation = 0.0;  // cross-cluster cosine distance (equals `separation`)
};

/// Every same-cluster pair is exactly `spread` apart and every cross-cluster
/// pair exactly `separation` apart (cosine distance, up to rounding), so
/// leader clustering at any radius in [spread, separation) recovers the
/// planted partition. Requires separation > 2 * spread and a separation the
/// cluster count can realise; throws InvalidSpec.
ClusteredPoints gen_clustered_points(const ClusterSpec& spec);

/// Wraps planted points as an index (ids "p0000"...) so DRAG can run on them.
EmbeddedIndex as_index(const ClusteredPoints& points);

}  // namespace dao::synthetic
