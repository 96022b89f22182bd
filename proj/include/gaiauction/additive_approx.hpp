// Copyright 2026 The gaiauction Authors.
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

#ifndef GAIAUCTION_ADDITIVE_APPROX_HPP
#define GAIAUCTION_ADDITIVE_APPROX_HPP

/// \file additive_approx.hpp
///
/// Least-squares additive fit of a value function: one indicator per
/// attribute level, coefficients solved from the (ridge-regularized) normal
/// equations, packaged as a GAI function with one singleton element per
/// attribute.

#include <gaiauction/core_model.hpp>
#include <gaiauction/random.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gaiauction {

struct RegressionSample {
  std::vector<Configuration> points;
  std::vector<double> values;
  std::size_t size() const { return points.size(); }
};

/// n configurations drawn uniformly with replacement, with exact values.
inline RegressionSample sample_points(const GaiFunction& u, std::size_t n, Rng& rng) {
  if (n == 0) throw std::invalid_argument("sample_points: n must be positive");
  const auto& schema = u.schema();
  RegressionSample s;
  s.points.reserve(n);
  s.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Configuration c(std::vector<Level>(schema.size()));
    for (std::size_t a = 0; a < schema.size(); ++a)
      c[a] = static_cast<Level>(rng.below(static_cast<std::uint64_t>(schema.domain_size(a))));
    s.values.push_back(u.evaluate(c));
    s.points.push_back(std::move(c));
  }
  return s;
}

/// Every configuration once, in lexicographic order.
inline RegressionSample exhaustive_sample(const GaiFunction& u) {
  RegressionSample s;
  Configuration c(std::vector<Level>(u.schema().size(), 0));
  do {
    s.points.push_back(c);
    s.values.push_back(u.evaluate(c));
  } while (next_configuration(u.schema(), c));
  return s;
}

/// One singleton element per attribute, no edges.
inline GaiStructure additive_structure(const AttributeSchema& schema) {
  return GaiStructure::singletons(schema.size());
}

inline constexpr double kRidge = 1e-9;

/// Least-squares coefficients c_{ij} (attribute i, level j) minimizing
/// sum_s (sum_i c_{i,level_i(s)} - value_s)^2 + ridge * |c|^2.
inline GaiFunction fit_additive(const RegressionSample& sample, const AttributeSchema& schema,
                                double ridge = kRidge) {
  if (sample.size() == 0) throw std::invalid_argument("fit_additive: empty sample");
  std::vector<std::size_t> offset(schema.size() + 1, 0);
  for (std::size_t a = 0; a < schema.size(); ++a)
    offset[a + 1] = offset[a] + static_cast<std::size_t>(schema.domain_size(a));
  const auto p = static_cast<Eigen::Index>(offset.back());
  Eigen::MatrixXd ata = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd atb = Eigen::VectorXd::Zero(p);
  std::vector<Eigen::Index> cols(schema.size());
  for (std::size_t s = 0; s < sample.size(); ++s) {
    const auto& c = sample.points[s];
    if (!is_valid(schema, c)) throw std::invalid_argument("fit_additive: invalid point");
    for (std::size_t a = 0; a < schema.size(); ++a)
      cols[a] = static_cast<Eigen::Index>(offset[a] + static_cast<std::size_t>(c[a]));
    for (Eigen::Index i : cols) {
      atb(i) += sample.values[s];
      for (Eigen::Index j : cols) ata(i, j) += 1.0;
    }
  }
  ata.diagonal().array() += ridge;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(ata);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw std::runtime_error("fit_additive: normal equations are singular");
  Eigen::VectorXd coef = ldlt.solve(atb);
  if (!coef.allFinite()) throw std::runtime_error("fit_additive: degenerate sample");
  std::vector<double> flat(coef.data(), coef.data() + coef.size());
  return GaiFunction(make_layout(schema, additive_structure(schema)), std::move(flat));
}

struct ResidualReport {
  double max_abs = 0.0;
  double mean_abs = 0.0;
  std::size_t points = 0;
};

inline ResidualReport residuals(const GaiFunction& truth, const GaiFunction& fit,
                                const RegressionSample& grid) {
  ResidualReport r;
  for (std::size_t s = 0; s < grid.size(); ++s) {
    const double e = std::abs(truth.evaluate(grid.points[s]) - fit.evaluate(grid.points[s]));
    r.max_abs = std::max(r.max_abs, e);
    r.mean_abs += e;
  }
  r.points = grid.size();
  if (r.points) r.mean_abs /= static_cast<double>(r.points);
  return r;
}

/// Sum of squared residuals of an additive model on a sample.
inline double residual_sum_of_squares(const GaiFunction& fit, const RegressionSample& s) {
  double rss = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double e = fit.evaluate(s.points[i]) - s.values[i];
    rss += e * e;
  }
  return rss;
}

}  // namespace gaiauction

#endif  // GAIAUCTION_ADDITIVE_APPROX_HPP
