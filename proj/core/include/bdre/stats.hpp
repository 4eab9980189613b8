// Copyright 2026 The bdre Authors.
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

#ifndef BDRE_STATS_HPP_
#define BDRE_STATS_HPP_

#include <cstddef>
#include <functional>
#include <vector>

namespace bdre {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

// Sample mean and standard error (compensated, order of `values`).
McEstimate mc_estimate(const std::vector<double>& values);

// Binomial proportion with standard error sqrt(p (1 - p) / n).
McEstimate proportion_estimate(std::size_t hits, std::size_t n);

// |a - b| / sqrt(se_a^2 + se_b^2) (0 if both errors vanish and a == b).
double z_score(const McEstimate& a, const McEstimate& b);
double z_score(const McEstimate& a, double exact);

struct KsResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 l^2).
double kolmogorov_q(double lambda);

// One-sample test against a continuous CDF (Stephens' small-sample
// correction of the asymptotic law).
KsResult ks_one_sample(std::vector<double> sample,
                       const std::function<double(double)>& cdf);

// Two-sample test; ties are handled by stepping through equal values
// together.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 0.0;
};

// Compares two independent binned estimates with their standard errors:
// sum_k (p_k - q_k)^2 / (se_p_k^2 + se_q_k^2), dof = bins used - 1.
// Bins where both standard errors vanish are skipped.
ChiSquareResult chi_square_compare(const std::vector<McEstimate>& p,
                                   const std::vector<McEstimate>& q);

}  // namespace bdre

#endif  // BDRE_STATS_HPP_
