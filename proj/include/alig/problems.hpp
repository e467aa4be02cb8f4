// Copyright 2026 The alig Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ALIG_PROBLEMS_HPP
#define ALIG_PROBLEMS_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "alig/objective.hpp"

namespace alig {

// l_z(w) = 1/2 (x_z . w - y_z)^2, so grad l_z(w) = (x_z . w - y_z) x_z.
class LeastSquaresObjective final : public StochasticObjective {
 public:
  LeastSquaresObjective(Eigen::MatrixXd features, Eigen::VectorXd targets,
                        std::optional<ParamVector> planted = std::nullopt);

  std::size_t num_samples() const override { return static_cast<std::size_t>(features_.rows()); }
  Eigen::Index dim() const override { return features_.cols(); }
  double evaluate(const ParamVector& w, std::size_t z, ParamVector& grad) const override;
  double loss(const ParamVector& w, std::size_t z) const override;
  double full_loss(const ParamVector& w) const override;
  std::optional<ParamVector> planted_solution() const override { return planted_; }
  std::vector<std::string> sample_columns() const override;
  std::vector<double> sample_row(std::size_t z) const override;

  const Eigen::MatrixXd& features() const { return features_; }
  const Eigen::VectorXd& targets() const { return targets_; }

 private:
  double residual(const ParamVector& w, std::size_t z) const;

  Eigen::MatrixXd features_;  // n x p, one sample per row
  Eigen::VectorXd targets_;
  std::optional<ParamVector> planted_;
};

// Logistic loss l_z(w) = log(1 + exp(-y_z x_z . w)) with labels y_z = +-1.
class LogisticObjective final : public StochasticObjective {
 public:
  LogisticObjective(Eigen::MatrixXd features, Eigen::VectorXd labels,
                    std::optional<ParamVector> separating_direction = std::nullopt);

  std::size_t num_samples() const override { return static_cast<std::size_t>(features_.rows()); }
  Eigen::Index dim() const override { return features_.cols(); }
  double evaluate(const ParamVector& w, std::size_t z, ParamVector& grad) const override;
  double loss(const ParamVector& w, std::size_t z) const override;
  std::optional<double> accuracy(const ParamVector& w) const override;
  std::vector<std::string> sample_columns() const override;
  std::vector<double> sample_row(std::size_t z) const override;

  // Unit-norm hyperplane used to label the data, when generated synthetically.
  // Loss approaches zero along it but never reaches it at finite scale.
  const std::optional<ParamVector>& separating_direction() const { return separator_; }

 private:
  Eigen::MatrixXd features_;
  Eigen::VectorXd labels_;
  std::optional<ParamVector> separator_;
};

// Two-layer perceptron 2 -> width -> 1 with tanh hidden units and logistic
// loss. Parameter layout:
//   [ W1 (width x 2, row-major) | b1 (width) | v (width) | c ]
// so dim() = 4 * width + 1 and the score is v . tanh(W1 x + b1) + c.
class TwoMoonsMlp final : public StochasticObjective {
 public:
  TwoMoonsMlp(Eigen::MatrixX2d points, Eigen::VectorXd labels, Eigen::Index width);

  std::size_t num_samples() const override { return static_cast<std::size_t>(points_.rows()); }
  Eigen::Index dim() const override { return 4 * width_ + 1; }
  double evaluate(const ParamVector& w, std::size_t z, ParamVector& grad) const override;
  double loss(const ParamVector& w, std::size_t z) const override;
  std::optional<double> accuracy(const ParamVector& w) const override;
  ParamVector initial_point(std::uint64_t seed) const override;
  std::vector<std::string> sample_columns() const override;
  std::vector<double> sample_row(std::size_t z) const override;

  Eigen::Index width() const { return width_; }
  double score(const ParamVector& w, std::size_t z) const;

 private:
  Eigen::MatrixX2d points_;
  Eigen::VectorXd labels_;
  Eigen::Index width_;
};

// Overparameterized (p >= n) least squares with targets y = X w*, so every
// sample is fit exactly by the planted w*.
LeastSquaresObjective gen_interp_least_squares(std::size_t n, std::size_t p, std::uint64_t seed);

// Labels from a planted unit-norm hyperplane; every point sits at distance
// >= margin from it.
LogisticObjective gen_separable_logistic(std::size_t n, std::size_t p, double margin,
                                         std::uint64_t seed);

// Two interleaved half circles with Gaussian noise, fit by a tanh MLP.
TwoMoonsMlp gen_two_moons_mlp(std::size_t n, std::size_t hidden_width, double noise,
                              std::uint64_t seed);

// Underparameterized (n > p) least squares with noisy targets; no w fits all
// samples.
LeastSquaresObjective gen_noninterp_least_squares(std::size_t n, std::size_t p, double noise,
                                                  std::uint64_t seed);

enum class ProblemKind { InterpLeastSquares, SeparableLogistic, TwoMoonsMlp, NonInterpLeastSquares };

std::string_view problem_kind_name(ProblemKind kind);
std::optional<ProblemKind> parse_problem_kind(std::string_view name);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::InterpLeastSquares;
  std::size_t n = 20;
  std::size_t p = 50;      // least squares and logistic
  std::size_t width = 32;  // MLP
  double noise = 0.1;      // MLP and non-interpolating least squares
  double margin = 0.1;     // logistic
  std::uint64_t seed = 0;
};

// Kind-appropriate defaults for every generation parameter.
ProblemSpec default_problem_spec(ProblemKind kind);

std::unique_ptr<StochasticObjective> make_objective(const ProblemSpec& spec);

struct GradientMismatch {
  std::size_t trial = 0;
  std::size_t sample = 0;
  Eigen::Index coordinate = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double relative_error = 0.0;
};

struct GradientCheckReport {
  bool passed = true;
  double max_relative_error = 0.0;
  std::size_t trials = 0;
  std::vector<GradientMismatch> failures;
};

// Compares analytic gradients with central differences of step h at
// `trials` random (w, z) pairs, w ~ N(0, I). Per-coordinate error is
// |analytic - numeric| / max(1, |analytic|, |numeric|).
GradientCheckReport check_gradients(const StochasticObjective& objective, std::size_t trials,
                                    double h, double tol, std::uint64_t seed);

// One CSV row per sample, header from sample_columns().
void write_dataset_csv(const StochasticObjective& objective, std::ostream& out);

}  // namespace alig

#endif  // ALIG_PROBLEMS_HPP
