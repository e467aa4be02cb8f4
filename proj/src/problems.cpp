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

#include "alig/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "alig/errors.hpp"
#include "numfmt.hpp"

namespace alig {
namespace {

// log(1 + exp(m)) without overflow.
double softplus(double m) { return m > 0.0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m)); }

double sigmoid(double m) {
  if (m >= 0.0) {
    return 1.0 / (1.0 + std::exp(-m));
  }
  const double e = std::exp(m);
  return e / (1.0 + e);
}

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd out(rows, cols);
  // Row-major fill order keeps sample z's features a function of z alone.
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      out(i, j) = normal(rng);
    }
  }
  return out;
}

Eigen::VectorXd gaussian_vector(Eigen::Index size, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd out(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    out[i] = normal(rng);
  }
  return out;
}

void require_samples(std::size_t n) {
  if (n == 0) {
    throw DomainError("number of samples must be positive");
  }
}

std::vector<std::string> indexed_columns(const char* prefix, Eigen::Index count) {
  std::vector<std::string> columns;
  for (Eigen::Index j = 0; j < count; ++j) {
    columns.push_back(prefix + std::to_string(j));
  }
  return columns;
}

}  // namespace

// --- least squares ---------------------------------------------------------

LeastSquaresObjective::LeastSquaresObjective(Eigen::MatrixXd features, Eigen::VectorXd targets,
                                             std::optional<ParamVector> planted)
    : features_(std::move(features)), targets_(std::move(targets)), planted_(std::move(planted)) {
  if (features_.rows() != targets_.size()) {
    throw DimensionMismatchError("least squares: features and targets disagree on n");
  }
  if (planted_ && planted_->size() != features_.cols()) {
    throw DimensionMismatchError("least squares: planted solution has wrong dimension");
  }
}

double LeastSquaresObjective::residual(const ParamVector& w, std::size_t z) const {
  const auto row = static_cast<Eigen::Index>(z);
  return features_.row(row).dot(w) - targets_[row];
}

double LeastSquaresObjective::evaluate(const ParamVector& w, std::size_t z,
                                       ParamVector& grad) const {
  const double r = residual(w, z);
  grad = r * features_.row(static_cast<Eigen::Index>(z)).transpose();
  return 0.5 * r * r;
}

double LeastSquaresObjective::loss(const ParamVector& w, std::size_t z) const {
  const double r = residual(w, z);
  return 0.5 * r * r;
}

double LeastSquaresObjective::full_loss(const ParamVector& w) const {
  return 0.5 * (features_ * w - targets_).squaredNorm() / static_cast<double>(num_samples());
}

std::vector<std::string> LeastSquaresObjective::sample_columns() const {
  auto columns = indexed_columns("x", features_.cols());
  columns.emplace_back("y");
  return columns;
}

std::vector<double> LeastSquaresObjective::sample_row(std::size_t z) const {
  const auto row = static_cast<Eigen::Index>(z);
  std::vector<double> values(features_.row(row).begin(), features_.row(row).end());
  values.push_back(targets_[row]);
  return values;
}

// --- logistic --------------------------------------------------------------

LogisticObjective::LogisticObjective(Eigen::MatrixXd features, Eigen::VectorXd labels,
                                     std::optional<ParamVector> separating_direction)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      separator_(std::move(separating_direction)) {
  if (features_.rows() != labels_.size()) {
    throw DimensionMismatchError("logistic: features and labels disagree on n");
  }
}

double LogisticObjective::evaluate(const ParamVector& w, std::size_t z, ParamVector& grad) const {
  const auto row = static_cast<Eigen::Index>(z);
  const double y = labels_[row];
  const double m = -y * features_.row(row).dot(w);
  grad = (-y * sigmoid(m)) * features_.row(row).transpose();
  return softplus(m);
}

double LogisticObjective::loss(const ParamVector& w, std::size_t z) const {
  const auto row = static_cast<Eigen::Index>(z);
  return softplus(-labels_[row] * features_.row(row).dot(w));
}

std::optional<double> LogisticObjective::accuracy(const ParamVector& w) const {
  const Eigen::VectorXd scores = features_ * w;
  Eigen::Index correct = 0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    correct += labels_[i] * scores[i] > 0.0 ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(scores.size());
}

std::vector<std::string> LogisticObjective::sample_columns() const {
  auto columns = indexed_columns("x", features_.cols());
  columns.emplace_back("label");
  return columns;
}

std::vector<double> LogisticObjective::sample_row(std::size_t z) const {
  const auto row = static_cast<Eigen::Index>(z);
  std::vector<double> values(features_.row(row).begin(), features_.row(row).end());
  values.push_back(labels_[row]);
  return values;
}

// --- two-moons MLP ---------------------------------------------------------

TwoMoonsMlp::TwoMoonsMlp(Eigen::MatrixX2d points, Eigen::VectorXd labels, Eigen::Index width)
    : points_(std::move(points)), labels_(std::move(labels)), width_(width) {
  if (points_.rows() != labels_.size()) {
    throw DimensionMismatchError("mlp: points and labels disagree on n");
  }
  if (width_ < 2) {
    throw DomainError("mlp: hidden width must be at least 2");
  }
}

double TwoMoonsMlp::score(const ParamVector& w, std::size_t z) const {
  const auto row = static_cast<Eigen::Index>(z);
  const double x0 = points_(row, 0);
  const double x1 = points_(row, 1);
  const Eigen::Index h = width_;
  double s = w[4 * h];
  for (Eigen::Index j = 0; j < h; ++j) {
    const double pre = w[2 * j] * x0 + w[2 * j + 1] * x1 + w[2 * h + j];
    s += w[3 * h + j] * std::tanh(pre);
  }
  return s;
}

double TwoMoonsMlp::evaluate(const ParamVector& w, std::size_t z, ParamVector& grad) const {
  const auto row = static_cast<Eigen::Index>(z);
  const double x0 = points_(row, 0);
  const double x1 = points_(row, 1);
  const double y = labels_[row];
  const Eigen::Index h = width_;

  Eigen::VectorXd hidden(h);
  double s = w[4 * h];
  for (Eigen::Index j = 0; j < h; ++j) {
    hidden[j] = std::tanh(w[2 * j] * x0 + w[2 * j + 1] * x1 + w[2 * h + j]);
    s += w[3 * h + j] * hidden[j];
  }
  const double m = -y * s;
  const double dloss_ds = -y * sigmoid(m);

  grad.resize(dim());
  for (Eigen::Index j = 0; j < h; ++j) {
    const double dpre = dloss_ds * w[3 * h + j] * (1.0 - hidden[j] * hidden[j]);
    grad[2 * j] = dpre * x0;
    grad[2 * j + 1] = dpre * x1;
    grad[2 * h + j] = dpre;
    grad[3 * h + j] = dloss_ds * hidden[j];
  }
  grad[4 * h] = dloss_ds;
  return softplus(m);
}

double TwoMoonsMlp::loss(const ParamVector& w, std::size_t z) const {
  return softplus(-labels_[static_cast<Eigen::Index>(z)] * score(w, z));
}

std::optional<double> TwoMoonsMlp::accuracy(const ParamVector& w) const {
  std::size_t correct = 0;
  for (std::size_t z = 0; z < num_samples(); ++z) {
    correct += labels_[static_cast<Eigen::Index>(z)] * score(w, z) > 0.0 ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(num_samples());
}

ParamVector TwoMoonsMlp::initial_point(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::Index h = width_;
  ParamVector w = ParamVector::Zero(dim());
  for (Eigen::Index i = 0; i < 2 * h; ++i) {
    w[i] = normal(rng);
  }
  const double output_scale = 1.0 / std::sqrt(static_cast<double>(h));
  for (Eigen::Index j = 0; j < h; ++j) {
    w[3 * h + j] = output_scale * normal(rng);
  }
  return w;
}

std::vector<std::string> TwoMoonsMlp::sample_columns() const { return {"x0", "x1", "label"}; }

std::vector<double> TwoMoonsMlp::sample_row(std::size_t z) const {
  const auto row = static_cast<Eigen::Index>(z);
  return {points_(row, 0), points_(row, 1), labels_[row]};
}

// --- generators ------------------------------------------------------------

LeastSquaresObjective gen_interp_least_squares(std::size_t n, std::size_t p, std::uint64_t seed) {
  require_samples(n);
  if (p < n) {
    throw DomainError("interpolating least squares needs p >= n (got n=" + std::to_string(n) +
                      ", p=" + std::to_string(p) + ")");
  }
  std::mt19937_64 rng(seed);
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd features = gaussian_matrix(rows, cols, rng);
  ParamVector planted = gaussian_vector(cols, rng);
  Eigen::VectorXd targets(rows);
  // Same dot product as LeastSquaresObjective::residual, so l_z(w*) == 0.
  for (Eigen::Index i = 0; i < rows; ++i) {
    targets[i] = features.row(i).dot(planted);
  }
  return LeastSquaresObjective(std::move(features), std::move(targets), std::move(planted));
}

LogisticObjective gen_separable_logistic(std::size_t n, std::size_t p, double margin,
                                         std::uint64_t seed) {
  require_samples(n);
  if (p == 0) {
    throw DomainError("dimension must be positive");
  }
  if (!std::isfinite(margin) || !(margin > 0.0)) {
    throw DomainError("margin must be positive");
  }
  std::mt19937_64 rng(seed);
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(p);
  ParamVector direction = gaussian_vector(cols, rng);
  direction /= direction.norm();
  Eigen::MatrixXd features = gaussian_matrix(rows, cols, rng);
  Eigen::VectorXd labels(rows);
  std::bernoulli_distribution coin(0.5);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double s = features.row(i).dot(direction);
    const double y = s > 0.0 ? 1.0 : s < 0.0 ? -1.0 : (coin(rng) ? 1.0 : -1.0);
    if (std::abs(s) < margin) {
      // Push the point out along the normal until it clears the margin.
      features.row(i) += ((y * margin - s) * direction).transpose();
    }
    labels[i] = y;
  }
  return LogisticObjective(std::move(features), std::move(labels), std::move(direction));
}

TwoMoonsMlp gen_two_moons_mlp(std::size_t n, std::size_t hidden_width, double noise,
                              std::uint64_t seed) {
  require_samples(n);
  if (hidden_width < 2) {
    throw DomainError("hidden width must be at least 2");
  }
  if (!std::isfinite(noise) || noise < 0.0) {
    throw DomainError("noise must be non-negative");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::normal_distribution<double> jitter(0.0, 1.0);
  const auto rows = static_cast<Eigen::Index>(n);
  const Eigen::Index upper = (rows + 1) / 2;
  Eigen::MatrixX2d points(rows, 2);
  Eigen::VectorXd labels(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double theta = angle(rng);
    double x0 = 0.0;
    double x1 = 0.0;
    if (i < upper) {
      x0 = std::cos(theta);
      x1 = std::sin(theta);
      labels[i] = 1.0;
    } else {
      x0 = 1.0 - std::cos(theta);
      x1 = 0.5 - std::sin(theta);
      labels[i] = -1.0;
    }
    // Centre the pair of moons on the origin.
    points(i, 0) = x0 - 0.5 + noise * jitter(rng);
    points(i, 1) = x1 - 0.25 + noise * jitter(rng);
  }
  return TwoMoonsMlp(std::move(points), std::move(labels), static_cast<Eigen::Index>(hidden_width));
}

LeastSquaresObjective gen_noninterp_least_squares(std::size_t n, std::size_t p, double noise,
                                                  std::uint64_t seed) {
  require_samples(n);
  if (p == 0) {
    throw DomainError("dimension must be positive");
  }
  if (n <= p) {
    throw DomainError("non-interpolating least squares needs n > p (got n=" + std::to_string(n) +
                      ", p=" + std::to_string(p) + ")");
  }
  if (!std::isfinite(noise) || !(noise > 0.0)) {
    throw DomainError("noise must be positive");
  }
  std::mt19937_64 rng(seed);
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(p);
  Eigen::MatrixXd features = gaussian_matrix(rows, cols, rng);
  const ParamVector truth = gaussian_vector(cols, rng);
  Eigen::VectorXd targets = features * truth + noise * gaussian_vector(rows, rng);
  return LeastSquaresObjective(std::move(features), std::move(targets));
}

// --- specs -----------------------------------------------------------------

std::string_view problem_kind_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::InterpLeastSquares:
      return "interp_least_squares";
    case ProblemKind::SeparableLogistic:
      return "separable_logistic";
    case ProblemKind::TwoMoonsMlp:
      return "two_moons_mlp";
    case ProblemKind::NonInterpLeastSquares:
      return "noninterp_least_squares";
  }
  return "unknown";
}

std::optional<ProblemKind> parse_problem_kind(std::string_view name) {
  for (const auto kind : {ProblemKind::InterpLeastSquares, ProblemKind::SeparableLogistic,
                          ProblemKind::TwoMoonsMlp, ProblemKind::NonInterpLeastSquares}) {
    if (problem_kind_name(kind) == name) {
      return kind;
    }
  }
  return std::nullopt;
}

ProblemSpec default_problem_spec(ProblemKind kind) {
  ProblemSpec spec;
  spec.kind = kind;
  switch (kind) {
    case ProblemKind::InterpLeastSquares:
      spec.n = 20;
      spec.p = 50;
      break;
    case ProblemKind::SeparableLogistic:
      spec.n = 100;
      spec.p = 10;
      spec.margin = 0.1;
      break;
    case ProblemKind::TwoMoonsMlp:
      spec.n = 200;
      spec.width = 32;
      spec.noise = 0.1;
      break;
    case ProblemKind::NonInterpLeastSquares:
      spec.n = 100;
      spec.p = 10;
      spec.noise = 0.1;
      break;
  }
  return spec;
}

std::unique_ptr<StochasticObjective> make_objective(const ProblemSpec& spec) {
  switch (spec.kind) {
    case ProblemKind::InterpLeastSquares:
      return std::make_unique<LeastSquaresObjective>(
          gen_interp_least_squares(spec.n, spec.p, spec.seed));
    case ProblemKind::SeparableLogistic:
      return std::make_unique<LogisticObjective>(
          gen_separable_logistic(spec.n, spec.p, spec.margin, spec.seed));
    case ProblemKind::TwoMoonsMlp:
      return std::make_unique<TwoMoonsMlp>(
          gen_two_moons_mlp(spec.n, spec.width, spec.noise, spec.seed));
    case ProblemKind::NonInterpLeastSquares:
      return std::make_unique<LeastSquaresObjective>(
          gen_noninterp_least_squares(spec.n, spec.p, spec.noise, spec.seed));
  }
  throw DomainError("unknown problem kind");
}

// --- verification ----------------------------------------------------------

GradientCheckReport check_gradients(const StochasticObjective& objective, std::size_t trials,
                                    double h, double tol, std::uint64_t seed) {
  if (!(h > 0.0 && h <= 1e-3)) {
    throw DomainError("finite-difference step h must lie in (0, 1e-3]");
  }
  if (!(tol > 0.0)) {
    throw DomainError("tolerance must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, objective.num_samples() - 1);

  GradientCheckReport report;
  report.trials = trials;
  ParamVector analytic;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    ParamVector w = gaussian_vector(objective.dim(), rng);
    const std::size_t z = pick(rng);
    objective.evaluate(w, z, analytic);
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      const double saved = w[k];
      w[k] = saved + h;
      const double plus = objective.loss(w, z);
      w[k] = saved - h;
      const double minus = objective.loss(w, z);
      w[k] = saved;
      const double numeric = (plus - minus) / (2.0 * h);
      const double scale = std::max({1.0, std::abs(analytic[k]), std::abs(numeric)});
      const double error = std::abs(analytic[k] - numeric) / scale;
      report.max_relative_error = std::max(report.max_relative_error, error);
      if (!(error <= tol)) {
        report.passed = false;
        report.failures.push_back({trial, z, k, analytic[k], numeric, error});
      }
    }
  }
  return report;
}

void write_dataset_csv(const StochasticObjective& objective, std::ostream& out) {
  const auto columns = objective.sample_columns();
  for (std::size_t j = 0; j < columns.size(); ++j) {
    out << (j ? "," : "") << columns[j];
  }
  out << '\n';
  for (std::size_t z = 0; z < objective.num_samples(); ++z) {
    const auto row = objective.sample_row(z);
    for (std::size_t j = 0; j < row.size(); ++j) {
      out << (j ? "," : "") << internal::format_double(row[j]);
    }
    out << '\n';
  }
}

}  // namespace alig
