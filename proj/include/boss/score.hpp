#ifndef BOSS_SCORE_HPP
#define BOSS_SCORE_HPP

#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "boss/common.hpp"
#include "boss/graph.hpp"

namespace boss {

/// A decomposable local score: higher is better, deterministic in its inputs.
/// `parents` is always passed sorted ascending.
template <class S>
concept LocalScore = requires(const S& s, Var v, std::span<const Var> parents) {
  { s.num_vars() } -> std::convertible_to<std::size_t>;
  { s.local(v, parents) } -> std::convertible_to<double>;
};

/// Sample size plus p x p covariance with the 1/n denominator.
class CovarianceModel {
 public:
  CovarianceModel(std::size_t n, Eigen::MatrixXd cov) : n_(n), cov_(std::move(cov)) {
    if (n_ < 2) throw InvalidArgument("covariance model needs n >= 2");
    if (cov_.rows() < 1 || cov_.rows() != cov_.cols()) throw InvalidArgument("covariance must be square, p >= 1");
    if (!cov_.allFinite()) throw DataError("covariance has non-finite entries");
    for (Eigen::Index i = 0; i < cov_.rows(); ++i) {
      for (Eigen::Index j = 0; j < i; ++j) {
        if (cov_(i, j) != cov_(j, i)) throw InvalidArgument("covariance is not symmetric");
      }
    }
  }

  std::size_t n() const { return n_; }
  std::size_t p() const { return static_cast<std::size_t>(cov_.rows()); }
  const Eigen::MatrixXd& cov() const { return cov_; }
  double operator()(Var i, Var j) const { return cov_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }

 private:
  std::size_t n_;
  Eigen::MatrixXd cov_;
};

/// Covariance of an n x p data matrix (rows are samples).
inline CovarianceModel covariance_from_data(const Eigen::MatrixXd& data) {
  const auto n = data.rows();
  if (n < 2) throw DataError("need at least 2 samples");
  if (data.cols() < 1) throw DataError("need at least 1 variable");
  if (!data.allFinite()) throw DataError("data contains non-finite values");
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    if (data.col(j).minCoeff() == data.col(j).maxCoeff()) {
      throw DataError("column " + std::to_string(j) + " is constant");
    }
  }
  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Eigen::MatrixXd centered = data.rowwise() - mean;
  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n);
  // Exact symmetry regardless of how the product was blocked.
  cov = ((cov + cov.transpose()) * 0.5).eval();
  return CovarianceModel(static_cast<std::size_t>(n), std::move(cov));
}

/// Residual variance of v regressed on W, from the covariance summary.
/// Cholesky of cov[W, W] with pivot tolerance 1e-10 * max diagonal. The
/// residual is the next pivot of cov[W + v, W + v] and must exceed
/// 1e-10 * cov[v, v].
inline double residual_variance(const CovarianceModel& model, Var v, std::span<const Var> parents) {
  const std::size_t k = parents.size();
  const std::size_t p = model.p();
  if (v >= p) throw InvalidArgument("variable index out of range");
  for (Var w : parents) {
    if (w >= p) throw InvalidArgument("parent index out of range");
    if (w == v) throw InvalidArgument("variable cannot be its own parent");
  }
  const double cvv = model(v, v);
  if (!(cvv > 0.0)) throw DegenerateParentSet("variable has zero variance");
  if (k == 0) return cvv;

  std::vector<double> chol(k * k, 0.0);
  std::vector<double> rhs(k);
  double max_diag = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    max_diag = std::max(max_diag, model(parents[i], parents[i]));
    rhs[i] = model(parents[i], v);
  }
  const double tol = 1e-10 * max_diag;

  for (std::size_t j = 0; j < k; ++j) {
    double d = model(parents[j], parents[j]);
    for (std::size_t m = 0; m < j; ++m) d -= chol[j * k + m] * chol[j * k + m];
    if (!(d > tol)) throw DegenerateParentSet("degenerate parent set");
    const double ljj = std::sqrt(d);
    chol[j * k + j] = ljj;
    for (std::size_t i = j + 1; i < k; ++i) {
      double s = model(parents[i], parents[j]);
      for (std::size_t m = 0; m < j; ++m) s -= chol[i * k + m] * chol[j * k + m];
      chol[i * k + j] = s / ljj;
    }
  }

  // Forward solve L y = cov[W, v]; explained variance is |y|^2.
  double explained = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double s = rhs[i];
    for (std::size_t m = 0; m < i; ++m) s -= chol[i * k + m] * rhs[m];
    rhs[i] = s / chol[i * k + i];
    explained += rhs[i] * rhs[i];
  }
  const double resid = cvv - explained;
  if (!(resid > 1e-10 * cvv) || !std::isfinite(resid)) throw DegenerateParentSet("non-positive residual variance");
  return resid;
}

/// Linear-Gaussian BIC with penalty discount lambda. Constants that do not
/// depend on (v, W) are dropped.
class BicScore {
 public:
  explicit BicScore(CovarianceModel model, double penalty_discount = 2.0)
      : model_(std::move(model)), lambda_(penalty_discount), log_n_(std::log(static_cast<double>(model_.n()))) {
    if (!(lambda_ > 0.0)) throw InvalidArgument("penalty discount must be positive");
  }

  std::size_t num_vars() const { return model_.p(); }
  double penalty_discount() const { return lambda_; }
  const CovarianceModel& model() const { return model_; }

  double local(Var v, std::span<const Var> parents) const {
    const double n = static_cast<double>(model_.n());
    const double resid = residual_variance(model_, v, parents);
    return -0.5 * n * std::log(resid) - 0.5 * lambda_ * static_cast<double>(parents.size() + 1) * log_n_;
  }

 private:
  CovarianceModel model_;
  double lambda_;
  double log_n_;
};

static_assert(LocalScore<BicScore>);

/// Forwards to another score and counts evaluations.
template <LocalScore S>
class CountingScore {
 public:
  explicit CountingScore(const S& inner) : inner_(&inner) {}
  std::size_t num_vars() const { return inner_->num_vars(); }
  double local(Var v, std::span<const Var> parents) const {
    ++calls_;
    return inner_->local(v, parents);
  }
  std::size_t calls() const { return calls_; }

 private:
  const S* inner_;
  mutable std::size_t calls_ = 0;
};

/// Sum of local scores over all variables given their parents in g.
template <LocalScore S>
double score_dag(const S& score, const Dag& g) {
  if (g.num_vars() != score.num_vars()) throw InvalidArgument("graph and score disagree on variable count");
  if (!is_acyclic(g)) throw InvalidArgument("graph has a directed cycle");
  double total = 0.0;
  for (Var v = 0; v < g.num_vars(); ++v) {
    const VarSet pa = g.parent_set(v);
    total += score.local(v, pa);
  }
  return total;
}

}  // namespace boss

#endif  // BOSS_SCORE_HPP
