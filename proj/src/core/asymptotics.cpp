#include "asymptotics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace margadj {

CovarianceMatrix::CovarianceMatrix(RealMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) throw ContractError("covariance matrix must be square");
}

double CovarianceMatrix::min_eigenvalue() const {
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      m(k, l) = entries_(static_cast<std::size_t>(k), static_cast<std::size_t>(l));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double CovarianceMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < dim(); ++k) {
    for (std::size_t l = k + 1; l < dim(); ++l) worst = std::max(worst, std::abs(entries_(k, l) - entries_(l, k)));
  }
  return worst;
}

double CovarianceMatrix::max_abs_row_sum() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < dim(); ++k) {
    double s = 0.0;
    for (double x : entries_.row(k)) s += x;
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

double CovarianceMatrix::max_abs_entry() const {
  double worst = 0.0;
  for (double x : entries_.values()) worst = std::max(worst, std::abs(x));
  return worst;
}

double CovarianceMatrix::quadratic_form(std::span<const double> c) const {
  if (c.size() != dim()) throw ContractError("quadratic form: vector length does not match the matrix");
  double q = 0.0;
  for (std::size_t k = 0; k < dim(); ++k) {
    for (std::size_t l = 0; l < dim(); ++l) q += c[k] * entries_(k, l) * c[l];
  }
  return q;
}

CovarianceMatrix operator-(const CovarianceMatrix& a, const CovarianceMatrix& b) {
  if (a.dim() != b.dim()) throw ContractError("covariance difference: dimension mismatch");
  RealMatrix d(a.dim(), a.dim());
  for (std::size_t k = 0; k < a.dim(); ++k) {
    for (std::size_t l = 0; l < a.dim(); ++l) d(k, l) = a(k, l) - b(k, l);
  }
  return CovarianceMatrix(std::move(d));
}

CovarianceMatrix sigma_univariate(std::span<const double> p) {
  RealMatrix s(p.size(), p.size());
  for (std::size_t r = 0; r < p.size(); ++r) {
    for (std::size_t q = 0; q < p.size(); ++q) s(r, q) = r == q ? p[r] * (1.0 - p[r]) : -p[r] * p[q];
  }
  return CovarianceMatrix(std::move(s));
}

CovarianceMatrix sigma_marginal(const JointDistribution& p) { return sigma_univariate(row_marginal(p).probs()); }

namespace {

std::vector<double> positive_column_marginal(const JointDistribution& p) {
  auto col = column_sums(p.cells());
  for (std::size_t j = 0; j < col.size(); ++j) {
    if (!(col[j] > 0.0)) throw ContractError("column marginal " + std::to_string(j + 1) + " is zero");
  }
  return col;
}

}  // namespace

CovarianceMatrix gamma_adjusted(const JointDistribution& p) {
  const auto col = positive_column_marginal(p);
  const auto row = row_sums(p.cells());
  const std::size_t dim = p.rows();
  RealMatrix g(dim, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t l = 0; l < dim; ++l) {
      double s = 0.0;
      for (std::size_t j = 0; j < p.cols(); ++j) s += p(k, j) * p(l, j) / col[j];
      g(k, l) = (k == l ? row[k] : 0.0) - s;
    }
  }
  return CovarianceMatrix(std::move(g));
}

CovarianceMatrix conditional_cov_oracle(const JointDistribution& p) {
  const auto col = positive_column_marginal(p);
  const std::size_t dim = p.rows();
  RealMatrix out(dim, dim, 0.0);
  std::vector<double> cond(dim);
  for (std::size_t j = 0; j < p.cols(); ++j) {
    for (std::size_t i = 0; i < dim; ++i) cond[i] = p(i, j) / col[j];
    for (std::size_t k = 0; k < dim; ++k) {
      for (std::size_t l = 0; l < dim; ++l) {
        // E[1{X=k} 1{X=l} | Y=j] enumerated over outcomes X = i
        double joint = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
          if (i == k && i == l) joint += cond[i];
        }
        out(k, l) += col[j] * (joint - cond[k] * cond[l]);
      }
    }
  }
  return CovarianceMatrix(std::move(out));
}

VarianceGap variance_gap_quadratic(const JointDistribution& p, std::span<const double> c) {
  if (c.size() != p.rows()) throw ContractError("variance gap: vector length does not match the number of rows");
  const double gap = (sigma_marginal(p) - gamma_adjusted(p)).quadratic_form(c);

  const auto col = positive_column_marginal(p);
  std::vector<double> cond_mean(p.cols(), 0.0);
  for (std::size_t j = 0; j < p.cols(); ++j) {
    for (std::size_t i = 0; i < p.rows(); ++i) cond_mean[j] += c[i] * p(i, j) / col[j];
  }
  double mean = 0.0;
  for (std::size_t j = 0; j < p.cols(); ++j) mean += col[j] * cond_mean[j];
  double var = 0.0;
  for (std::size_t j = 0; j < p.cols(); ++j) var += col[j] * (cond_mean[j] - mean) * (cond_mean[j] - mean);
  return {gap, var};
}

double chi2_reduction_bound(const JointDistribution& p) {
  const auto row = row_sums(p.cells());
  const auto col = column_sums(p.cells());
  for (double r : row) {
    if (!(r > 0.0)) throw ContractError("chi-square bound: zero row marginal");
  }
  for (double c : col) {
    if (!(c > 0.0)) throw ContractError("chi-square bound: zero column marginal");
  }
  double chi2 = 0.0;
  for (std::size_t i = 0; i < p.rows(); ++i) {
    for (std::size_t j = 0; j < p.cols(); ++j) {
      const double e = row[i] * col[j];
      chi2 += (p(i, j) - e) * (p(i, j) - e) / e;
    }
  }
  return chi2;
}

double effective_sample_factor(const WeightVector& w) {
  double s = 0.0;
  for (double x : w.weights()) s += x * x;
  return s;
}

}  // namespace margadj
