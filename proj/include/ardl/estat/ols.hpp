#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "ardl/estat/design.hpp"
#include "ardl/estat/dist.hpp"
#include "ardl/util/errors.hpp"

namespace ardl::estat {

/// Full least-squares fit. Coefficient order matches the design columns.
struct OlsFit {
  Eigen::VectorXd coef;
  Eigen::VectorXd std_error;
  Eigen::VectorXd t_values;
  Eigen::VectorXd p_values;
  Eigen::VectorXd residuals;
  Eigen::VectorXd fitted;
  Eigen::VectorXd leverage;  // diagonal of the hat matrix
  std::vector<std::string> names;
  double sigma2 = 0.0;       // RSS / (n - k)
  double rss = 0.0;
  double tss_centered = 0.0;
  double r2 = 0.0;
  double adj_r2 = 0.0;
  double f_stat = 0.0;       // overall F against the intercept-only model
  double f_pvalue = 1.0;
  double f_df1 = 0.0;
  double f_df2 = 0.0;
  double loglik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  long n = 0;
  long k = 0;
  long df_resid = 0;
  bool has_intercept = false;
  bool perfect_fit = false;
};

namespace detail {

/// Tolerance under which a diagonal entry of R counts as zero:
/// 1e-10 times the largest Euclidean column norm of X.
inline double rank_tolerance(const Eigen::MatrixXd& X) {
  double max_norm = 0.0;
  for (Eigen::Index j = 0; j < X.cols(); ++j)
    max_norm = std::max(max_norm, X.col(j).norm());
  return 1e-10 * max_norm;
}

}  // namespace detail

/// Ordinary least squares through column-pivoted Householder QR.
/// Rank deficiency raises EstimationError naming the first dependent column
/// (in pivot order). Requires n > k.
inline OlsFit ols_fit(const DesignMatrix& design) {
  design.validate();
  const Eigen::MatrixXd& X = design.X;
  const Eigen::VectorXd& y = design.y;
  const Eigen::Index n = X.rows();
  const Eigen::Index k = X.cols();
  if (k == 0) throw EstimationError("ols: empty design");
  if (n <= k)
    throw EstimationError("ols: " + std::to_string(n) + " rows cannot identify " +
                          std::to_string(k) + " coefficients");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  const Eigen::MatrixXd R =
      qr.matrixR().topLeftCorner(k, k).template triangularView<Eigen::Upper>();
  const double tol = detail::rank_tolerance(X);
  Eigen::Index rank = 0;
  for (Eigen::Index j = 0; j < k; ++j) {
    if (std::fabs(R(j, j)) > tol) ++rank;
  }
  if (rank < k) {
    // Pivoting sorts columns by decreasing norm of the remaining block, so
    // the column permuted into position `rank` is the first dependent one.
    const Eigen::Index offender = qr.colsPermutation().indices()(rank);
    throw EstimationError("ols: design is rank deficient, column '" +
                          design.names[static_cast<std::size_t>(offender)] +
                          "' is collinear with earlier columns");
  }

  OlsFit fit;
  fit.names = design.names;
  fit.n = static_cast<long>(n);
  fit.k = static_cast<long>(k);
  fit.df_resid = static_cast<long>(n - k);
  fit.has_intercept = design.intercept_col.has_value();

  fit.coef = qr.solve(y);
  fit.fitted = X * fit.coef;
  fit.residuals = y - fit.fitted;
  fit.rss = fit.residuals.squaredNorm();

  const double y_mean = y.mean();
  fit.tss_centered = (y.array() - y_mean).square().sum();

  // Leverage: rows of thin Q. householderQ applied to the first k identity
  // columns gives Q1 (n x k); pivoting does not change the column space.
  Eigen::MatrixXd q1 = Eigen::MatrixXd::Identity(n, k);
  q1 = qr.householderQ() * q1;
  fit.leverage = q1.array().square().rowwise().sum();

  fit.sigma2 = fit.rss / static_cast<double>(fit.df_resid);

  // (X'X)^-1 = R^-1 R^-T after undoing the pivot permutation.
  const Eigen::MatrixXd r_inv =
      R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
  Eigen::MatrixXd xtx_inv_perm = r_inv * r_inv.transpose();
  const auto& perm = qr.colsPermutation();
  Eigen::MatrixXd xtx_inv = perm * xtx_inv_perm * perm.transpose();

  fit.std_error.resize(k);
  fit.t_values.resize(k);
  fit.p_values.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    fit.std_error(j) = std::sqrt(fit.sigma2 * xtx_inv(j, j));
    if (fit.std_error(j) > 0.0) {
      fit.t_values(j) = fit.coef(j) / fit.std_error(j);
      fit.p_values(j) =
          2.0 * (1.0 - dist::t_cdf(std::fabs(fit.t_values(j)),
                                   static_cast<double>(fit.df_resid)));
    } else {
      fit.t_values(j) = std::numeric_limits<double>::infinity();
      fit.p_values(j) = 0.0;
    }
  }

  // A fit counts as numerically perfect when the residual sum of squares
  // vanishes relative to the centered variation in y.
  const double perfect_scale =
      (fit.tss_centered > 0.0) ? fit.tss_centered : 1.0;
  fit.perfect_fit = fit.rss < 1e-12 * perfect_scale;

  if (fit.tss_centered > 0.0) {
    fit.r2 = 1.0 - fit.rss / fit.tss_centered;
    const double adj_den = static_cast<double>(fit.df_resid);
    fit.adj_r2 = 1.0 - (fit.rss / adj_den) /
                           (fit.tss_centered / static_cast<double>(n - 1));
  } else {
    fit.r2 = 0.0;
    fit.adj_r2 = 0.0;
  }

  // Overall F: explained variation per slope over residual variation.
  const double slopes =
      fit.has_intercept ? static_cast<double>(k - 1) : static_cast<double>(k);
  fit.f_df1 = slopes;
  fit.f_df2 = static_cast<double>(fit.df_resid);
  if (slopes <= 0.0 || fit.tss_centered < 1e-12) {
    // Intercept-only design, or y carries no variation to explain.
    fit.f_stat = 0.0;
    fit.f_pvalue = 1.0;
  } else if (fit.perfect_fit) {
    fit.f_stat = std::numeric_limits<double>::infinity();
    fit.f_pvalue = 0.0;
  } else {
    const double explained =
        fit.has_intercept ? (fit.tss_centered - fit.rss) : (y.squaredNorm() - fit.rss);
    fit.f_stat = (explained / slopes) / fit.sigma2;
    if (fit.f_stat < 0.0) fit.f_stat = 0.0;
    fit.f_pvalue = 1.0 - dist::f_cdf(fit.f_stat, fit.f_df1, fit.f_df2);
  }

  // Gaussian log-likelihood at the MLE variance RSS/n.
  if (fit.rss > 0.0) {
    const double dn = static_cast<double>(n);
    fit.loglik = -0.5 * dn *
                 (std::log(2.0 * std::numbers::pi) + std::log(fit.rss / dn) + 1.0);
  } else {
    fit.loglik = std::numeric_limits<double>::infinity();
  }
  const double k_eff = static_cast<double>(k) + 1.0;  // + error variance
  fit.aic = 2.0 * k_eff - 2.0 * fit.loglik;
  fit.bic = k_eff * std::log(static_cast<double>(n)) - 2.0 * fit.loglik;
  return fit;
}

/// Wald F test that a subset of coefficients is jointly zero, computed as
/// ((RSS_r - RSS_u)/m) / (RSS_u/df_u) from the restricted and unrestricted
/// residual sums of squares. When both models fit perfectly the restriction
/// is vacuous: F is 0 and p is 1.
struct WaldF {
  double f = 0.0;
  double p_value = 1.0;
  double df1 = 0.0;
  double df2 = 0.0;
};

inline WaldF wald_f(double rss_unrestricted, double rss_restricted,
                    long df_unrestricted, long n_restrictions,
                    double tss_centered) {
  if (n_restrictions <= 0)
    throw std::invalid_argument("wald_f: need at least one restriction");
  if (df_unrestricted <= 0)
    throw EstimationError("wald_f: no residual degrees of freedom");
  WaldF out;
  out.df1 = static_cast<double>(n_restrictions);
  out.df2 = static_cast<double>(df_unrestricted);
  const double scale = (tss_centered > 0.0) ? tss_centered : 1.0;
  const bool both_perfect = rss_unrestricted < 1e-12 * scale &&
                            rss_restricted < 1e-12 * scale;
  if (both_perfect) {
    out.f = 0.0;
    out.p_value = 1.0;
    return out;
  }
  if (rss_unrestricted <= 0.0) {
    out.f = std::numeric_limits<double>::infinity();
    out.p_value = 0.0;
    return out;
  }
  double num = (rss_restricted - rss_unrestricted) / out.df1;
  if (num < 0.0) num = 0.0;  // numerical noise when the restriction binds weakly
  out.f = num / (rss_unrestricted / out.df2);
  out.p_value = 1.0 - dist::f_cdf(out.f, out.df1, out.df2);
  return out;
}

}  // namespace ardl::estat
