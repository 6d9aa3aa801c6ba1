#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ardl::estat {

/// Dense regression design. Column names travel with the matrix so that
/// rank-deficiency errors and coefficient tables can name columns.
struct DesignMatrix {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::string> names;              // one per column of X
  std::optional<int> intercept_col;            // column index if present

  [[nodiscard]] Eigen::Index n() const { return X.rows(); }
  [[nodiscard]] Eigen::Index k() const { return X.cols(); }

  void validate() const {
    if (X.rows() != y.size())
      throw std::invalid_argument("design: row count mismatch between X and y");
    if (static_cast<Eigen::Index>(names.size()) != X.cols())
      throw std::invalid_argument("design: name count != column count");
    if (intercept_col && (*intercept_col < 0 || *intercept_col >= X.cols()))
      throw std::invalid_argument("design: intercept column out of range");
  }
};

/// Append a named column. Convenience for incremental design construction.
inline void append_column(DesignMatrix& d, const Eigen::VectorXd& col,
                          const std::string& name) {
  if (d.X.cols() == 0) {
    d.X.resize(col.size(), 1);
    d.X.col(0) = col;
  } else {
    if (col.size() != d.X.rows())
      throw std::invalid_argument("append_column: length mismatch");
    d.X.conservativeResize(Eigen::NoChange, d.X.cols() + 1);
    d.X.col(d.X.cols() - 1) = col;
  }
  d.names.push_back(name);
}

}  // namespace ardl::estat
