#pragma once

#include <memory>
#include <vector>

#include "ssgp/analytic.hpp"

namespace ssgp {

/// Piecewise Chebyshev interpolant of log(-psi(e^u)) on |u| <= log_range.
/// Outside the range psi is evaluated directly.
class PsiTable {
 public:
  explicit PsiTable(const ModelParams& params, int degree = 24, double panel_width = 0.5,
                    double log_range = 13.0 * 0.6931471805599453);

  double operator()(double x) const;
  const ModelParams& params() const noexcept { return params_; }
  double log_range() const noexcept { return range_; }

 private:
  ModelParams params_;
  int degree_;
  int panels_;
  double range_;
  double width_;
  std::vector<double> coeffs_;  // panels_ x (degree_ + 1)
};

/// Shared table for the given parameters; recently used tables are cached.
std::shared_ptr<const PsiTable> psi_table_for(const ModelParams& params);

}  // namespace ssgp
