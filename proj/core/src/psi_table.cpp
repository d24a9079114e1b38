#include "ssgp/psi_table.hpp"

#include <cmath>
#include <deque>
#include <mutex>
#include <numbers>

#include "ssgp/covariance.hpp"
#include "ssgp/errors.hpp"
#include "ssgp/parallel.hpp"

namespace ssgp {

PsiTable::PsiTable(const ModelParams& params, int degree, double panel_width, double log_range)
    : params_(ModelParams::make(params.hurst, params.gamma)), degree_(degree), range_(log_range) {
  if (degree < 2 || !(panel_width > 0.0) || !(log_range > 0.0)) {
    throw DomainError("PsiTable: invalid layout");
  }
  panels_ = static_cast<int>(std::ceil(2.0 * range_ / panel_width));
  width_ = 2.0 * range_ / panels_;
  const int m = degree_ + 1;
  std::vector<double> values(static_cast<std::size_t>(panels_) * m);
  parallel_for(values.size(), [&](std::size_t idx) {
    const int panel = static_cast<int>(idx / m);
    const int i = static_cast<int>(idx % m);
    const double mid = -range_ + (panel + 0.5) * width_;
    const double node = std::cos(std::numbers::pi * (i + 0.5) / m);
    const double v = psi(params_, std::exp(mid + 0.5 * width_ * node));
    if (!(v < 0.0)) throw AccuracyError("psi is expected to be negative", v, 0.0);
    values[idx] = std::log(-v);
  });
  coeffs_.assign(values.size(), 0.0);
  for (int panel = 0; panel < panels_; ++panel) {
    for (int k = 0; k < m; ++k) {
      double acc = 0.0;
      for (int i = 0; i < m; ++i) {
        acc += values[panel * m + i] * std::cos(std::numbers::pi * k * (i + 0.5) / m);
      }
      coeffs_[panel * m + k] = (k == 0 ? 1.0 : 2.0) * acc / m;
    }
  }
}

double PsiTable::operator()(double x) const {
  if (x == 0.0) return 0.0;
  const double u = std::log(x);
  if (!(std::abs(u) < range_)) return psi(params_, x);
  int panel = static_cast<int>((u + range_) / width_);
  if (panel >= panels_) panel = panels_ - 1;
  const double mid = -range_ + (panel + 0.5) * width_;
  const double z = (u - mid) / (0.5 * width_);
  const double* c = &coeffs_[static_cast<std::size_t>(panel) * (degree_ + 1)];
  double b1 = 0.0, b2 = 0.0;
  for (int k = degree_; k >= 1; --k) {
    const double b0 = 2.0 * z * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return -std::exp(z * b1 - b2 + c[0]);
}

std::shared_ptr<const PsiTable> psi_table_for(const ModelParams& params) {
  static std::mutex mutex;
  static std::deque<std::shared_ptr<const PsiTable>> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    for (const auto& t : cache) {
      if (t->params().hurst == params.hurst && t->params().gamma == params.gamma) return t;
    }
  }
  auto table = std::make_shared<const PsiTable>(params);
  std::lock_guard<std::mutex> lock(mutex);
  cache.push_front(table);
  if (cache.size() > 8) cache.pop_back();
  return table;
}

}  // namespace ssgp
