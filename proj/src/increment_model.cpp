#include "lyihdp/increment_model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lyihdp {

namespace {

constexpr double kCovEigenFloor = 1e-12;

bool all_finite(const IncrementalModel& m) {
  return std::isfinite(m.f_hat) && std::isfinite(m.g_hat) &&
         std::isfinite(m.cov[0]) && std::isfinite(m.cov[1]) &&
         std::isfinite(m.cov[2]) && std::isfinite(m.cov[3]);
}

[[noreturn]] void throw_with_state(const char* what, const IncrementalModel& m) {
  std::ostringstream os;
  os << what << " (f_hat=" << m.f_hat << ", g_hat=" << m.g_hat
     << ", cov=[" << m.cov[0] << ", " << m.cov[1] << "; " << m.cov[2] << ", "
     << m.cov[3] << "])";
  throw std::runtime_error(os.str());
}

} // namespace

double IncrementalModel::min_cov_eigenvalue() const {
  const double a = cov[0], b = cov[1], c = cov[3];
  const double disc = std::sqrt((a - c) * (a - c) + 4.0 * b * b);
  return 0.5 * (a + c - disc);
}

IncrementalModel make_incremental_model(double forgetting, double init_cov,
                                        double g_init) {
  if (!(forgetting > 0.0 && forgetting <= 1.0)) {
    throw std::invalid_argument("forgetting factor must be in (0, 1]");
  }
  if (!(init_cov > 0.0)) {
    throw std::invalid_argument("initial covariance must be > 0");
  }
  IncrementalModel m;
  m.forgetting = forgetting;
  m.init_cov = init_cov;
  m.cov = {init_cov, 0.0, 0.0, init_cov};
  m.g_hat = g_init;
  return m;
}

double im_predict(const IncrementalModel& m, double x_t, double x_prev,
                  double u_t, double u_prev) {
  if (!std::isfinite(x_t) || !std::isfinite(x_prev) || !std::isfinite(u_t) ||
      !std::isfinite(u_prev)) {
    throw std::invalid_argument("im_predict: non-finite input");
  }
  return x_t + m.f_hat * (x_t - x_prev) + m.g_hat * (u_t - u_prev);
}

IncrementalModel im_update(IncrementalModel m, double x_next_observed,
                           double x_t, double x_prev, double u_t,
                           double u_prev) {
  if (!std::isfinite(x_next_observed) || !std::isfinite(x_t) ||
      !std::isfinite(x_prev) || !std::isfinite(u_t) || !std::isfinite(u_prev)) {
    throw std::invalid_argument("im_update: non-finite input");
  }
  if (!all_finite(m)) throw_with_state("im_update: non-finite model state", m);

  const double w0 = x_t - x_prev;          // state increment regressor
  const double w1 = u_t - u_prev;          // input increment regressor
  const double target = x_next_observed - x_t;
  const double lam = m.forgetting;

  // P*w and the gain denominator.
  const double pw0 = m.cov[0] * w0 + m.cov[1] * w1;
  const double pw1 = m.cov[2] * w0 + m.cov[3] * w1;
  const double denom = lam + w0 * pw0 + w1 * pw1;
  if (!std::isfinite(denom) || denom <= 0.0) {
    throw_with_state("im_update: singular covariance", m);
  }
  const double k0 = pw0 / denom;
  const double k1 = pw1 / denom;

  // A-priori residual.
  const double residual = target - (m.f_hat * w0 + m.g_hat * w1);
  m.f_hat += k0 * residual;
  m.g_hat += k1 * residual;

  // P <- (P - k (P w)^T) / lambda, then re-symmetrize.
  double p00 = (m.cov[0] - k0 * pw0) / lam;
  double p01 = (m.cov[1] - k0 * pw1) / lam;
  double p10 = (m.cov[2] - k1 * pw0) / lam;
  double p11 = (m.cov[3] - k1 * pw1) / lam;
  const double off = 0.5 * (p01 + p10);
  m.cov = {p00, off, off, p11};

  if (!all_finite(m)) throw_with_state("im_update: update produced NaN", m);
  if (m.min_cov_eigenvalue() < kCovEigenFloor) {
    m.cov = {m.init_cov, 0.0, 0.0, m.init_cov};
    ++m.cov_resets;
  }

  m.last_x = x_next_observed;
  m.last_u = u_t;
  return m;
}

} // namespace lyihdp
