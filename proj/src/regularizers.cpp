#include "uar/regularizers.hpp"

#include <cmath>
#include <stdexcept>

namespace uar {

namespace {

void check_input(const Map2& m, const RegularizerSpec& spec) {
  if (m.rows < 1 || m.cols < 1) throw std::invalid_argument("penalty: empty map");
  if (!all_finite(m.v)) throw std::domain_error("penalty: map must be finite");
  if (!(spec.epsilon >= 0.0) || !std::isfinite(spec.epsilon))
    throw std::domain_error("penalty: epsilon must be finite and >= 0");
}

inline double fwd_dx(const Map2& m, int r, int c) {
  return (c + 1 < m.cols) ? m.at(r, c + 1) - m.at(r, c) : 0.0;
}
inline double fwd_dy(const Map2& m, int r, int c) {
  return (r + 1 < m.rows) ? m.at(r + 1, c) - m.at(r, c) : 0.0;
}
inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

RegKind reg_kind_from_string(const std::string& s) {
  if (s == "tv_iso") return RegKind::kTvIso;
  if (s == "grad_l2sq") return RegKind::kGradL2Sq;
  if (s == "tv_aniso") return RegKind::kTvAniso;
  throw std::invalid_argument("unknown regularizer kind: " + s);
}

std::string to_string(RegKind kind) {
  switch (kind) {
    case RegKind::kTvIso: return "tv_iso";
    case RegKind::kGradL2Sq: return "grad_l2sq";
    case RegKind::kTvAniso: return "tv_aniso";
  }
  throw std::logic_error("bad RegKind");
}

double penalty(const Map2& beta_map, const RegularizerSpec& spec) {
  check_input(beta_map, spec);
  const double eps2 = spec.epsilon * spec.epsilon;
  double total = 0.0;
  for (int r = 0; r < beta_map.rows; ++r)
    for (int c = 0; c < beta_map.cols; ++c) {
      const double dx = fwd_dx(beta_map, r, c);
      const double dy = fwd_dy(beta_map, r, c);
      switch (spec.kind) {
        case RegKind::kTvIso: total += std::sqrt(eps2 + dx * dx + dy * dy); break;
        case RegKind::kGradL2Sq: total += dx * dx + dy * dy; break;
        case RegKind::kTvAniso: total += std::abs(dx) + std::abs(dy); break;
      }
    }
  return total;
}

Map2 penalty_gradient(const Map2& beta_map, const RegularizerSpec& spec) {
  check_input(beta_map, spec);
  const double eps2 = spec.epsilon * spec.epsilon;
  Map2 grad(beta_map.rows, beta_map.cols, 0.0);

  // Each pixel's term depends on m(r,c), m(r,c+1), m(r+1,c); scatter the
  // three partials of that term.
  for (int r = 0; r < beta_map.rows; ++r)
    for (int c = 0; c < beta_map.cols; ++c) {
      const bool has_dx = c + 1 < beta_map.cols;
      const bool has_dy = r + 1 < beta_map.rows;
      const double dx = has_dx ? beta_map.at(r, c + 1) - beta_map.at(r, c) : 0.0;
      const double dy = has_dy ? beta_map.at(r + 1, c) - beta_map.at(r, c) : 0.0;

      double gx = 0.0, gy = 0.0;  // d(term)/d(dx), d(term)/d(dy)
      switch (spec.kind) {
        case RegKind::kTvIso: {
          const double s = std::sqrt(eps2 + dx * dx + dy * dy);
          if (s > 0.0) {
            gx = dx / s;
            gy = dy / s;
          }
          break;
        }
        case RegKind::kGradL2Sq:
          gx = 2.0 * dx;
          gy = 2.0 * dy;
          break;
        case RegKind::kTvAniso:
          gx = sgn(dx);
          gy = sgn(dy);
          break;
      }
      if (has_dx) {
        grad.at(r, c) -= gx;
        grad.at(r, c + 1) += gx;
      }
      if (has_dy) {
        grad.at(r, c) -= gy;
        grad.at(r + 1, c) += gy;
      }
    }
  return grad;
}

bool regularizer_active(int epoch, int activation_epoch) {
  if (epoch < 0) throw std::domain_error("regularizer_active: epoch must be >= 0");
  return epoch >= activation_epoch;
}

}  // namespace uar
