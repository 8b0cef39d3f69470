#include "ddf/dmt.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace ddf {

namespace {

void check_r(double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("multiplexing gain must lie in [0, 1]");
}

void check_slot(int m, int num_slots) {
  if (num_slots < 1 || m < 1 || m > num_slots) throw std::invalid_argument("decision slot out of range");
}

}  // namespace

DmtValue dmt_infinite(double r) {
  check_r(r);
  if (r <= 0.5) return 2.0 * (1.0 - r);
  return (1.0 - r) / r;
}

DmtValue tx_div_bound(double r) {
  check_r(r);
  return 2.0 * (1.0 - r);
}

DmtValue d_bar(int m, double r, int num_slots) {
  check_r(r);
  check_slot(m, num_slots);
  const double big_m = num_slots;
  if (m == num_slots) {
    if (r > (big_m - 1.0) / big_m) return 0.0;
    // At r = 0 the ratio Mr/(M-1) is read as 0, also for M = 1.
    const double ratio = r == 0.0 ? 0.0 : big_m * r / (big_m - 1.0);
    return 1.0 - ratio;
  }
  if (m >= 2 && r <= (m - 1.0) / big_m) return 1.0 - big_m * r / (m - 1.0);
  if (r <= m / big_m) return 0.0;
  return kInfiniteDiversity;
}

DmtValue d_m_exponent(int m, double r, int num_slots) {
  check_r(r);
  check_slot(m, num_slots);
  const double big_m = num_slots;
  if (m < big_m / 2.0) return 2.0 - 2.0 * r;
  if (r >= 0.5 || m >= big_m * (1.0 - r)) return big_m * (1.0 - r) / m;
  return 2.0 - r * big_m / (big_m - m);
}

DmtValue dmt_finite(double r, int num_slots) {
  check_r(r);
  if (num_slots < 1) throw std::invalid_argument("slot count must be positive");
  DmtValue best = kInfiniteDiversity;
  for (int m = 1; m <= num_slots; ++m)
    best = std::min(best, d_bar(m, r, num_slots) + d_m_exponent(m, r, num_slots));
  return best;
}

double pareto_step(double previous, double last) {
  return (1.0 - previous) / (2.0 - (1.0 + 1.0 / last) * previous);
}

namespace {

// Forward recursion for a trial f_N; empty when the sequence leaves (0, 1) or
// fails to increase.
std::vector<double> pareto_sequence(int n, double last) {
  std::vector<double> f{0.5};
  for (int j = 1; j < n; ++j) {
    const double denom = 2.0 - (1.0 + 1.0 / last) * f.back();
    if (!(denom > 0.0)) return {};
    const double next = (1.0 - f.back()) / denom;
    if (!(next > f.back() && next < 1.0)) return {};
    f.push_back(next);
  }
  return f;
}

}  // namespace

std::vector<double> pareto_fractions(int n) {
  if (n < 1) throw std::invalid_argument("number of decision times must be positive");
  if (n == 1) return {0.5};

  // Residual of the self-consistency condition f_N(last) = last. The valid
  // root is the one producing an increasing sequence inside (0, 1).
  auto residual = [n](double last) {
    const auto f = pareto_sequence(n, last);
    return f.empty() ? std::nan("") : f.back() - last;
  };

  const int grid = 20000;
  double lo = 0.5 + 1e-12;
  double flo = residual(lo);
  for (int i = 1; i <= grid; ++i) {
    const double hi = 0.5 + 0.5 * i / grid - (i == grid ? 1e-12 : 0.0);
    const double fhi = residual(hi);
    if (std::isfinite(flo) && std::isfinite(fhi) && (flo == 0.0 || (flo < 0.0) != (fhi < 0.0))) {
      double a = lo, b = hi, fa = flo;
      if (fa == 0.0) return pareto_sequence(n, a);
      for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = residual(mid);
        if (!std::isfinite(fm)) break;
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      const double root = 0.5 * (a + b);
      const auto f = pareto_sequence(n, root);
      if (!f.empty() && std::abs(f.back() - root) < 1e-9) return f;
    }
    lo = hi;
    flo = fhi;
  }
  throw std::runtime_error("pareto fraction root could not be bracketed");
}

DmtValue pareto_dmt(double r, int n) {
  check_r(r);
  const double last = pareto_fractions(n).back();
  return 1.0 - r + std::max(0.0, 1.0 - r / last);
}

void write_dmt_csv(std::ostream& os, const std::vector<DmtPoint>& points) {
  const auto old = os.precision(12);
  os << "r,d,order,variant\n";
  for (const auto& p : points) {
    os << p.r << ',';
    if (std::isinf(p.d))
      os << "inf";
    else
      os << p.d;
    os << ',' << p.order << ',' << p.variant << '\n';
  }
  os.precision(old);
}

}  // namespace ddf
