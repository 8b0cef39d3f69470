#include "ddf/special_functions.hpp"

#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace ddf {

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::domain_error("regularized_gamma_p needs a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  return boost::math::gamma_p(a, x);
}

double erlang_cdf(double x, double terms) {
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(terms, x);
}

}  // namespace ddf
