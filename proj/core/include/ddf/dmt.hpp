#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace ddf {

/// Diversity exponent. +infinity marks "faster than any polynomial"; it
/// absorbs under addition and never wins a minimum.
using DmtValue = double;
inline constexpr DmtValue kInfiniteDiversity = std::numeric_limits<double>::infinity();

/// Optimal tradeoff of the protocol with unbounded slot count.
DmtValue dmt_infinite(double r);
/// 2(1 - r).
DmtValue tx_div_bound(double r);

/// Exponent of P(decision time = m).
DmtValue d_bar(int m, double r, int num_slots);
/// Outage exponent of the m-switch channel.
DmtValue d_m_exponent(int m, double r, int num_slots);
/// min over m of d_bar + d_m.
DmtValue dmt_finite(double r, int num_slots);

/// Decision-time fractions f_1 < ... < f_N with f_1 = 1/2. The recursion is
/// implicit in f_N, which is found by root bracketing on (1/2, 1).
std::vector<double> pareto_fractions(int n);
/// Right-hand side of the fraction recursion given f_{j-1} and f_N.
double pareto_step(double previous, double last);
DmtValue pareto_dmt(double r, int n);

struct DmtPoint {
  double r;
  DmtValue d;
  int order;  // M or N
  std::string variant;
};

/// CSV with header "r,d,order,variant"; infinite values print as "inf".
void write_dmt_csv(std::ostream& os, const std::vector<DmtPoint>& points);

}  // namespace ddf
