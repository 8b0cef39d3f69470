#include "ddf/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ddf {

namespace {

struct Triangular {
  Eigen::MatrixXd r;
  Eigen::VectorXd qty;
};

Triangular factor(const Eigen::MatrixXd& basis, const Eigen::VectorXd& target) {
  const auto n = basis.cols();
  if (basis.rows() != target.size())
    throw std::invalid_argument("target dimension does not match basis rows");
  if (n == 0 || basis.rows() < n) throw std::invalid_argument("rank-deficient lattice basis");
  if (!basis.allFinite() || !target.allFinite())
    throw std::invalid_argument("non-finite lattice search input");

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  Triangular t;
  t.r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  t.qty = (qr.householderQ().transpose() * target).head(n);

  const double scale = t.r.diagonal().cwiseAbs().maxCoeff();
  const double floor = t.r.diagonal().cwiseAbs().minCoeff();
  if (!(scale > 0.0) || floor <= 1e-12 * scale)
    throw std::invalid_argument("rank-deficient lattice basis");
  return t;
}

// Per-level zig-zag state: candidates are produced in nondecreasing distance
// from the level's centre, clipped to the box.
struct LevelState {
  double center = 0.0;
  long up = 0;
  long down = 0;
  bool up_open = false;
  bool down_open = false;
};

template <class Visitor>
SearchStatus enumerate(const Triangular& t, const std::optional<IntegerBox>& box,
                       long node_limit, long& nodes, Visitor& visit) {
  const int n = static_cast<int>(t.r.cols());
  if (box && (static_cast<int>(box->lower.size()) != n || static_cast<int>(box->upper.size()) != n))
    throw std::invalid_argument("box dimension does not match basis");

  const long lo_inf = std::numeric_limits<long>::min() / 4;
  const long hi_inf = std::numeric_limits<long>::max() / 4;
  auto lower = [&](int i) { return box ? box->lower[i] : lo_inf; };
  auto upper = [&](int i) { return box ? box->upper[i] : hi_inf; };
  if (box)
    for (int i = 0; i < n; ++i)
      if (box->lower[i] > box->upper[i]) return SearchStatus::kIncomplete;

  std::vector<LevelState> state(n);
  std::vector<double> partial(n + 1, 0.0);
  Coeffs z(n, 0);

  auto init = [&](int i) {
    double s = t.qty(i);
    for (int j = i + 1; j < n; ++j) s -= t.r(i, j) * static_cast<double>(z[j]);
    LevelState& st = state[i];
    st.center = s / t.r(i, i);
    const double c = std::clamp(st.center, static_cast<double>(lo_inf), static_cast<double>(hi_inf));
    st.up = static_cast<long>(std::ceil(c));
    st.down = st.up - 1;
    st.up_open = st.up <= upper(i);
    st.down_open = st.down >= lower(i);
    if (st.up < lower(i)) {
      st.up = lower(i);
      st.up_open = st.up <= upper(i);
    }
    if (st.down > upper(i)) {
      st.down = upper(i);
      st.down_open = st.down >= lower(i);
    }
  };

  auto next = [&](int i, long& value) {
    LevelState& st = state[i];
    if (!st.up_open && !st.down_open) return false;
    bool take_up;
    if (!st.down_open) {
      take_up = true;
    } else if (!st.up_open) {
      take_up = false;
    } else {
      take_up = std::abs(static_cast<double>(st.up) - st.center) <
                std::abs(static_cast<double>(st.down) - st.center);
    }
    if (take_up) {
      value = st.up++;
      st.up_open = st.up <= upper(i);
    } else {
      value = st.down--;
      st.down_open = st.down >= lower(i);
    }
    return true;
  };

  int level = n - 1;
  init(level);
  while (true) {
    long value = 0;
    if (!next(level, value)) {
      if (++level == n) break;
      continue;
    }
    if (++nodes > node_limit) return SearchStatus::kNodeLimit;

    const double e = t.r(level, level) * (static_cast<double>(value) - state[level].center);
    const double d = partial[level + 1] + e * e;
    if (d > visit.radius()) {
      // Remaining candidates at this level are at least as far.
      if (++level == n) break;
      continue;
    }
    z[level] = value;
    if (level == 0) {
      visit.leaf(z, d);
    } else {
      partial[level] = d;
      --level;
      init(level);
    }
  }
  return SearchStatus::kOk;
}

double residual(const Eigen::MatrixXd& basis, const Eigen::VectorXd& target, const Coeffs& z) {
  Eigen::VectorXd zz(static_cast<Eigen::Index>(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i) zz(static_cast<Eigen::Index>(i)) = static_cast<double>(z[i]);
  return (target - basis * zz).squaredNorm();
}

struct BestVisitor {
  double best = std::numeric_limits<double>::infinity();
  Coeffs z;
  double radius() const { return best; }
  void leaf(const Coeffs& c, double d) {
    if (d < best || (d == best && c < z)) {
      best = d;
      z = c;
    }
  }
};

struct ListVisitor {
  std::size_t count;
  std::vector<std::pair<double, Coeffs>> items;
  double radius() const {
    return items.size() < count ? std::numeric_limits<double>::infinity() : items.back().first;
  }
  void leaf(const Coeffs& c, double d) {
    std::pair<double, Coeffs> item{d, c};
    if (items.size() == count && !(item < items.back())) return;
    items.insert(std::upper_bound(items.begin(), items.end(), item), std::move(item));
    if (items.size() > count) items.pop_back();
  }
};

}  // namespace

ClosestPoint sphere_closest(const Eigen::MatrixXd& basis, const Eigen::VectorXd& target,
                            const std::optional<IntegerBox>& box, long node_limit) {
  const Triangular t = factor(basis, target);
  BestVisitor visit;
  ClosestPoint out;
  out.status = enumerate(t, box, node_limit, out.nodes, visit);
  if (visit.z.empty()) {
    if (out.status == SearchStatus::kOk) out.status = SearchStatus::kIncomplete;
    return out;
  }
  out.coeffs = std::move(visit.z);
  out.distance = residual(basis, target, out.coeffs);
  return out;
}

CandidateList candidate_list(const Eigen::MatrixXd& basis, const Eigen::VectorXd& target,
                             std::size_t count, const std::optional<IntegerBox>& box,
                             long node_limit) {
  if (count == 0) throw std::invalid_argument("candidate list size must be positive");
  const Triangular t = factor(basis, target);
  ListVisitor visit{count, {}};
  CandidateList out;
  out.status = enumerate(t, box, node_limit, out.nodes, visit);
  if (out.status == SearchStatus::kOk && visit.items.size() < count)
    out.status = SearchStatus::kIncomplete;
  out.points.reserve(visit.items.size());
  for (auto& [d, z] : visit.items) {
    const double exact = residual(basis, target, z);
    out.points.push_back({std::move(z), exact});
  }
  std::stable_sort(out.points.begin(), out.points.end(), [](const Candidate& a, const Candidate& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.coeffs < b.coeffs);
  });
  return out;
}

Eigen::VectorXd mod_lattice(const Eigen::VectorXd& y, const Eigen::MatrixXd& basis) {
  if (basis.rows() != basis.cols()) throw std::invalid_argument("mod_lattice needs a square basis");
  const ClosestPoint q = sphere_closest(basis, y);
  if (!q.ok()) throw std::runtime_error("lattice quantizer exceeded its node budget");
  Eigen::VectorXd z(static_cast<Eigen::Index>(q.coeffs.size()));
  for (std::size_t i = 0; i < q.coeffs.size(); ++i) z(static_cast<Eigen::Index>(i)) = static_cast<double>(q.coeffs[i]);
  return y - basis * z;
}

}  // namespace ddf
