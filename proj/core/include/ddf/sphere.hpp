#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace ddf {

/// Integer coefficient vector of a lattice point.
using Coeffs = std::vector<long>;

enum class SearchStatus {
  kOk,
  kNodeLimit,   // node budget exhausted; result is the best found so far
  kIncomplete,  // the box holds fewer points than requested
};

inline constexpr long kDefaultNodeLimit = 10'000'000;

/// Inclusive per-coordinate bounds.
struct IntegerBox {
  std::vector<long> lower;
  std::vector<long> upper;

  static IntegerBox uniform(int dim, long lo, long hi) {
    return {std::vector<long>(dim, lo), std::vector<long>(dim, hi)};
  }
};

struct ClosestPoint {
  Coeffs coeffs;
  double distance = 0.0;  // |y - B z|^2
  SearchStatus status = SearchStatus::kOk;
  long nodes = 0;

  bool ok() const { return status == SearchStatus::kOk; }
};

/// Exact closest point argmin_z |y - B z|^2 over the integer box (or all of Z^n).
///
/// Schnorr-Euchner depth-first enumeration on the QR factor of `basis`; the
/// radius shrinks with every leaf. Equal distances resolve to the
/// lexicographically smaller coefficient vector. Throws std::invalid_argument
/// when `basis` does not have full column rank.
ClosestPoint sphere_closest(const Eigen::MatrixXd& basis, const Eigen::VectorXd& target,
                            const std::optional<IntegerBox>& box = std::nullopt,
                            long node_limit = kDefaultNodeLimit);

struct Candidate {
  Coeffs coeffs;
  double distance = 0.0;
};

struct CandidateList {
  std::vector<Candidate> points;  // nondecreasing distance, ties lexicographic
  SearchStatus status = SearchStatus::kOk;
  long nodes = 0;
};

/// The `count` lattice points closest to `target`, in nondecreasing distance.
CandidateList candidate_list(const Eigen::MatrixXd& basis, const Eigen::VectorXd& target,
                             std::size_t count,
                             const std::optional<IntegerBox>& box = std::nullopt,
                             long node_limit = kDefaultNodeLimit);

/// y - Q_L(y): the representative of y in the Voronoi cell of the lattice
/// spanned by the columns of `basis`.
Eigen::VectorXd mod_lattice(const Eigen::VectorXd& y, const Eigen::MatrixXd& basis);

}  // namespace ddf
