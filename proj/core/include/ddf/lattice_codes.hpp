#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>

#include <Eigen/Dense>

#include "ddf/codebook.hpp"
#include "ddf/params.hpp"
#include "ddf/rng.hpp"
#include "ddf/sphere.hpp"

namespace ddf {

/// Unitary cyclotomic rotation G[j][k] = n^{-1/2} exp(i pi (4j+1) k / (2n)).
struct RotationGenerator {
  int dim = 0;
  Eigen::MatrixXcd matrix;

  /// 2n x 2n real form acting on interleaved (Re, Im) coordinates.
  Eigen::MatrixXd real_matrix() const;
};

RotationGenerator build_rotation(int dim);

/// Real-equivalent of a complex matrix on interleaved (Re, Im) coordinates:
/// each entry a + ib becomes the block [[a, -b], [b, a]].
Eigen::MatrixXd real_expand(const Eigen::MatrixXcd& m);
Eigen::VectorXd to_real(std::span<const Complex> x);
Signal to_complex(const Eigen::VectorXd& x);

/// Information set {a + ib : a, b odd, |a|, |b| <= Q - 1}^n, indexed by base-Q
/// digits with digit 2j driving Re(b_j) and digit 2j+1 driving Im(b_j).
class QamInfoSet {
 public:
  QamInfoSet(int order, int dim);

  int order() const { return order_; }
  int dim() const { return dim_; }
  std::size_t size() const { return size_; }

  std::vector<Complex> point(std::size_t index) const;
  std::optional<std::size_t> index_of(std::span<const Complex> b) const;

  /// Mean |b_j|^2 over the set: 2(Q^2 - 1)/3.
  double average_symbol_energy() const;

 private:
  int order_;
  int dim_;
  std::size_t size_;
};

/// x = scale G b with the scale fixing the codebook's mean symbol energy to
/// `energy`. Throws std::invalid_argument when b is outside the set.
Signal encode_qam(std::span<const Complex> info, const RotationGenerator& gen, int order,
                  double energy);

/// Every codeword of the rotated QAM code, in information-set index order.
Codebook qam_codebook(const RotationGenerator& gen, int order, double energy);

/// log2 |B| / n for the Q^2-QAM information set.
double qam_rate_bpcu(int order);

/// Mod-Lambda_s coset code with Lambda_s = Q Lambda and Lambda = G Z^{2n}.
///
/// All lattice quantities live in "lattice units"; `scale()` converts a lattice
/// vector to the transmitted amplitude so that the mean symbol energy under a
/// uniform dither equals `energy`.
class CosetCodebook {
 public:
  CosetCodebook(RotationGenerator base, int order, double energy);

  const RotationGenerator& base() const { return base_; }
  int order() const { return order_; }
  int real_dim() const { return static_cast<int>(basis_.cols()); }
  std::size_t size() const { return size_; }
  double scale() const { return scale_; }

  /// Per real dimension second moment of the Voronoi cell of Lambda_s.
  double lattice_variance() const;

  const Eigen::MatrixXd& basis() const { return basis_; }
  Eigen::MatrixXd sublattice_basis() const { return static_cast<double>(order_) * basis_; }

  Coeffs digits(std::size_t message) const;
  /// Message whose coset contains the lattice point with coefficients `z`.
  std::size_t message_of(std::span<const long> z) const;

  /// Coset representative G z with z in {0..Q-1}^{2n}.
  Eigen::VectorXd representative(std::size_t message) const;

  /// Uniform over the Voronoi cell of Lambda_s.
  Eigen::VectorXd sample_dither(Rng& rng) const;

  /// [c_w - u] mod Lambda_s, in lattice units.
  Eigen::VectorXd lattice_point(std::size_t message, const Eigen::VectorXd& dither) const;

  /// Transmitted signal for `message` under `dither`.
  Signal encode(std::size_t message, const Eigen::VectorXd& dither) const;

  /// Explicit codebook of all transmitted signals for one dither realization.
  Codebook materialize(const Eigen::VectorXd& dither) const;

 private:
  RotationGenerator base_;
  int order_;
  std::size_t size_;
  Eigen::MatrixXd basis_;
  double scale_;
};

struct CosetCodeword {
  Signal signal;
  Eigen::VectorXd dither;
};

/// Draws a dither and encodes `message` with it.
CosetCodeword coset_encode(std::size_t message, const CosetCodebook& cb, Rng& rng);

/// Row-major text dump with 17 significant digits, one row per line.
void write_matrix(std::ostream& os, const Eigen::MatrixXd& m);
/// Complex entries are written as "re im" pairs.
void write_matrix(std::ostream& os, const Eigen::MatrixXcd& m);

}  // namespace ddf
