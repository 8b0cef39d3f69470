#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include <Eigen/Dense>

#include "ddf/lattice_codes.hpp"
#include "ddf/sphere.hpp"

namespace ddf {

/// Forward/backward MMSE-GDFE pair: B upper triangular with
/// B^T B = H^T H + snr^-1 I and F = B^-T H^T.
struct GdfeFilters {
  Eigen::MatrixXd forward;
  Eigen::MatrixXd backward;
};

/// Throws std::invalid_argument for snr <= 0 or non-finite input.
GdfeFilters mmse_gdfe_filters(const Eigen::MatrixXd& h, double snr);

/// y = H x + e in real coordinates. H may have fewer rows than columns.
/// `snr` is the per-dimension signal-to-noise ratio used as the regularizer.
struct LinearModel {
  Eigen::MatrixXd h;
  double snr = 1.0;
  Eigen::VectorXd y;
};

/// Model for a coset codeword observed through per-symbol complex gains
/// y_k = gain_k x_k + noise (noise variance `noise_var` per complex symbol),
/// on the first y.size() symbols of the block. H is expressed in lattice units,
/// so its columns act on the unscaled lattice point.
LinearModel coset_observation_model(std::span<const Complex> gains, std::span<const Complex> y,
                                    double noise_var, const CosetCodebook& cb);

/// Preprocessed closest-point problem y' ~ (B G) z.
struct GdfeProblem {
  GdfeFilters filters;
  Eigen::MatrixXd basis;   // B G
  Eigen::VectorXd target;  // F y + B u
};

GdfeProblem gdfe_problem(const LinearModel& model, const CosetCodebook& cb,
                         const Eigen::VectorXd& dither);

struct LatticeDecision {
  std::optional<std::size_t> message;  // absent on search failure
  Coeffs coeffs;
  SearchStatus status = SearchStatus::kOk;

  bool ok() const { return message.has_value(); }
};

/// Coset decision from the closest point of B G Z^{2n} to F y + B u.
LatticeDecision lattice_decode_mmse(const LinearModel& model, const CosetCodebook& cb,
                                    const Eigen::VectorXd& dither,
                                    long node_limit = kDefaultNodeLimit);

LatticeDecision lattice_decode_mmse(const GdfeProblem& problem, const CosetCodebook& cb,
                                    long node_limit = kDefaultNodeLimit);

}  // namespace ddf
