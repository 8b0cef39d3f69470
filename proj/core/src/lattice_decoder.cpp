#include "ddf/lattice_decoder.hpp"

#include <cmath>
#include <stdexcept>

namespace ddf {

GdfeFilters mmse_gdfe_filters(const Eigen::MatrixXd& h, double snr) {
  if (!(snr > 0.0) || !std::isfinite(snr)) throw std::invalid_argument("snr must be positive");
  if (!h.allFinite()) throw std::invalid_argument("non-finite channel matrix");
  Eigen::MatrixXd gram = h.transpose() * h;
  gram.diagonal().array() += 1.0 / snr;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("regularized Gram matrix is not positive definite");
  GdfeFilters f;
  f.backward = llt.matrixU();
  f.forward = llt.matrixL().solve(h.transpose());
  return f;
}

LinearModel coset_observation_model(std::span<const Complex> gains, std::span<const Complex> y,
                                    double noise_var, const CosetCodebook& cb) {
  const int n = cb.base().dim;
  if (gains.size() != y.size()) throw std::invalid_argument("gain and observation lengths differ");
  if (static_cast<int>(y.size()) > n) throw std::invalid_argument("observation longer than the block");
  if (!(noise_var > 0.0)) throw std::invalid_argument("noise variance must be positive");

  Eigen::MatrixXcd hc = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(y.size()), n);
  for (std::size_t k = 0; k < y.size(); ++k)
    hc(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = gains[k];

  LinearModel m;
  m.h = cb.scale() * real_expand(hc);
  m.y = to_real(y);
  m.snr = cb.lattice_variance() / (noise_var / 2.0);
  return m;
}

GdfeProblem gdfe_problem(const LinearModel& model, const CosetCodebook& cb,
                         const Eigen::VectorXd& dither) {
  if (model.h.cols() != cb.real_dim()) throw std::invalid_argument("model does not match codebook dimension");
  if (model.h.rows() != model.y.size()) throw std::invalid_argument("model rows do not match observation");
  if (dither.size() != cb.real_dim()) throw std::invalid_argument("dither dimension");
  GdfeProblem p;
  p.filters = mmse_gdfe_filters(model.h, model.snr);
  p.basis = p.filters.backward * cb.basis();
  p.target = p.filters.forward * model.y + p.filters.backward * dither;
  return p;
}

LatticeDecision lattice_decode_mmse(const GdfeProblem& problem, const CosetCodebook& cb,
                                    long node_limit) {
  const ClosestPoint q = sphere_closest(problem.basis, problem.target, std::nullopt, node_limit);
  LatticeDecision d;
  d.status = q.status;
  d.coeffs = q.coeffs;
  if (q.ok()) d.message = cb.message_of(q.coeffs);
  return d;
}

LatticeDecision lattice_decode_mmse(const LinearModel& model, const CosetCodebook& cb,
                                    const Eigen::VectorXd& dither, long node_limit) {
  return lattice_decode_mmse(gdfe_problem(model, cb, dither), cb, node_limit);
}

}  // namespace ddf
