#include "ddf/lattice_codes.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace ddf {

namespace {

std::size_t checked_power(int base, int exponent) {
  std::size_t v = 1;
  for (int i = 0; i < exponent; ++i) {
    if (v > (std::size_t{1} << 40) / static_cast<std::size_t>(base))
      throw std::invalid_argument("codebook too large to enumerate");
    v *= static_cast<std::size_t>(base);
  }
  return v;
}

}  // namespace

RotationGenerator build_rotation(int dim) {
  if (dim < 1) throw std::invalid_argument("rotation dimension must be >= 1");
  RotationGenerator g;
  g.dim = dim;
  g.matrix.resize(dim, dim);
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k) {
      const double phase = std::numbers::pi * (4.0 * j + 1.0) * k / (2.0 * dim);
      g.matrix(j, k) = norm * Complex(std::cos(phase), std::sin(phase));
    }
  return g;
}

Eigen::MatrixXd RotationGenerator::real_matrix() const { return real_expand(matrix); }

Eigen::MatrixXd real_expand(const Eigen::MatrixXcd& m) {
  Eigen::MatrixXd r(2 * m.rows(), 2 * m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const Complex v = m(i, j);
      r(2 * i, 2 * j) = v.real();
      r(2 * i, 2 * j + 1) = -v.imag();
      r(2 * i + 1, 2 * j) = v.imag();
      r(2 * i + 1, 2 * j + 1) = v.real();
    }
  return r;
}

Eigen::VectorXd to_real(std::span<const Complex> x) {
  Eigen::VectorXd r(2 * static_cast<Eigen::Index>(x.size()));
  for (std::size_t k = 0; k < x.size(); ++k) {
    r(2 * static_cast<Eigen::Index>(k)) = x[k].real();
    r(2 * static_cast<Eigen::Index>(k) + 1) = x[k].imag();
  }
  return r;
}

Signal to_complex(const Eigen::VectorXd& x) {
  if (x.size() % 2 != 0) throw std::invalid_argument("real vector has odd length");
  Signal s(static_cast<std::size_t>(x.size() / 2));
  for (std::size_t k = 0; k < s.size(); ++k)
    s[k] = {x(2 * static_cast<Eigen::Index>(k)), x(2 * static_cast<Eigen::Index>(k) + 1)};
  return s;
}

// --- QAM information set ----------------------------------------------------

QamInfoSet::QamInfoSet(int order, int dim) : order_(order), dim_(dim) {
  if (order < 2 || order % 2 != 0) throw std::invalid_argument("QAM order must be even and >= 2");
  if (dim < 1) throw std::invalid_argument("QAM dimension must be >= 1");
  size_ = checked_power(order, 2 * dim);
}

std::vector<Complex> QamInfoSet::point(std::size_t index) const {
  if (index >= size_) throw std::out_of_range("QAM index out of range");
  std::vector<Complex> b(dim_);
  for (int j = 0; j < dim_; ++j) {
    const auto re = static_cast<int>(index % order_);
    index /= order_;
    const auto im = static_cast<int>(index % order_);
    index /= order_;
    b[j] = {2.0 * re - (order_ - 1), 2.0 * im - (order_ - 1)};
  }
  return b;
}

std::optional<std::size_t> QamInfoSet::index_of(std::span<const Complex> b) const {
  if (static_cast<int>(b.size()) != dim_) return std::nullopt;
  auto digit = [&](double v) -> std::optional<std::size_t> {
    const double d = (v + (order_ - 1)) / 2.0;
    const double r = std::round(d);
    if (std::abs(d - r) > 1e-9 || r < 0 || r > order_ - 1) return std::nullopt;
    return static_cast<std::size_t>(r);
  };
  std::size_t index = 0;
  std::size_t weight = 1;
  for (int j = 0; j < dim_; ++j) {
    const auto re = digit(b[j].real());
    const auto im = digit(b[j].imag());
    if (!re || !im) return std::nullopt;
    index += *re * weight;
    weight *= order_;
    index += *im * weight;
    weight *= order_;
  }
  return index;
}

double QamInfoSet::average_symbol_energy() const {
  return 2.0 * (static_cast<double>(order_) * order_ - 1.0) / 3.0;
}

Signal encode_qam(std::span<const Complex> info, const RotationGenerator& gen, int order,
                  double energy) {
  const QamInfoSet set(order, gen.dim);
  if (!set.index_of(info)) throw std::invalid_argument("information vector outside the QAM set");
  const double scale = std::sqrt(energy / set.average_symbol_energy());
  Eigen::VectorXcd b(gen.dim);
  for (int j = 0; j < gen.dim; ++j) b(j) = info[j];
  const Eigen::VectorXcd x = scale * (gen.matrix * b);
  return Signal(x.data(), x.data() + x.size());
}

Codebook qam_codebook(const RotationGenerator& gen, int order, double energy) {
  const QamInfoSet set(order, gen.dim);
  const double scale = std::sqrt(energy / set.average_symbol_energy());
  const Eigen::MatrixXcd g = scale * gen.matrix;
  std::vector<Complex> symbols;
  symbols.reserve(set.size() * static_cast<std::size_t>(gen.dim));
  Eigen::VectorXcd b(gen.dim);
  for (std::size_t w = 0; w < set.size(); ++w) {
    const auto p = set.point(w);
    for (int j = 0; j < gen.dim; ++j) b(j) = p[j];
    const Eigen::VectorXcd x = g * b;
    symbols.insert(symbols.end(), x.data(), x.data() + x.size());
  }
  return Codebook(gen.dim, std::move(symbols));
}

double qam_rate_bpcu(int order) { return 2.0 * std::log2(static_cast<double>(order)); }

// --- Coset code ---------------------------------------------------------------

CosetCodebook::CosetCodebook(RotationGenerator base, int order, double energy)
    : base_(std::move(base)), order_(order) {
  if (order < 1) throw std::invalid_argument("sublattice index must be >= 1");
  if (!(energy > 0.0)) throw std::invalid_argument("energy must be positive");
  const Eigen::MatrixXcd gram = base_.matrix.adjoint() * base_.matrix;
  if ((gram - Eigen::MatrixXcd::Identity(base_.dim, base_.dim)).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("coset code needs a unitary generator");
  basis_ = base_.real_matrix();
  size_ = checked_power(order, 2 * base_.dim);
  scale_ = std::sqrt(energy / (2.0 * lattice_variance()));
}

double CosetCodebook::lattice_variance() const {
  // Voronoi cell of Q G Z^{2n} is a rotated cube of side Q.
  return static_cast<double>(order_) * order_ / 12.0;
}

Coeffs CosetCodebook::digits(std::size_t message) const {
  if (message >= size_) throw std::out_of_range("message index out of range");
  Coeffs z(static_cast<std::size_t>(real_dim()));
  for (auto& d : z) {
    d = static_cast<long>(message % order_);
    message /= order_;
  }
  return z;
}

std::size_t CosetCodebook::message_of(std::span<const long> z) const {
  if (static_cast<int>(z.size()) != real_dim()) throw std::invalid_argument("coefficient dimension");
  std::size_t message = 0;
  std::size_t weight = 1;
  for (long v : z) {
    long r = v % order_;
    if (r < 0) r += order_;
    message += static_cast<std::size_t>(r) * weight;
    weight *= order_;
  }
  return message;
}

Eigen::VectorXd CosetCodebook::representative(std::size_t message) const {
  const Coeffs z = digits(message);
  Eigen::VectorXd v(real_dim());
  for (int i = 0; i < real_dim(); ++i) v(i) = static_cast<double>(z[i]);
  return basis_ * v;
}

Eigen::VectorXd CosetCodebook::sample_dither(Rng& rng) const {
  // Uniform on the fundamental parallelepiped, folded into the Voronoi cell.
  Eigen::VectorXd t(real_dim());
  for (int i = 0; i < real_dim(); ++i) t(i) = uniform01(rng);
  const Eigen::MatrixXd sub = sublattice_basis();
  return mod_lattice(sub * t, sub);
}

Eigen::VectorXd CosetCodebook::lattice_point(std::size_t message, const Eigen::VectorXd& dither) const {
  if (dither.size() != real_dim()) throw std::invalid_argument("dither dimension");
  return mod_lattice(representative(message) - dither, sublattice_basis());
}

Signal CosetCodebook::encode(std::size_t message, const Eigen::VectorXd& dither) const {
  return to_complex(scale_ * lattice_point(message, dither));
}

Codebook CosetCodebook::materialize(const Eigen::VectorXd& dither) const {
  std::vector<Complex> symbols;
  symbols.reserve(size_ * static_cast<std::size_t>(base_.dim));
  for (std::size_t w = 0; w < size_; ++w) {
    const Signal s = encode(w, dither);
    symbols.insert(symbols.end(), s.begin(), s.end());
  }
  return Codebook(base_.dim, std::move(symbols));
}

CosetCodeword coset_encode(std::size_t message, const CosetCodebook& cb, Rng& rng) {
  CosetCodeword out;
  out.dither = cb.sample_dither(rng);
  out.signal = cb.encode(message, out.dither);
  return out;
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
  const auto old = os.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
    os << '\n';
  }
  os.precision(old);
}

void write_matrix(std::ostream& os, const Eigen::MatrixXcd& m) {
  const auto old = os.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      os << (j ? " " : "") << m(i, j).real() << ' ' << m(i, j).imag();
    os << '\n';
  }
  os.precision(old);
}

}  // namespace ddf
