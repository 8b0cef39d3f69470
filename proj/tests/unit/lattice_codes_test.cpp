#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ddf/lattice_codes.hpp"
#include "ddf/lattice_decoder.hpp"
#include "unit/oracles.hpp"

using namespace ddf;

TEST_CASE("rotation generator") {
  const auto g1 = build_rotation(1);
  CHECK(std::abs(g1.matrix(0, 0) - Complex(1.0, 0.0)) < 1e-15);
  CHECK_THROWS_AS(build_rotation(0), std::invalid_argument);

  for (int n : {1, 2, 4, 8}) {
    const auto g = build_rotation(n);
    const Eigen::MatrixXcd err = g.matrix.adjoint() * g.matrix - Eigen::MatrixXcd::Identity(n, n);
    CHECK(err.cwiseAbs().maxCoeff() < 1e-12);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        CHECK(std::abs(g.matrix(j, k)) == doctest::Approx(1.0 / std::sqrt(n)).epsilon(1e-14));
    // The real form is orthogonal as well.
    const Eigen::MatrixXd r = g.real_matrix();
    CHECK((r.transpose() * r - Eigen::MatrixXd::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("real expansion matches complex multiplication") {
  const auto g = build_rotation(3);
  Signal x{{1.0, -2.0}, {0.5, 0.25}, {-3.0, 1.0}};
  Eigen::VectorXcd xc(3);
  for (int i = 0; i < 3; ++i) xc(i) = x[i];
  const Eigen::VectorXcd yc = g.matrix * xc;
  const Eigen::VectorXd yr = real_expand(g.matrix) * to_real(x);
  const Signal back = to_complex(yr);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(back[i] - yc(i)) < 1e-14);
}

TEST_CASE("non-vanishing product distance for Q = 2") {
  // Full diversity needs n to be a power of two. For n = 3 the third row is
  // (1, -i, -1) / sqrt(3), which annihilates d = (1, 0, 1).
  {
    const auto g = build_rotation(3);
    const Eigen::Vector3cd d(1.0, 0.0, 1.0);
    CHECK(std::abs((g.matrix * d)(2)) < 1e-12);
  }
  for (int n : {1, 2, 4}) {
    const auto g = build_rotation(n);
    const QamInfoSet set(2, n);
    double min_prod = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < set.size(); ++a) {
      const auto pa = set.point(a);
      for (std::size_t b = a + 1; b < set.size(); ++b) {
        const auto pb = set.point(b);
        Eigen::VectorXcd d(n);
        for (int j = 0; j < n; ++j) d(j) = pa[j] - pb[j];
        const Eigen::VectorXcd x = g.matrix * d;
        double prod = 1.0;
        for (int j = 0; j < n; ++j) prod *= std::abs(x(j));
        min_prod = std::min(min_prod, prod);
      }
    }
    INFO("n = " << n);
    CHECK(min_prod > 1e-6);
  }
}

TEST_CASE("QAM information set and encoder") {
  const QamInfoSet set(4, 2);
  CHECK(set.size() == 256);
  std::set<std::pair<double, double>> seen;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto p = set.point(i);
    CHECK(set.index_of(p) == i);
    for (const auto& v : p) {
      CHECK(std::abs(std::fmod(std::abs(v.real()), 2.0) - 1.0) < 1e-12);
      CHECK(std::abs(v.real()) <= 3.0);
      CHECK(std::abs(v.imag()) <= 3.0);
    }
  }
  CHECK_FALSE(set.index_of(Signal{{0.0, 1.0}, {1.0, 1.0}}).has_value());
  CHECK_THROWS_AS(QamInfoSet(3, 2), std::invalid_argument);

  const auto g = build_rotation(2);
  const Signal b{{1, -3}, {3, 1}};
  const Signal nb{{-1, 3}, {-3, -1}};
  const auto x = encode_qam(b, g, 4, 10.0);
  const auto y = encode_qam(nb, g, 4, 10.0);
  for (int j = 0; j < 2; ++j) CHECK(std::abs(x[j] + y[j]) < 1e-12);
  CHECK_THROWS_AS(encode_qam(Signal{{2, 1}, {1, 1}}, g, 4, 10.0), std::invalid_argument);

  // Rate of the 4-slot, one-symbol-per-slot code at Q = 4.
  CHECK(qam_rate_bpcu(4) == doctest::Approx(4.0));
  CHECK(qam_rate_bpcu(2) == doctest::Approx(2.0));

  const auto cb = qam_codebook(g, 2, 7.5);
  CHECK(cb.size() == 16);
  CHECK(std::abs(cb.average_symbol_energy() - 7.5) < 1e-9);
  const auto cb4 = qam_codebook(build_rotation(4), 2, 3.0);
  CHECK(std::abs(cb4.average_symbol_energy() - 3.0) < 1e-9);
  const auto p = QamInfoSet(2, 4).point(77);
  const auto x77 = encode_qam(p, build_rotation(4), 2, 3.0);
  for (int j = 0; j < 4; ++j) CHECK(std::abs(x77[j] - cb4.codeword(77)[j]) < 1e-12);
}

TEST_CASE("mod_lattice") {
  Rng rng(5);
  const Eigen::MatrixXd basis = build_rotation(2).real_matrix() * 2.0;

  SUBCASE("lattice points map to zero") {
    Eigen::VectorXd z(4);
    z << 1, -2, 3, 0;
    CHECK(mod_lattice(basis * z, basis).norm() < 1e-12);
  }
  SUBCASE("interior points are unchanged") {
    // The Voronoi cell of an orthogonal basis scaled by 2 is a rotated cube of
    // half-side 1.
    Eigen::VectorXd t(4);
    t << 0.3, -0.9, 0.5, 0.1;
    const Eigen::VectorXd y = build_rotation(2).real_matrix() * t;
    CHECK((mod_lattice(y, basis) - y).norm() < 1e-12);
  }
  SUBCASE("random targets against a brute-force closest point") {
    Eigen::MatrixXd skew(4, 4);
    skew << 1.0, 0.4, -0.2, 0.1, 0.0, 1.1, 0.3, -0.4, 0.2, 0.0, 0.9, 0.5, -0.1, 0.2, 0.0, 1.2;
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd y(4);
      for (int i = 0; i < 4; ++i) y(i) = 6.0 * uniform01(rng) - 3.0;
      const auto best = oracle::closest_in_box(skew, y, -6, 6);
      Eigen::VectorXd z(4);
      for (int i = 0; i < 4; ++i) z(i) = static_cast<double>(best.z[i]);
      const Eigen::VectorXd expect = y - skew * z;
      CHECK((mod_lattice(y, skew) - expect).norm() < 1e-9);
    }
  }
  SUBCASE("rank-deficient lattice") {
    Eigen::MatrixXd flat = Eigen::MatrixXd::Zero(2, 2);
    flat(0, 0) = 1.0;
    CHECK_THROWS_AS(mod_lattice(Eigen::VectorXd::Ones(2), flat), std::invalid_argument);
  }
}

TEST_CASE("coset code") {
  Rng rng(9);
  const CosetCodebook cb(build_rotation(2), 2, 4.0);
  CHECK(cb.size() == 16);
  CHECK(cb.real_dim() == 4);
  const Eigen::MatrixXd g_inv = cb.basis().inverse();

  SUBCASE("zero dither keeps representatives already in the cell") {
    const CosetCodebook c4(build_rotation(2), 4, 1.0);
    for (std::size_t w = 0; w < c4.size(); ++w) {
      const auto z = c4.digits(w);
      bool small = true;
      for (long v : z) small = small && v <= 1;
      if (!small) continue;
      const Eigen::VectorXd x = c4.lattice_point(w, Eigen::VectorXd::Zero(4));
      CHECK((x - c4.representative(w)).norm() < 1e-12);
    }
  }
  SUBCASE("transmitted point sits in the right coset") {
    for (int trial = 0; trial < 200; ++trial) {
      const auto w = static_cast<std::size_t>(trial) % cb.size();
      const Eigen::VectorXd u = cb.sample_dither(rng);
      const Eigen::VectorXd x = cb.lattice_point(w, u);
      const Eigen::VectorXd c = g_inv * (x + u - cb.representative(w));
      for (int i = 0; i < 4; ++i) {
        const double q = c(i) / 2.0;
        CHECK(std::abs(q - std::round(q)) < 1e-6);
      }
      // x lies in the Voronoi cell of the sublattice.
      CHECK((mod_lattice(x, cb.sublattice_basis()) - x).norm() < 1e-9);
    }
  }
  SUBCASE("representatives are pairwise inequivalent") {
    for (std::size_t a = 0; a < cb.size(); ++a)
      for (std::size_t b = a + 1; b < cb.size(); ++b) {
        const Eigen::VectorXd c = g_inv * (cb.representative(a) - cb.representative(b));
        bool all_even = true;
        for (int i = 0; i < 4; ++i) {
          const long v = std::lround(c(i));
          all_even = all_even && v % 2 == 0;
        }
        CHECK_FALSE(all_even);
      }
    const CosetCodebook big(build_rotation(4), 2, 1.0);
    std::set<std::size_t> msgs;
    for (std::size_t w = 0; w < big.size(); ++w) {
      const auto z = big.digits(w);
      CHECK(big.message_of(z) == w);
      msgs.insert(w);
    }
    CHECK(msgs.size() == 256);
  }
  SUBCASE("message_of reduces modulo Q") {
    const std::vector<long> z{-1, 3, 2, -4};
    CHECK(cb.message_of(z) == cb.message_of(std::vector<long>{1, 1, 0, 0}));
  }
  SUBCASE("dither mean is zero") {
    const int n = 100000;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(4), sq = Eigen::VectorXd::Zero(4);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd u = cb.sample_dither(rng);
      sum += u;
      sq += u.cwiseProduct(u);
    }
    const Eigen::VectorXd mean = sum / n;
    const Eigen::VectorXd var = sq / n - mean.cwiseProduct(mean);
    const double se = std::sqrt(var.sum() / n);
    CHECK(mean.norm() < 3.0 * se);
    // Second moment of the cell: Q^2 / 12 per dimension.
    for (int i = 0; i < 4; ++i) CHECK(var(i) == doctest::Approx(cb.lattice_variance()).epsilon(0.02));
  }
  SUBCASE("mean symbol energy under dithering") {
    const int n = 20000;
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto cw = coset_encode(static_cast<std::size_t>(i) % cb.size(), cb, rng);
      for (const auto& s : cw.signal) e += std::norm(s);
    }
    CHECK(e / (2.0 * n) == doctest::Approx(4.0).epsilon(0.02));
  }
  SUBCASE("materialized codebook agrees with encode") {
    const Eigen::VectorXd u = cb.sample_dither(rng);
    const auto book = cb.materialize(u);
    for (std::size_t w = 0; w < cb.size(); ++w) {
      const auto s = cb.encode(w, u);
      for (int k = 0; k < 2; ++k) CHECK(std::abs(book.codeword(w)[k] - s[k]) < 1e-14);
    }
  }
  SUBCASE("non-unitary generator is rejected") {
    RotationGenerator g = build_rotation(2);
    g.matrix *= 2.0;
    CHECK_THROWS_AS(CosetCodebook(g, 2, 1.0), std::invalid_argument);
  }
}

TEST_CASE("noiseless coset round trip through the lattice decoder") {
  Rng rng(21);
  SystemParams p;
  p.snr_db = 40.0;
  const CosetCodebook cb(build_rotation(4), 2, p.symbol_energy());
  std::vector<Complex> gains(4, Complex{1.0, 0.0});
  int ok = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto w = static_cast<std::size_t>(std::uniform_int_distribution<int>(0, 255)(rng));
    const auto cw = coset_encode(w, cb, rng);
    const auto model = coset_observation_model(gains, cw.signal, p.dest_noise_var(), cb);
    const auto d = lattice_decode_mmse(model, cb, cw.dither);
    ok += d.message == w;
  }
  CHECK(ok == 1000);
}

TEST_CASE("matrix dump round-trips at full precision") {
  const auto g = build_rotation(3);
  std::ostringstream os;
  write_matrix(os, g.real_matrix());
  std::istringstream is(os.str());
  const Eigen::MatrixXd r = g.real_matrix();
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
      double v = 0.0;
      is >> v;
      CHECK(v == r(i, j));
    }
  std::ostringstream oc;
  write_matrix(oc, g.matrix);
  std::istringstream ic(oc.str());
  double re = 0.0, im = 0.0;
  ic >> re >> im;
  CHECK(re == g.matrix(0, 0).real());
  CHECK(im == g.matrix(0, 0).imag());
}
