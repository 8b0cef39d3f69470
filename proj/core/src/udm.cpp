#include "ddf/udm.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>

namespace ddf {

namespace {

int binom_mod(int n, int k, int p) {
  if (k < 0 || k > n) return 0;
  // Lucas' theorem.
  int r = 1;
  while (n > 0 || k > 0) {
    const int a = n % p;
    const int b = k % p;
    if (b > a) return 0;
    long c = 1;
    for (int i = 0; i < b; ++i) c = c * (a - i) / (i + 1);
    r = static_cast<int>((r * (c % p)) % p);
    n /= p;
    k /= p;
  }
  return r;
}

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

UdmSet build_udm(int branches, int size, int order) {
  if (branches < 1 || size < 1) throw std::invalid_argument("UDM needs L >= 1 and n >= 1");
  UdmSet u{branches, size, GaloisField(order), {}};
  if (branches > order + 1) throw std::invalid_argument("UDM construction needs L <= q + 1");
  const GaloisField& f = u.field;
  for (int l = 0; l < branches; ++l) {
    GfMatrix a(size, size);
    if (l == 0) {
      for (int k = 0; k < size; ++k) a.at(k, size - 1 - k) = 1;
    } else if (l == 1) {
      for (int k = 0; k < size; ++k) a.at(k, k) = 1;
    } else {
      const int beta = l - 1;
      for (int k = 0; k < size; ++k)
        for (int j = k; j < size; ++j) {
          const int c = binom_mod(j, k, f.characteristic());
          a.at(k, j) = f.mul(c % order, f.pow(beta, j - k));
        }
    }
    u.matrices.push_back(std::move(a));
  }
  return u;
}

bool udm_verify(const UdmSet& u) {
  const int l_count = static_cast<int>(u.matrices.size());
  const int n = u.size;
  for (const auto& a : u.matrices)
    if (a.rows != n || a.cols != n) return false;
  std::vector<int> k(l_count, 0);
  bool ok = true;
  std::function<void(int, int)> rec = [&](int idx, int remaining) {
    if (!ok) return;
    if (idx == l_count - 1) {
      k[idx] = remaining;
      GfMatrix stack(n, n);
      int row = 0;
      for (int l = 0; l < l_count; ++l)
        for (int r = 0; r < k[l]; ++r, ++row)
          for (int j = 0; j < n; ++j) stack.at(row, j) = u.matrices[l].at(r, j);
      if (gf_rank(stack, u.field) < n) ok = false;
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      k[idx] = v;
      rec(idx + 1, remaining - v);
    }
  };
  if (l_count == 0) return false;
  rec(0, n);
  return ok;
}

double udm_pam_scale(const UdmSet& udm, double energy) {
  const double levels = std::pow(static_cast<double>(udm.field.order()), udm.size);
  return std::sqrt(energy / (2.0 * (levels * levels - 1.0) / 3.0));
}

Signal encode_permutation(const std::vector<int>& u_i, const std::vector<int>& u_q,
                          const UdmSet& udm, double energy) {
  if (static_cast<int>(u_i.size()) != udm.size || static_cast<int>(u_q.size()) != udm.size)
    throw std::invalid_argument("message length does not match UDM size");
  const int q = udm.field.order();
  const double top = static_cast<double>(ipow(static_cast<std::size_t>(q), udm.size)) - 1.0;
  const double scale = udm_pam_scale(udm, energy);
  auto pam = [&](const std::vector<int>& v) {
    double idx = 0.0;
    for (int i = udm.size - 1; i >= 0; --i) idx = idx * q + v[i];
    return 2.0 * idx - top;
  };
  Signal x;
  x.reserve(udm.matrices.size());
  for (const auto& a : udm.matrices) {
    const double re = pam(gf_matvec(a, u_i, udm.field));
    const double im = pam(gf_matvec(a, u_q, udm.field));
    x.emplace_back(scale * re, scale * im);
  }
  return x;
}

Codebook udm_codebook(const UdmSet& udm, double energy) {
  const int q = udm.field.order();
  const std::size_t count = ipow(static_cast<std::size_t>(q), 2 * udm.size);
  std::vector<Complex> symbols;
  symbols.reserve(count * udm.matrices.size());
  std::vector<int> ui(udm.size), uq(udm.size);
  for (std::size_t w = 0; w < count; ++w) {
    std::size_t r = w;
    for (auto& d : ui) {
      d = static_cast<int>(r % q);
      r /= q;
    }
    for (auto& d : uq) {
      d = static_cast<int>(r % q);
      r /= q;
    }
    const Signal x = encode_permutation(ui, uq, udm, energy);
    symbols.insert(symbols.end(), x.begin(), x.end());
  }
  return Codebook(static_cast<int>(udm.matrices.size()), std::move(symbols));
}

double udm_rate_bpcu(const UdmSet& udm) {
  return 2.0 * udm.size * std::log2(static_cast<double>(udm.field.order())) /
         static_cast<double>(udm.matrices.size());
}

void print_udm(std::ostream& os, const UdmSet& u) {
  for (std::size_t l = 0; l < u.matrices.size(); ++l) {
    os << "A_" << l << '\n';
    print_matrix(os, u.matrices[l]);
  }
}

}  // namespace ddf
