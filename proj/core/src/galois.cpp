#include "ddf/galois.hpp"

#include <ostream>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace ddf {

namespace {

std::pair<int, int> prime_power(int q) {
  if (q < 2) throw std::invalid_argument("field order must be a prime power >= 2");
  int p = 2;
  while (q % p != 0) ++p;
  int k = 0;
  int r = q;
  while (r % p == 0) {
    r /= p;
    ++k;
  }
  if (r != 1) throw std::invalid_argument("field order must be a prime power");
  return {p, k};
}

std::vector<int> digits_of(int v, int p, int len) {
  std::vector<int> d(len, 0);
  for (int i = 0; i < len; ++i) {
    d[i] = v % p;
    v /= p;
  }
  return d;
}

int from_digits(const std::vector<int>& d, int p) {
  int v = 0;
  for (auto it = d.rbegin(); it != d.rend(); ++it) v = v * p + *it;
  return v;
}

// Multiply two residues modulo a monic polynomial of degree k (coefficients
// base p, low first, leading coefficient implied).
int poly_mulmod(int a, int b, const std::vector<int>& mod, int p, int k) {
  std::vector<int> x = digits_of(a, p, k);
  std::vector<int> y = digits_of(b, p, k);
  std::vector<int> prod(2 * k, 0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
  for (int d = 2 * k - 1; d >= k; --d) {
    const int c = prod[d];
    if (c == 0) continue;
    prod[d] = 0;
    for (int i = 0; i < k; ++i) prod[d - k + i] = ((prod[d - k + i] - c * mod[i]) % p + p) % p;
  }
  prod.resize(k);
  return from_digits(prod, p);
}

// X generates the multiplicative group of the quotient ring.
bool is_primitive(const std::vector<int>& mod, int p, int k, int q) {
  if (k == 1) return false;
  const int x = p;  // the residue X
  int v = 1;
  for (int e = 1; e < q - 1; ++e) {
    v = poly_mulmod(v, x, mod, p, k);
    if (v == 1) return false;
  }
  return poly_mulmod(v, x, mod, p, k) == 1;
}

}  // namespace

GaloisField::GaloisField(int q) : q_(q) {
  std::tie(p_, k_) = prime_power(q);
  const auto n = static_cast<std::size_t>(q);
  add_.resize(n * n);
  mul_.resize(n * n);
  neg_.resize(n);
  inv_.assign(n, 0);

  std::vector<int> mod(k_, 0);
  if (k_ == 1) {
    modulus_ = p_;  // X
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) {
        add_[a * n + b] = (a + b) % p_;
        mul_[a * n + b] = (a * b) % p_;
      }
  } else {
    bool found = false;
    for (int low = 0; low < q && !found; ++low) {
      mod = digits_of(low, p_, k_);
      if (mod[0] == 0) continue;
      found = is_primitive(mod, p_, k_, q);
      if (found) modulus_ = q + low;
    }
    if (!found) throw std::logic_error("no primitive polynomial found");
    for (int a = 0; a < q; ++a) {
      const auto da = digits_of(a, p_, k_);
      for (int b = 0; b < q; ++b) {
        const auto db = digits_of(b, p_, k_);
        std::vector<int> s(k_);
        for (int i = 0; i < k_; ++i) s[i] = (da[i] + db[i]) % p_;
        add_[a * n + b] = from_digits(s, p_);
        mul_[a * n + b] = poly_mulmod(a, b, mod, p_, k_);
      }
    }
  }
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      if (add_[a * n + b] == 0) neg_[a] = b;
      if (mul_[a * n + b] == 1) inv_[a] = b;
    }
}

int GaloisField::check(int a) const {
  if (a < 0 || a >= q_) throw std::out_of_range("field element out of range");
  return a;
}

int GaloisField::inv(int a) const {
  if (check(a) == 0) throw std::domain_error("inverse of zero");
  return inv_[a];
}

int GaloisField::pow(int a, int e) const {
  if (e < 0) return pow(inv(a), -e);
  int r = 1;
  for (int i = 0; i < e; ++i) r = mul(r, a);
  return r;
}

int gf_rank(GfMatrix m, const GaloisField& f) {
  int rank = 0;
  for (int c = 0; c < m.cols && rank < m.rows; ++c) {
    int pivot = -1;
    for (int r = rank; r < m.rows; ++r)
      if (m.at(r, c) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    for (int j = 0; j < m.cols; ++j) std::swap(m.at(rank, j), m.at(pivot, j));
    const int s = f.inv(m.at(rank, c));
    for (int j = 0; j < m.cols; ++j) m.at(rank, j) = f.mul(m.at(rank, j), s);
    for (int r = 0; r < m.rows; ++r) {
      if (r == rank || m.at(r, c) == 0) continue;
      const int factor = m.at(r, c);
      for (int j = 0; j < m.cols; ++j) m.at(r, j) = f.sub(m.at(r, j), f.mul(factor, m.at(rank, j)));
    }
    ++rank;
  }
  return rank;
}

std::vector<int> gf_matvec(const GfMatrix& a, const std::vector<int>& v, const GaloisField& f) {
  if (static_cast<int>(v.size()) != a.cols) throw std::invalid_argument("matrix-vector dimension mismatch");
  std::vector<int> out(a.rows, 0);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) out[i] = f.add(out[i], f.mul(a.at(i, j), v[j]));
  return out;
}

void print_matrix(std::ostream& os, const GfMatrix& m) {
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) os << (j ? " " : "") << m.at(i, j);
    os << '\n';
  }
}

}  // namespace ddf
