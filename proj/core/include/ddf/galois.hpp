#pragma once

#include <iosfwd>
#include <vector>

namespace ddf {

/// GF(p^k) with table arithmetic. An element is an integer 0..q-1 whose base-p
/// digits are the coefficients of its polynomial representative (low digit is
/// the constant term). The modulus is the smallest monic primitive polynomial
/// of degree k in that encoding, e.g. X^2 + X + 1 for q = 4.
class GaloisField {
 public:
  explicit GaloisField(int q);

  int order() const { return q_; }
  int characteristic() const { return p_; }
  int degree() const { return k_; }
  /// Modulus coefficients encoded base p, including the leading term.
  int modulus() const { return modulus_; }

  int add(int a, int b) const { return add_[idx(a, b)]; }
  int sub(int a, int b) const { return add(a, neg(b)); }
  int neg(int a) const { return neg_[check(a)]; }
  int mul(int a, int b) const { return mul_[idx(a, b)]; }
  /// Throws std::domain_error for a = 0.
  int inv(int a) const;
  int pow(int a, int e) const;

 private:
  int check(int a) const;
  std::size_t idx(int a, int b) const {
    return static_cast<std::size_t>(check(a)) * static_cast<std::size_t>(q_) +
           static_cast<std::size_t>(check(b));
  }

  int q_;
  int p_;
  int k_;
  int modulus_;
  std::vector<int> add_;
  std::vector<int> mul_;
  std::vector<int> neg_;
  std::vector<int> inv_;
};

/// Dense row-major matrix over a Galois field.
struct GfMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> data;

  GfMatrix() = default;
  GfMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0) {}

  int& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  int at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

int gf_rank(GfMatrix m, const GaloisField& f);
std::vector<int> gf_matvec(const GfMatrix& a, const std::vector<int>& v, const GaloisField& f);

/// Integer grid, one row per line.
void print_matrix(std::ostream& os, const GfMatrix& m);

}  // namespace ddf
