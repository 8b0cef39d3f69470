#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "ddf/codebook.hpp"
#include "ddf/galois.hpp"
#include "ddf/params.hpp"

namespace ddf {

/// L matrices of size n x n over GF(q).
struct UdmSet {
  int branches = 0;  // L
  int size = 0;      // n
  GaloisField field{2};
  std::vector<GfMatrix> matrices;
};

/// Hasse-derivative construction: A_0 reads coefficients in reverse order,
/// A_1 is the identity, and A_l(k, j) = binom(j, k) beta_l^(j-k) for l >= 2
/// with beta_l = l - 1. Requires L <= q + 1.
UdmSet build_udm(int branches, int size, int order);

/// True iff every stack of the first k_l rows of A_l with sum k_l = n has
/// rank n over the field.
bool udm_verify(const UdmSet& u);

/// Permutation-code symbol block: branch l carries v = A_l u_I (real part) and
/// A_l u_Q (imaginary part), each mapped to the centred PAM value
/// 2 sum_i v_i q^i - (q^n - 1), then scaled to mean symbol energy `energy`.
Signal encode_permutation(const std::vector<int>& u_i, const std::vector<int>& u_q,
                          const UdmSet& udm, double energy);

/// Energy scale applied to raw PAM values.
double udm_pam_scale(const UdmSet& udm, double energy);

/// All q^(2n) codewords; message digits (base q, low first) are u_I then u_Q.
Codebook udm_codebook(const UdmSet& udm, double energy);

/// 2 n log2(q) / L.
double udm_rate_bpcu(const UdmSet& udm);

void print_udm(std::ostream& os, const UdmSet& u);

}  // namespace ddf
