#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ddf/params.hpp"

namespace ddf {

/// Explicit list of equal-length codewords, indexed by message 0..size()-1.
class Codebook {
 public:
  Codebook() = default;
  Codebook(int length, std::vector<Complex> symbols);

  std::size_t size() const { return size_; }
  int length() const { return length_; }

  std::span<const Complex> codeword(std::size_t message) const {
    return {symbols_.data() + message * static_cast<std::size_t>(length_),
            static_cast<std::size_t>(length_)};
  }

  /// Mean of |x_k|^2 over all codewords and positions.
  double average_symbol_energy() const;

  /// Copy with every symbol multiplied by `factor`.
  Codebook scaled(double factor) const;

 private:
  int length_ = 0;
  std::size_t size_ = 0;
  std::vector<Complex> symbols_;
};

}  // namespace ddf
