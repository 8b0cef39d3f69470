#include "ddf/codebook.hpp"

#include <stdexcept>

namespace ddf {

Codebook::Codebook(int length, std::vector<Complex> symbols)
    : length_(length), symbols_(std::move(symbols)) {
  if (length <= 0) throw std::invalid_argument("codeword length must be positive");
  if (symbols_.size() % static_cast<std::size_t>(length) != 0)
    throw std::invalid_argument("symbol count is not a multiple of the codeword length");
  size_ = symbols_.size() / static_cast<std::size_t>(length);
}

double Codebook::average_symbol_energy() const {
  if (symbols_.empty()) return 0.0;
  double e = 0.0;
  for (const auto& s : symbols_) e += std::norm(s);
  return e / static_cast<double>(symbols_.size());
}

Codebook Codebook::scaled(double factor) const {
  std::vector<Complex> s(symbols_);
  for (auto& x : s) x *= factor;
  return Codebook(length_, std::move(s));
}

}  // namespace ddf
