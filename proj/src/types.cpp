#include "jsr/types.hpp"

#include <algorithm>
#include <sstream>

namespace jsr {

Word Word::from_one_based(const std::vector<int>& letters) {
  std::vector<int> zero;
  zero.reserve(letters.size());
  for (int l : letters) {
    if (l < 1) throw DimensionError("word letters are one-based; got " + std::to_string(l));
    zero.push_back(l - 1);
  }
  return Word(std::move(zero));
}

Word Word::then(const Word& other) const {
  std::vector<int> out = letters_;
  out.insert(out.end(), other.letters_.begin(), other.letters_.end());
  return Word(std::move(out));
}

Word Word::then(int letter) const {
  std::vector<int> out = letters_;
  out.push_back(letter);
  return Word(std::move(out));
}

Word Word::power(std::size_t k) const {
  std::vector<int> out;
  out.reserve(letters_.size() * k);
  for (std::size_t i = 0; i < k; ++i) out.insert(out.end(), letters_.begin(), letters_.end());
  return Word(std::move(out));
}

Word Word::slice(std::size_t from, std::size_t count) const {
  from = std::min(from, letters_.size());
  count = std::min(count, letters_.size() - from);
  return Word(std::vector<int>(letters_.begin() + static_cast<std::ptrdiff_t>(from),
                               letters_.begin() + static_cast<std::ptrdiff_t>(from + count)));
}

bool Word::starts_with(const Word& prefix) const {
  return prefix.size() <= size() &&
         std::equal(prefix.letters_.begin(), prefix.letters_.end(), letters_.begin());
}

bool Word::ends_with(const Word& suffix) const {
  return suffix.size() <= size() &&
         std::equal(suffix.letters_.rbegin(), suffix.letters_.rend(), letters_.rbegin());
}

Word Word::canonical_rotation() const {
  if (letters_.empty()) return *this;
  std::vector<int> best = letters_;
  std::vector<int> rot = letters_;
  for (std::size_t i = 1; i < letters_.size(); ++i) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (rot < best) best = rot;
  }
  return Word(std::move(best));
}

Word Word::primitive_root() const {
  const std::size_t n = letters_.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) periodic = letters_[i] == letters_[i - p];
    if (periodic) return slice(0, p);
  }
  return *this;
}

bool Word::is_power_of(const Word& base) const {
  if (base.empty() || empty() || size() % base.size() != 0) return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (letters_[i] != base.letters_[i % base.size()]) return false;
  return true;
}

bool Word::same_cycle_class(const Word& other) const {
  return primitive_root().canonical_rotation() == other.primitive_root().canonical_rotation();
}

std::vector<int> Word::one_based() const {
  std::vector<int> out;
  out.reserve(letters_.size());
  for (int l : letters_) out.push_back(l + 1);
  return out;
}

std::string Word::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < letters_.size(); ++i) os << (i ? "," : "") << letters_[i] + 1;
  os << ']';
  return os.str();
}

MatrixFamily::MatrixFamily(std::vector<Matrix> matrices, double scale)
    : matrices_(std::move(matrices)), scale_(scale) {
  if (matrices_.empty()) throw DimensionError("matrix family must contain at least one matrix");
  if (!(scale_ > 0.0)) throw DimensionError("matrix family scale must be positive");
  dim_ = matrices_.front().rows();
  if (dim_ == 0) throw DimensionError("matrix family has zero-dimensional matrices");
  for (const auto& m : matrices_) {
    if (m.rows() != dim_ || m.cols() != dim_)
      throw DimensionError("matrix family: all matrices must be square of the same size");
    if (!m.allFinite()) throw DimensionError("matrix family: non-finite entry");
  }
}

MatrixFamily MatrixFamily::scaled(double c) const {
  std::vector<Matrix> out;
  out.reserve(matrices_.size());
  for (const auto& m : matrices_) out.push_back(c * m);
  return MatrixFamily(std::move(out), scale_ / c);
}

Matrix word_product(const MatrixFamily& family, const Word& w) {
  return word_product<double>(family.matrices(), w);
}

}  // namespace jsr
