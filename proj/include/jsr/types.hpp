#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace jsr {

using Index = Eigen::Index;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using Matrix = Mat<double>;
using Vector = Vec<double>;
using CMatrix = Mat<Complex>;
using CVector = Vec<Complex>;

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// The QR iteration hit its cap.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

// A leading eigenvalue has a nontrivial Jordan block, or the product has
// spectral radius above one after normalization.
class NotAnSmpError : public Error {
 public:
  using Error::Error;
};

class ZeroSpectralRadiusError : public Error {
 public:
  using Error::Error;
};

// An index vector j = [j_1, ..., j_n] over the alphabet {0, ..., J-1}.
// Letters are applied left to right: the product is A_{j_n} ... A_{j_1}.
// Letters are zero-based in memory and one-based in every text format.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<int> letters) : letters_(letters) {}
  explicit Word(std::vector<int> letters) : letters_(std::move(letters)) {}

  // One-based constructor for the notation used in files and tests.
  static Word from_one_based(const std::vector<int>& letters);

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  int operator[](std::size_t i) const { return letters_[i]; }
  int front() const { return letters_.front(); }
  int back() const { return letters_.back(); }
  const std::vector<int>& letters() const { return letters_; }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }

  // this followed by other, i.e. A_other * A_this.
  Word then(const Word& other) const;
  Word then(int letter) const;
  Word power(std::size_t k) const;
  Word slice(std::size_t from, std::size_t count) const;

  bool starts_with(const Word& prefix) const;
  bool ends_with(const Word& suffix) const;

  // Lexicographically smallest cyclic rotation.
  Word canonical_rotation() const;
  // Shortest r with this == r^k.
  Word primitive_root() const;
  bool is_primitive() const { return primitive_root().size() == size(); }
  // True when this == base^k for some k >= 1.
  bool is_power_of(const Word& base) const;
  // Same primitive root up to rotation.
  bool same_cycle_class(const Word& other) const;

  std::vector<int> one_based() const;
  std::string to_string() const;

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() <=> b.size();
    return a.letters_ <=> b.letters_;
  }

 private:
  std::vector<int> letters_;
};

// The finite set {A_1, ..., A_J} together with the factor lambda it has
// already been divided by (1 for raw input).
class MatrixFamily {
 public:
  MatrixFamily() = default;
  explicit MatrixFamily(std::vector<Matrix> matrices, double scale = 1.0);

  Index dim() const { return dim_; }
  std::size_t size() const { return matrices_.size(); }
  const Matrix& operator[](std::size_t j) const { return matrices_[j]; }
  const std::vector<Matrix>& matrices() const { return matrices_; }
  double scale() const { return scale_; }

  // Every matrix multiplied by c; scale divided by c.
  MatrixFamily scaled(double c) const;

 private:
  std::vector<Matrix> matrices_;
  Index dim_ = 0;
  double scale_ = 1.0;
};

// A_{j_n} ... A_{j_1}; the empty word gives the identity.
template <typename Scalar>
Mat<Scalar> word_product(const std::vector<Mat<Scalar>>& matrices, const Word& w) {
  if (matrices.empty()) throw DimensionError("word_product: empty family");
  const Index s = matrices.front().rows();
  Mat<Scalar> result = Mat<Scalar>::Identity(s, s);
  for (int letter : w) {
    if (letter < 0 || static_cast<std::size_t>(letter) >= matrices.size())
      throw DimensionError("word_product: letter " + std::to_string(letter + 1) +
                           " out of range");
    const auto& a = matrices[static_cast<std::size_t>(letter)];
    if (a.rows() != s || a.cols() != s)
      throw DimensionError("word_product: dimension mismatch within family");
    result = (a * result).eval();
  }
  return result;
}

Matrix word_product(const MatrixFamily& family, const Word& w);

// Operator 2-norm.
template <typename Derived>
double norm2(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  if (m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<typename Derived::PlainObject> svd(m);
  return static_cast<double>(svd.singularValues()(0));
}

}  // namespace jsr
