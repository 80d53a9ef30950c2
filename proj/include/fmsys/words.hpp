#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <vector>

namespace fmsys {

/// Default cap on the word length accepted by enumerate_words.
inline constexpr int kDefaultWordLevelCap = 12;
/// Largest |n| for which omega_weight is evaluated.
inline constexpr int kOmegaDegreeCap = 40;

/// A point n = (n_1, ..., n_d) of the lattice Z_+^d.
///
/// Ordered by degree |n| first and lexicographically within a degree, so maps keyed
/// by MultiIndex iterate level by level.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> components);
  MultiIndex(std::initializer_list<int> components);

  /// The zero multi-index in dimension d.
  static MultiIndex zero(int d);
  /// The standard basis vector e_j, j in 1..d.
  static MultiIndex unit(int d, int j);

  int dimension() const { return static_cast<int>(components_.size()); }
  int degree() const { return degree_; }
  int operator[](int j) const { return components_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& components() const { return components_; }

  /// n + e_j for j in 1..d.
  MultiIndex incremented(int j) const;

  MultiIndex operator+(const MultiIndex& other) const;

  std::strong_ordering operator<=>(const MultiIndex& other) const;
  bool operator==(const MultiIndex& other) const = default;

 private:
  std::vector<int> components_;
  int degree_ = 0;
};

std::ostream& operator<<(std::ostream& os, const MultiIndex& n);

/// All multi-indices of degree `level` in dimension d, in MultiIndex order.
std::vector<MultiIndex> multi_indices_of_degree(int d, int level);

/// A word alpha = i_N ... i_2 i_1 over the alphabet {1, ..., d}.
///
/// Letters are stored left to right as written, so i_1 (the first letter applied in
/// the recursion x(k.alpha) = A_k x(alpha) + ...) is the last element and prepend()
/// adds the new leftmost letter. Words of equal length order by their nu-index.
class Word {
 public:
  /// The empty word over an alphabet of size d.
  explicit Word(int d);
  /// Throws DomainError if d < 1 or a letter is outside 1..d.
  Word(int d, std::vector<int> letters);

  int alphabet_size() const { return d_; }
  int length() const { return static_cast<int>(letters_.size()); }
  bool empty() const { return letters_.empty(); }
  const std::vector<int>& letters() const { return letters_; }

  std::strong_ordering operator<=>(const Word& other) const;
  bool operator==(const Word& other) const = default;

 private:
  int d_;
  std::vector<int> letters_;
};

std::ostream& operator<<(std::ostream& os, const Word& w);

/// d^n as a 64-bit count. Throws RangeError on overflow.
std::uint64_t word_count(int d, int n);

/// nu_n(alpha) = 1 + sum_j (i_j - 1) d^(j-1), a 1-based position among words of length |alpha|.
std::uint64_t nu_index(const Word& w);

/// The word of length n with nu_n(word) = index (1-based).
Word word_at(int d, int n, std::uint64_t index);

/// All d^n words of length n, positioned so that element j-1 has nu-index j.
/// Throws RangeError if n exceeds level_cap.
std::vector<Word> enumerate_words(int d, int n, int level_cap = kDefaultWordLevelCap);

/// Letter counts (n_1, ..., n_d) of w.
MultiIndex abelianize(const Word& w);

/// k.w: prepends k as the new leftmost letter. Throws DomainError if k is outside 1..d.
Word concat(int k, const Word& w);

/// Concatenation alpha.beta (beta's letters end up on the right).
Word concat(const Word& alpha, const Word& beta);

/// Multinomial coefficient |n|! / (n_1! ... n_d!). Throws RangeError for |n| > 40.
double omega_weight(const MultiIndex& n);

}  // namespace fmsys
