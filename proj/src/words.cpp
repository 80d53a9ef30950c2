#include "fmsys/words.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "fmsys/errors.hpp"

namespace fmsys {

MultiIndex::MultiIndex(std::vector<int> components) : components_(std::move(components)) {
  for (int c : components_) {
    if (c < 0) {
      throw DomainError("MultiIndex: negative component");
    }
  }
  degree_ = std::accumulate(components_.begin(), components_.end(), 0);
}

MultiIndex::MultiIndex(std::initializer_list<int> components)
    : MultiIndex(std::vector<int>(components)) {}

MultiIndex MultiIndex::zero(int d) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(d), 0)); }

MultiIndex MultiIndex::unit(int d, int j) {
  if (j < 1 || j > d) {
    throw DomainError("MultiIndex::unit: index " + std::to_string(j) + " outside 1.." + std::to_string(d));
  }
  std::vector<int> c(static_cast<std::size_t>(d), 0);
  c[static_cast<std::size_t>(j - 1)] = 1;
  return MultiIndex(std::move(c));
}

MultiIndex MultiIndex::incremented(int j) const {
  if (j < 1 || j > dimension()) {
    throw DomainError("MultiIndex::incremented: index out of range");
  }
  MultiIndex out = *this;
  ++out.components_[static_cast<std::size_t>(j - 1)];
  ++out.degree_;
  return out;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.dimension() != dimension()) {
    throw DimensionError("MultiIndex: dimension mismatch in sum");
  }
  std::vector<int> c = components_;
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] += other.components_[i];
  }
  return MultiIndex(std::move(c));
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
  if (auto c = degree_ <=> other.degree_; c != 0) {
    return c;
  }
  return components_ <=> other.components_;
}

std::ostream& operator<<(std::ostream& os, const MultiIndex& n) {
  os << '(';
  for (int j = 0; j < n.dimension(); ++j) {
    os << (j ? "," : "") << n[j];
  }
  return os << ')';
}

namespace {

void compositions(int d, int remaining, std::vector<int>& prefix, std::vector<MultiIndex>& out) {
  const int slot = static_cast<int>(prefix.size());
  if (slot == d - 1) {
    prefix.push_back(remaining);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int c = 0; c <= remaining; ++c) {
    prefix.push_back(c);
    compositions(d, remaining - c, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> multi_indices_of_degree(int d, int level) {
  if (d < 1 || level < 0) {
    throw DomainError("multi_indices_of_degree: need d >= 1 and level >= 0");
  }
  std::vector<MultiIndex> out;
  std::vector<int> prefix;
  compositions(d, level, prefix, out);
  return out;
}

Word::Word(int d) : d_(d) {
  if (d < 1) {
    throw DomainError("Word: alphabet size must be >= 1");
  }
}

Word::Word(int d, std::vector<int> letters) : d_(d), letters_(std::move(letters)) {
  if (d < 1) {
    throw DomainError("Word: alphabet size must be >= 1");
  }
  for (int l : letters_) {
    if (l < 1 || l > d) {
      throw DomainError("Word: letter " + std::to_string(l) + " outside 1.." + std::to_string(d));
    }
  }
}

std::strong_ordering Word::operator<=>(const Word& other) const {
  if (auto c = d_ <=> other.d_; c != 0) {
    return c;
  }
  if (auto c = letters_.size() <=> other.letters_.size(); c != 0) {
    return c;
  }
  // The leftmost letter i_N is the most significant nu-digit.
  return letters_ <=> other.letters_;
}

std::ostream& operator<<(std::ostream& os, const Word& w) {
  if (w.empty()) {
    return os << "()";
  }
  for (int l : w.letters()) {
    os << l;
  }
  return os;
}

std::uint64_t word_count(int d, int n) {
  if (d < 1 || n < 0) {
    throw DomainError("word_count: need d >= 1 and n >= 0");
  }
  std::uint64_t out = 1;
  for (int i = 0; i < n; ++i) {
    if (out > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(d)) {
      throw RangeError("word_count: d^n overflows");
    }
    out *= static_cast<std::uint64_t>(d);
  }
  return out;
}

std::uint64_t nu_index(const Word& w) {
  const auto d = static_cast<std::uint64_t>(w.alphabet_size());
  std::uint64_t index = 0;
  // Horner from i_N down to i_1.
  for (int letter : w.letters()) {
    index = index * d + static_cast<std::uint64_t>(letter - 1);
  }
  return index + 1;
}

Word word_at(int d, int n, std::uint64_t index) {
  const std::uint64_t count = word_count(d, n);
  if (index < 1 || index > count) {
    throw RangeError("word_at: index " + std::to_string(index) + " outside 1.." + std::to_string(count));
  }
  std::vector<int> letters(static_cast<std::size_t>(n));
  std::uint64_t rest = index - 1;
  for (int pos = n - 1; pos >= 0; --pos) {
    letters[static_cast<std::size_t>(pos)] = static_cast<int>(rest % static_cast<std::uint64_t>(d)) + 1;
    rest /= static_cast<std::uint64_t>(d);
  }
  return Word(d, std::move(letters));
}

std::vector<Word> enumerate_words(int d, int n, int level_cap) {
  if (d < 1 || n < 0) {
    throw DomainError("enumerate_words: need d >= 1 and n >= 0");
  }
  if (n > level_cap) {
    throw RangeError("enumerate_words: level " + std::to_string(n) + " exceeds cap " + std::to_string(level_cap));
  }
  const std::uint64_t count = word_count(d, n);
  std::vector<Word> out;
  out.reserve(count);
  std::vector<int> letters(static_cast<std::size_t>(n), 1);
  for (std::uint64_t j = 0; j < count; ++j) {
    out.emplace_back(d, letters);
    // Odometer increment with i_1 (last element) as the fastest digit.
    for (int pos = n - 1; pos >= 0; --pos) {
      auto& l = letters[static_cast<std::size_t>(pos)];
      if (l < d) {
        ++l;
        break;
      }
      l = 1;
    }
  }
  return out;
}

MultiIndex abelianize(const Word& w) {
  std::vector<int> counts(static_cast<std::size_t>(w.alphabet_size()), 0);
  for (int l : w.letters()) {
    ++counts[static_cast<std::size_t>(l - 1)];
  }
  return MultiIndex(std::move(counts));
}

Word concat(int k, const Word& w) {
  if (k < 1 || k > w.alphabet_size()) {
    throw DomainError("concat: letter " + std::to_string(k) + " outside 1.." +
                      std::to_string(w.alphabet_size()));
  }
  std::vector<int> letters;
  letters.reserve(w.letters().size() + 1);
  letters.push_back(k);
  letters.insert(letters.end(), w.letters().begin(), w.letters().end());
  return Word(w.alphabet_size(), std::move(letters));
}

Word concat(const Word& alpha, const Word& beta) {
  if (alpha.alphabet_size() != beta.alphabet_size()) {
    throw DomainError("concat: alphabet sizes differ");
  }
  std::vector<int> letters = alpha.letters();
  letters.insert(letters.end(), beta.letters().begin(), beta.letters().end());
  return Word(alpha.alphabet_size(), std::move(letters));
}

double omega_weight(const MultiIndex& n) {
  if (n.degree() > kOmegaDegreeCap) {
    throw RangeError("omega_weight: |n| = " + std::to_string(n.degree()) + " exceeds " +
                     std::to_string(kOmegaDegreeCap));
  }
  // Product of binomials C(n_1 + ... + n_j, n_j); each factor is exact in 64 bits.
  double out = 1.0;
  int running = 0;
  for (int j = 0; j < n.dimension(); ++j) {
    const int nj = n[j];
    running += nj;
    std::uint64_t binom = 1;
    for (int i = 1; i <= nj; ++i) {
      binom = binom * static_cast<std::uint64_t>(running - nj + i) / static_cast<std::uint64_t>(i);
    }
    out *= static_cast<double>(binom);
  }
  return out;
}

}  // namespace fmsys
