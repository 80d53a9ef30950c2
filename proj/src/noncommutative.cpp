#include "fmsys/noncommutative.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fmsys/errors.hpp"

namespace fmsys {

// ---------------------------------------------------------------------------
// WordSequence

WordSequence::WordSequence(int d, int level, int space_dim, int level_cap) : d_(d), space_dim_(space_dim) {
  if (d < 1 || level < 0 || space_dim < 0) {
    throw DomainError("WordSequence: need d >= 1, level >= 0, space_dim >= 0");
  }
  if (level > level_cap) {
    throw RangeError("WordSequence: level " + std::to_string(level) + " exceeds cap " + std::to_string(level_cap));
  }
  levels_.reserve(static_cast<std::size_t>(level + 1));
  for (int l = 0; l <= level; ++l) {
    levels_.push_back(ComplexMatrix::Zero(space_dim, static_cast<Eigen::Index>(word_count(d, l))));
  }
}

void WordSequence::check_word(const Word& w) const {
  if (w.alphabet_size() != d_) {
    throw DimensionError("WordSequence: word over alphabet of size " + std::to_string(w.alphabet_size()) +
                         ", sequence uses " + std::to_string(d_));
  }
}

void WordSequence::set(const Word& w, const ComplexVector& value) {
  check_word(w);
  if (w.length() > level()) {
    throw RangeError("WordSequence::set: word length " + std::to_string(w.length()) + " beyond level " +
                     std::to_string(level()));
  }
  if (value.size() != space_dim_) {
    throw DimensionError("WordSequence::set: value has size " + std::to_string(value.size()) + ", expected " +
                         std::to_string(space_dim_));
  }
  levels_[static_cast<std::size_t>(w.length())].col(static_cast<Eigen::Index>(nu_index(w) - 1)) = value;
}

ComplexVector WordSequence::at(const Word& w) const {
  check_word(w);
  if (w.length() > level()) {
    return ComplexVector::Zero(space_dim_);
  }
  return levels_[static_cast<std::size_t>(w.length())].col(static_cast<Eigen::Index>(nu_index(w) - 1));
}

// ---------------------------------------------------------------------------
// RowContractionTuple

RowContractionTuple::RowContractionTuple(std::vector<ComplexMatrix> t) : t_(std::move(t)) {
  if (t_.empty()) {
    throw DomainError("RowContractionTuple: empty tuple");
  }
  const Eigen::Index k = t_.front().rows();
  for (const auto& tk : t_) {
    if (tk.rows() != k || tk.cols() != k || k == 0) {
      throw DomainError("RowContractionTuple: operators must all be square of the same nonzero size");
    }
    if (!all_finite(tk)) {
      throw DomainError("RowContractionTuple: non-finite entries");
    }
  }
  row_norm_ = operator_norm(hstack(t_));
  if (row_norm_ > 1.0 - kStrictRowMargin) {
    throw DomainError("RowContractionTuple: row norm " + std::to_string(row_norm_) +
                      " is not a strict contraction");
  }
}

RowContractionTuple RowContractionTuple::from_point(const EvaluationPoint& z) {
  std::vector<ComplexMatrix> t;
  for (const auto& zj : z.coords()) {
    t.push_back(ComplexMatrix::Constant(1, 1, zj));
  }
  return RowContractionTuple(std::move(t));
}

RowContractionTuple RowContractionTuple::random(Rng& rng, int d, int dim_k, double row_norm) {
  if (!(row_norm >= 0.0 && row_norm < 1.0)) {
    throw DomainError("RowContractionTuple::random: row_norm must lie in [0, 1)");
  }
  const ComplexMatrix row = random_gaussian(rng, dim_k, d * dim_k);
  const double scale = row_norm / operator_norm(row);
  std::vector<ComplexMatrix> t;
  for (int k = 0; k < d; ++k) {
    t.emplace_back(scale * row.middleCols(k * dim_k, dim_k));
  }
  return RowContractionTuple(std::move(t));
}

double RowContractionTuple::column_norm() const { return operator_norm(vstack(t_)); }

// ---------------------------------------------------------------------------
// Simulation

namespace {

void check_nc_inputs(const SystemRealization& sys, const WordSequence& u, const ComplexVector& x_empty, int level) {
  if (level < 0) {
    throw RangeError("simulate_words: negative level");
  }
  if (u.d() != sys.d()) {
    throw DimensionError("simulate_words: input alphabet size " + std::to_string(u.d()) + ", system has d = " +
                         std::to_string(sys.d()));
  }
  if (u.space_dim() != sys.dim_u()) {
    throw DimensionError("simulate_words: input vectors have size " + std::to_string(u.space_dim()) +
                         ", expected " + std::to_string(sys.dim_u()));
  }
  if (x_empty.size() != sys.dim_x()) {
    throw DimensionError("simulate_words: initial state has size " + std::to_string(x_empty.size()) +
                         ", expected " + std::to_string(sys.dim_x()));
  }
}

// Input level L as a dim_u x d^L block, zero beyond u's truncation.
ComplexMatrix input_level(const WordSequence& u, int level) {
  if (level <= u.level()) {
    return u.level_block(level);
  }
  return ComplexMatrix::Zero(u.space_dim(), static_cast<Eigen::Index>(word_count(u.d(), level)));
}

}  // namespace

WordTrajectory simulate_words(const SystemRealization& sys, const WordSequence& u, const ComplexVector& x_empty,
                              int level) {
  check_nc_inputs(sys, u, x_empty, level);
  const int d = sys.d();
  WordTrajectory traj{WordSequence(d, level, sys.dim_x()), WordSequence(d, level, sys.dim_y())};
  traj.x.set(Word(d), x_empty);
  for (int lvl = 0; lvl <= level; ++lvl) {
    for (const Word& alpha : enumerate_words(d, lvl)) {
      const ComplexVector x_alpha = traj.x.at(alpha);
      const ComplexVector u_alpha = u.at(alpha);
      traj.y.set(alpha, sys.c() * x_alpha + sys.dmat() * u_alpha);
      if (lvl == level) {
        continue;
      }
      for (int k = 1; k <= d; ++k) {
        traj.x.set(concat(k, alpha), sys.a(k) * x_alpha + sys.b(k) * u_alpha);
      }
    }
  }
  return traj;
}

LevelTrajectory simulate_levels(const SystemRealization& sys, const WordSequence& u, const ComplexVector& x_empty,
                                int level) {
  check_nc_inputs(sys, u, x_empty, level);
  if (level > kDefaultWordLevelCap) {
    throw RangeError("simulate_levels: level " + std::to_string(level) + " exceeds cap " +
                     std::to_string(kDefaultWordLevelCap));
  }
  const int d = sys.d();
  const Eigen::Index nx = sys.dim_x();
  const Eigen::Index ny = sys.dim_y();
  LevelTrajectory out;
  ComplexMatrix x_level = x_empty;  // nx x d^L, columns in nu order
  for (int lvl = 0; lvl <= level; ++lvl) {
    const ComplexMatrix u_level = input_level(u, lvl);
    const auto width = static_cast<std::ptrdiff_t>(x_level.cols());
    ComplexMatrix y_level(ny, width);
    ComplexMatrix x_next(nx, lvl < level ? width * d : 0);
    // Column j at level L feeds column (k-1) d^L + j at level L + 1, i.e. word k.alpha.
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < width; ++j) {
      y_level.col(j).noalias() = sys.c() * x_level.col(j) + sys.dmat() * u_level.col(j);
      if (lvl < level) {
        for (int k = 1; k <= d; ++k) {
          x_next.col((k - 1) * width + j).noalias() = sys.a(k) * x_level.col(j) + sys.b(k) * u_level.col(j);
        }
      }
    }
    out.x.emplace_back(Eigen::Map<const ComplexVector>(x_level.data(), x_level.size()));
    out.y.emplace_back(Eigen::Map<const ComplexVector>(y_level.data(), y_level.size()));
    x_level = std::move(x_next);
  }
  return out;
}

std::vector<ComplexVector> to_level_stacked(const WordSequence& w) {
  std::vector<ComplexVector> out;
  for (int l = 0; l <= w.level(); ++l) {
    const ComplexMatrix& block = w.level_block(l);
    out.emplace_back(Eigen::Map<const ComplexVector>(block.data(), block.size()));
  }
  return out;
}

WordSequence from_level_stacked(int d, int space_dim, const std::vector<ComplexVector>& stacked) {
  if (stacked.empty()) {
    throw DimensionError("from_level_stacked: no levels");
  }
  WordSequence w(d, static_cast<int>(stacked.size()) - 1, space_dim);
  for (int l = 0; l <= w.level(); ++l) {
    ComplexMatrix& block = w.level_block(l);
    if (stacked[static_cast<std::size_t>(l)].size() != block.size()) {
      throw DimensionError("from_level_stacked: level " + std::to_string(l) + " has the wrong length");
    }
    block = Eigen::Map<const ComplexMatrix>(stacked[static_cast<std::size_t>(l)].data(), block.rows(), block.cols());
  }
  return w;
}

// ---------------------------------------------------------------------------
// Functional calculus and transforms

ComplexMatrix word_calculus(const RowContractionTuple& t, const Word& w) {
  if (w.alphabet_size() != t.d()) {
    throw DomainError("word_calculus: word over " + std::to_string(w.alphabet_size()) + " letters, tuple has " +
                      std::to_string(t.d()) + " operators");
  }
  ComplexMatrix out = ComplexMatrix::Identity(t.dim_k(), t.dim_k());
  // Left to right: T_{i_N} is the leftmost factor, T_{i_1} acts first.
  for (int letter : w.letters()) {
    out = out * t.t(letter);
  }
  return out;
}

std::vector<ComplexMatrix> word_powers(const RowContractionTuple& t, int level) {
  const int d = t.d();
  std::vector<ComplexMatrix> current{ComplexMatrix::Identity(t.dim_k(), t.dim_k())};
  for (int l = 0; l < level; ++l) {
    std::vector<ComplexMatrix> next(current.size() * static_cast<std::size_t>(d));
    for (int k = 1; k <= d; ++k) {
      for (std::size_t j = 0; j < current.size(); ++j) {
        // T^{k.alpha} = T_k T^alpha sits at nu(alpha) + (k - 1) d^L.
        next[static_cast<std::size_t>(k - 1) * current.size() + j] = t.t(k) * current[j];
      }
    }
    current = std::move(next);
  }
  return current;
}

namespace {

// acc += v (x) p for a column vector v and a square p.
void add_kron_column(ComplexMatrix& acc, const ComplexVector& v, const ComplexMatrix& p) {
  const Eigen::Index k = p.rows();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    acc.middleRows(i * k, k) += v(i) * p;
  }
}

void check_tuple(const SystemRealization& sys, const RowContractionTuple& t) {
  if (t.d() != sys.d()) {
    throw DimensionError("row contraction has " + std::to_string(t.d()) + " operators, system has d = " +
                         std::to_string(sys.d()));
  }
}

void check_stream_budget(int d, int level) {
  std::uint64_t total = 0;
  for (int l = 0; l <= level; ++l) {
    total += word_count(d, l);
    if (total > kMaxStreamedWords) {
      throw RangeError("word tree of depth " + std::to_string(level) + " over " + std::to_string(d) +
                       " letters exceeds the streaming budget");
    }
  }
}

// Depth at which the word tree is split into independent subtrees.
int split_depth(int d, int level) {
  int depth = 0;
  std::uint64_t tasks = 1;
  while (depth < level && tasks < 256) {
    tasks *= static_cast<std::uint64_t>(d);
    ++depth;
  }
  return depth;
}

}  // namespace

ComplexMatrix nc_ztransform(const WordSequence& w, const RowContractionTuple& t, int level) {
  if (w.d() != t.d()) {
    throw DimensionError("nc_ztransform: sequence over " + std::to_string(w.d()) + " letters, tuple has " +
                         std::to_string(t.d()) + " operators");
  }
  const Eigen::Index k = t.dim_k();
  ComplexMatrix acc = ComplexMatrix::Zero(w.space_dim() * k, k);
  std::vector<ComplexMatrix> powers{ComplexMatrix::Identity(k, k)};
  const int top = std::min(level, w.level());
  for (int l = 0; l <= top; ++l) {
    if (l > 0) {
      powers = word_powers(t, l);
    }
    const ComplexMatrix& block = w.level_block(l);
    for (Eigen::Index j = 0; j < block.cols(); ++j) {
      add_kron_column(acc, block.col(j), powers[static_cast<std::size_t>(j)]);
    }
  }
  return acc;
}

namespace {

// Depth-first walk over left extensions k.alpha carrying x(alpha) and T^alpha.
class OutputTransformWalker {
 public:
  OutputTransformWalker(const SystemRealization& sys, const WordSequence& u, const RowContractionTuple& t, int level)
      : sys_(sys), u_(u), t_(t), level_(level), zero_u_(ComplexVector::Zero(sys.dim_u())) {
    const auto depth = static_cast<std::size_t>(level + 1);
    xs_.resize(depth);
    ps_.resize(depth);
  }

  void walk(int depth, std::uint64_t column, const ComplexVector& x, const ComplexMatrix& p, ComplexMatrix& acc) {
    xs_[static_cast<std::size_t>(depth)] = x;
    ps_[static_cast<std::size_t>(depth)] = p;
    visit(depth, column, acc);
  }

 private:
  void visit(int depth, std::uint64_t column, ComplexMatrix& acc) {
    const ComplexVector& x = xs_[static_cast<std::size_t>(depth)];
    const ComplexMatrix& p = ps_[static_cast<std::size_t>(depth)];
    const bool has_input = depth <= u_.level();
    const auto u_col = [&]() -> ComplexVector {
      return has_input ? ComplexVector(u_.level_block(depth).col(static_cast<Eigen::Index>(column))) : zero_u_;
    }();
    const ComplexVector y = sys_.c() * x + sys_.dmat() * u_col;
    add_kron_column(acc, y, p);
    if (depth == level_) {
      return;
    }
    const std::uint64_t stride = word_count(sys_.d(), depth);
    auto& x_next = xs_[static_cast<std::size_t>(depth + 1)];
    auto& p_next = ps_[static_cast<std::size_t>(depth + 1)];
    for (int k = 1; k <= sys_.d(); ++k) {
      x_next.noalias() = sys_.a(k) * x;
      if (has_input) {
        x_next.noalias() += sys_.b(k) * u_col;
      }
      p_next.noalias() = t_.t(k) * p;
      visit(depth + 1, column + static_cast<std::uint64_t>(k - 1) * stride, acc);
    }
  }

  const SystemRealization& sys_;
  const WordSequence& u_;
  const RowContractionTuple& t_;
  int level_;
  ComplexVector zero_u_;
  std::vector<ComplexVector> xs_;
  std::vector<ComplexMatrix> ps_;
};

}  // namespace

ComplexMatrix nc_output_transform(const SystemRealization& sys, const WordSequence& u, const ComplexVector& x_empty,
                                  const RowContractionTuple& t, int level) {
  check_nc_inputs(sys, u, x_empty, level);
  check_tuple(sys, t);
  check_stream_budget(sys.d(), level);
  const int d = sys.d();
  const Eigen::Index k = t.dim_k();
  const int split = split_depth(d, level);

  // Levels below the split, breadth first, kept in nu order.
  ComplexMatrix acc = ComplexMatrix::Zero(sys.dim_y() * k, k);
  ComplexMatrix x_level = x_empty;
  std::vector<ComplexMatrix> p_level{ComplexMatrix::Identity(k, k)};
  for (int l = 0; l < split; ++l) {
    const ComplexMatrix u_level = input_level(u, l);
    const Eigen::Index width = x_level.cols();
    ComplexMatrix x_next(sys.dim_x(), width * d);
    std::vector<ComplexMatrix> p_next(static_cast<std::size_t>(width * d));
    for (Eigen::Index j = 0; j < width; ++j) {
      const ComplexVector y = sys.c() * x_level.col(j) + sys.dmat() * u_level.col(j);
      add_kron_column(acc, y, p_level[static_cast<std::size_t>(j)]);
      for (int kk = 1; kk <= d; ++kk) {
        const Eigen::Index col = (kk - 1) * width + j;
        x_next.col(col) = sys.a(kk) * x_level.col(j) + sys.b(kk) * u_level.col(j);
        p_next[static_cast<std::size_t>(col)] = t.t(kk) * p_level[static_cast<std::size_t>(j)];
      }
    }
    x_level = std::move(x_next);
    p_level = std::move(p_next);
  }

  // One subtree per word at the split depth; partial sums are reduced in task order.
  const auto tasks = static_cast<std::ptrdiff_t>(x_level.cols());
  std::vector<ComplexMatrix> partial(static_cast<std::size_t>(tasks));
#pragma omp parallel
  {
    OutputTransformWalker walker(sys, u, t, level);
#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t task = 0; task < tasks; ++task) {
      ComplexMatrix local = ComplexMatrix::Zero(sys.dim_y() * k, k);
      walker.walk(split, static_cast<std::uint64_t>(task), x_level.col(task), p_level[static_cast<std::size_t>(task)],
                  local);
      partial[static_cast<std::size_t>(task)] = std::move(local);
    }
  }
  for (const auto& part : partial) {
    acc += part;
  }
  return acc;
}

namespace {

ComplexMatrix kron_sum(const std::vector<ComplexMatrix>& blocks, const RowContractionTuple& t) {
  ComplexMatrix out = kron(blocks.front(), t.t(1));
  for (int k = 2; k <= t.d(); ++k) {
    out += kron(blocks[static_cast<std::size_t>(k - 1)], t.t(k));
  }
  return out;
}

// Depth-first walk over right extensions alpha.j carrying C A^alpha and T^alpha.
class SeriesWalker {
 public:
  SeriesWalker(const SystemRealization& sys, const RowContractionTuple& t, int level, bool transfer)
      : sys_(sys), t_(t), level_(level), transfer_(transfer) {
    gs_.resize(static_cast<std::size_t>(level + 1));
    ps_.resize(static_cast<std::size_t>(level + 1));
  }

  void walk(int depth, const ComplexMatrix& g, const ComplexMatrix& p, ComplexMatrix& acc) {
    gs_[static_cast<std::size_t>(depth)] = g;
    ps_[static_cast<std::size_t>(depth)] = p;
    visit(depth, acc);
  }

  // Contribution of the single word carrying (g, p) = (C A^alpha, T^alpha).
  void add_term(const ComplexMatrix& g, const ComplexMatrix& p, ComplexMatrix& acc) const {
    if (transfer_) {
      for (int k = 1; k <= sys_.d(); ++k) {
        acc += kron(g * sys_.b(k), p * t_.t(k));
      }
    } else {
      acc += kron(g, p);
    }
  }

 private:
  void visit(int depth, ComplexMatrix& acc) {
    const ComplexMatrix& g = gs_[static_cast<std::size_t>(depth)];
    const ComplexMatrix& p = ps_[static_cast<std::size_t>(depth)];
    add_term(g, p, acc);
    if (depth == level_) {
      return;
    }
    auto& g_next = gs_[static_cast<std::size_t>(depth + 1)];
    auto& p_next = ps_[static_cast<std::size_t>(depth + 1)];
    for (int j = 1; j <= sys_.d(); ++j) {
      g_next.noalias() = g * sys_.a(j);
      p_next.noalias() = p * t_.t(j);
      visit(depth + 1, acc);
    }
  }

  const SystemRealization& sys_;
  const RowContractionTuple& t_;
  int level_;
  bool transfer_;
  std::vector<ComplexMatrix> gs_;
  std::vector<ComplexMatrix> ps_;
};

ComplexMatrix series_sum(const SystemRealization& sys, const RowContractionTuple& t, int level, bool transfer) {
  check_tuple(sys, t);
  if (level < 0) {
    throw RangeError("series truncation level must be >= 0");
  }
  check_stream_budget(sys.d(), level + (transfer ? 1 : 0));
  const int d = sys.d();
  const Eigen::Index k = t.dim_k();
  const Eigen::Index cols = transfer ? sys.dim_u() * k : sys.dim_x() * k;
  ComplexMatrix acc = ComplexMatrix::Zero(sys.dim_y() * k, cols);
  SeriesWalker head(sys, t, level, transfer);

  const int split = split_depth(d, level);
  std::vector<ComplexMatrix> gs{sys.c()};
  std::vector<ComplexMatrix> ps{ComplexMatrix::Identity(k, k)};
  for (int l = 0; l < split; ++l) {
    std::vector<ComplexMatrix> g_next;
    std::vector<ComplexMatrix> p_next;
    for (std::size_t i = 0; i < gs.size(); ++i) {
      head.add_term(gs[i], ps[i], acc);
      for (int j = 1; j <= d; ++j) {
        g_next.push_back(gs[i] * sys.a(j));
        p_next.push_back(ps[i] * t.t(j));
      }
    }
    gs = std::move(g_next);
    ps = std::move(p_next);
  }

  const auto tasks = static_cast<std::ptrdiff_t>(gs.size());
  std::vector<ComplexMatrix> partial(static_cast<std::size_t>(tasks));
#pragma omp parallel
  {
    SeriesWalker walker(sys, t, level, transfer);
#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t task = 0; task < tasks; ++task) {
      ComplexMatrix local = ComplexMatrix::Zero(acc.rows(), acc.cols());
      walker.walk(split, gs[static_cast<std::size_t>(task)], ps[static_cast<std::size_t>(task)], local);
      partial[static_cast<std::size_t>(task)] = std::move(local);
    }
  }
  for (const auto& part : partial) {
    acc += part;
  }
  return acc;
}

}  // namespace

ComplexMatrix nc_transfer_eval(const SystemRealization& sys, const RowContractionTuple& t) {
  check_tuple(sys, t);
  const ComplexMatrix id = ComplexMatrix::Identity(t.dim_k(), t.dim_k());
  const ComplexMatrix pencil_a = kron_sum(sys.a_blocks(), t);
  const ComplexMatrix pencil_b = kron_sum(sys.b_blocks(), t);
  return kron(sys.dmat(), id) + kron(sys.c(), id) * resolvent_solve(pencil_a, pencil_b);
}

ComplexMatrix nc_transfer_series(const SystemRealization& sys, const RowContractionTuple& t, int level) {
  const ComplexMatrix id = ComplexMatrix::Identity(t.dim_k(), t.dim_k());
  return kron(sys.dmat(), id) + series_sum(sys, t, level, true);
}

ComplexMatrix nc_observation_eval(const SystemRealization& sys, const RowContractionTuple& t) {
  check_tuple(sys, t);
  const Eigen::Index k = t.dim_k();
  const ComplexMatrix pencil_a = kron_sum(sys.a_blocks(), t);
  return kron(sys.c(), ComplexMatrix::Identity(k, k)) *
         resolvent_solve(pencil_a, ComplexMatrix::Identity(pencil_a.rows(), pencil_a.cols()));
}

ComplexMatrix nc_observation_series(const SystemRealization& sys, const RowContractionTuple& t, int level) {
  return series_sum(sys, t, level, false);
}

double series_rate(const SystemRealization& sys, const RowContractionTuple& t) {
  check_tuple(sys, t);
  return std::max(operator_norm(sys.state_row()), operator_norm(sys.state_column())) * t.row_norm();
}

int series_level_for_tail(double rate, double tail) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw DomainError("series_level_for_tail: rate must lie in [0, 1)");
  }
  if (!(tail > 0.0)) {
    throw DomainError("series_level_for_tail: tail must be positive");
  }
  if (rate == 0.0) {
    return 0;
  }
  int n = 0;
  while (std::pow(rate, n + 1) / (1.0 - rate) > tail) {
    ++n;
  }
  return n;
}

double nc_frequency_residual(const SystemRealization& sys, const WordSequence& u, const ComplexVector& x_empty,
                             const RowContractionTuple& t, int level) {
  const Eigen::Index k = t.dim_k();
  const ComplexMatrix y_hat = nc_output_transform(sys, u, x_empty, t, level);
  const ComplexMatrix u_hat = nc_ztransform(u, t, u.level());
  const ComplexMatrix x0 = kron(x_empty, ComplexMatrix::Identity(k, k));
  const ComplexMatrix predicted = nc_transfer_eval(sys, t) * u_hat + nc_observation_eval(sys, t) * x0;
  return operator_norm(y_hat - predicted);
}

// ---------------------------------------------------------------------------
// Abelianization bridge and energy

LatticeSequence symmetrize(const WordSequence& w, int level) {
  LatticeSequence out(w.d(), level, w.space_dim());
  std::map<MultiIndex, ComplexVector> sums;
  const int top = std::min(level, w.level());
  for (int l = 0; l <= top; ++l) {
    const ComplexMatrix& block = w.level_block(l);
    for (Eigen::Index j = 0; j < block.cols(); ++j) {
      const MultiIndex n = abelianize(word_at(w.d(), l, static_cast<std::uint64_t>(j) + 1));
      auto [it, inserted] = sums.try_emplace(n, block.col(j));
      if (!inserted) {
        it->second += block.col(j);
      }
    }
  }
  for (auto& [n, v] : sums) {
    out.set(n, std::move(v));
  }
  return out;
}

std::vector<double> nc_energy_slack(const SystemRealization& sys, const WordSequence& u, const WordTrajectory& traj,
                                    const ComplexVector& x_empty, int level) {
  if (level < 0) {
    throw RangeError("nc_energy_slack: negative level");
  }
  if (traj.x.level() < level + 1 || traj.y.level() < level) {
    throw RangeError("nc_energy_slack: trajectory reaches level " + std::to_string(traj.x.level()) + ", need " +
                     std::to_string(level + 1));
  }
  if (traj.x.space_dim() != sys.dim_x() || traj.y.space_dim() != sys.dim_y() || u.space_dim() != sys.dim_u() ||
      x_empty.size() != sys.dim_x()) {
    throw DimensionError("nc_energy_slack: trajectory does not match system dimensions");
  }
  std::vector<double> slack;
  double supplied = x_empty.squaredNorm();
  double delivered = 0.0;
  for (int l = 0; l <= level; ++l) {
    if (l <= u.level()) {
      supplied += u.level_block(l).squaredNorm();
    }
    delivered += traj.y.level_block(l).squaredNorm();
    slack.push_back(supplied - (delivered + traj.x.level_block(l + 1).squaredNorm()));
  }
  return slack;
}

}  // namespace fmsys
