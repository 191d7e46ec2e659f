#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "diffiety/expr.hpp"

namespace diffiety {

/// Pivot preference of an entry: 0 means zero, -1 undecided, larger is better.
template <class Scalar>
struct PivotPolicy;

template <>
struct PivotPolicy<Expr> {
  const AssumptionSet* assumptions = nullptr;
  int rank(const Expr& e) const {
    if (e.is_zero()) return 0;
    if (e.is_constant()) return 3;
    static const AssumptionSet none;
    switch (is_nonzero(e, assumptions ? *assumptions : none)) {
    case NonzeroVerdict::Zero: return 0;
    case NonzeroVerdict::NonzeroByAssumption: return 2;
    case NonzeroVerdict::NonzeroGeneric: return 1;
    case NonzeroVerdict::Undecided: return -1;
    }
    return -1;
  }
  std::string describe(const Expr& e) const { return e.str(); }
};

template <>
struct PivotPolicy<Rational> {
  int rank(const Rational& e) const { return e == 0 ? 0 : 3; }
  std::string describe(const Rational& e) const { return e.get_str(); }
};

/// Row-reduced echelon form built one row at a time. Rows are kept fully
/// reduced (zero in every other pivot column) with pivot entries one, and the
/// transform expressing each row through the inserted inputs is tracked.
template <class Scalar>
class Echelon {
public:
  using Index = Eigen::Index;
  using Vector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Echelon(Index cols, PivotPolicy<Scalar> policy = {}) : cols_(cols), policy_(policy) {}

  Index cols() const { return cols_; }
  Index rank() const { return static_cast<Index>(rows_.size()); }
  Index inputs() const { return inputs_; }
  const std::vector<Vector>& rows() const { return rows_; }
  const std::vector<Index>& pivots() const { return pivots_; }
  /// rows()[i] = sum_k transform()[i][k] * input k.
  const std::vector<Vector>& transform() const { return transform_; }

  struct Reduction {
    Vector remainder;
    Vector coefficients; // one per echelon row
  };

  Reduction reduce(const Vector& v) const {
    Reduction r{v, Vector::Constant(1, rank(), Scalar(0))};
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      Scalar c = r.remainder(pivots_[i]);
      if (is_zero(c)) continue;
      r.coefficients(static_cast<Index>(i)) = c;
      r.remainder -= c * rows_[i];
    }
    return r;
  }

  /// Inserts an input row. Returns the null relation over the inputs when
  /// the row is dependent on earlier ones, nothing otherwise.
  std::optional<Vector> insert(const Vector& v) {
    auto out = insert_at(v, inputs_, 1);
    return out.relation;
  }

  struct Outcome {
    bool inserted = false;
    bool deferred = false;
    std::optional<Vector> relation;
  };

  /// Inserts row v as input number k; rows whose best pivot ranks below
  /// min_rank are deferred untouched.
  Outcome insert_at(const Vector& v, Index k, int min_rank) {
    if (k >= inputs_) {
      for (auto& t : transform_) {
        Index old = t.size();
        t.conservativeResize(k + 1);
        for (Index j = old; j <= k; ++j) t(j) = Scalar(0);
      }
      inputs_ = k + 1;
    }
    Reduction r = reduce(v);
    Index pivot = choose_pivot(r.remainder, min_rank);
    Outcome out;
    if (pivot == deferred_pivot) {
      out.deferred = true;
      return out;
    }
    Vector relation = Vector::Constant(1, inputs_, Scalar(0));
    relation(k) = Scalar(1);
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (!is_zero(r.coefficients(static_cast<Index>(i)))) relation -= r.coefficients(static_cast<Index>(i)) * transform_[i];
    if (pivot < 0) {
      out.relation = std::move(relation);
      return out;
    }

    Scalar inv = Scalar(1) / r.remainder(pivot);
    Vector row = inv * r.remainder;
    row(pivot) = Scalar(1);
    Vector trow = inv * relation;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      Scalar c = rows_[i](pivot);
      if (is_zero(c)) continue;
      rows_[i] -= c * row;
      transform_[i] -= c * trow;
    }
    rows_.push_back(std::move(row));
    pivots_.push_back(pivot);
    transform_.push_back(std::move(trow));
    out.inserted = true;
    return out;
  }

  /// Inserts a batch of inputs, taking rows with certified pivots (rank >= 2)
  /// first so that merely generic pivots are chosen as late as possible.
  /// Returns the null relation of every dependent input.
  std::vector<std::optional<Vector>> insert_all(const std::vector<Vector>& vs) {
    Index base = inputs_;
    std::vector<std::optional<Vector>> relations(vs.size());
    std::vector<std::size_t> pending(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i) pending[i] = i;
    if (!vs.empty() && base + static_cast<Index>(vs.size()) > inputs_) {
      for (auto& t : transform_) {
        Index old = t.size();
        t.conservativeResize(base + static_cast<Index>(vs.size()));
        for (Index j = old; j < t.size(); ++j) t(j) = Scalar(0);
      }
      inputs_ = base + static_cast<Index>(vs.size());
    }
    while (!pending.empty()) {
      std::vector<std::size_t> still;
      bool progress = false;
      for (std::size_t i : pending) {
        auto out = insert_at(vs[i], base + static_cast<Index>(i), 2);
        if (out.deferred) {
          still.push_back(i);
          continue;
        }
        progress = true;
        relations[i] = std::move(out.relation);
      }
      pending = std::move(still);
      if (progress || pending.empty()) continue;
      std::size_t i = pending.front();
      pending.erase(pending.begin());
      relations[i] = insert_at(vs[i], base + static_cast<Index>(i), 1).relation;
    }
    return relations;
  }

  bool is_zero_vector(const Vector& v) const {
    for (Index j = 0; j < v.size(); ++j)
      if (!is_zero(v(j))) return false;
    return true;
  }

private:
  static bool is_zero(const Scalar& s) { return s == Scalar(0); }

  static constexpr Index deferred_pivot = -2;

  Index choose_pivot(const Vector& v, int min_rank) const {
    Index best = -1;
    int best_rank = 0;
    Index undecided = -1;
    for (Index j = 0; j < v.size(); ++j) {
      int r = policy_.rank(v(j));
      if (r < 0) {
        if (undecided < 0) undecided = j;
        continue;
      }
      if (r > best_rank) {
        best_rank = r;
        best = j;
      }
    }
    if (best >= 0 && best_rank < min_rank) return deferred_pivot;
    if (best < 0 && undecided >= 0) {
      if (min_rank > 1) return deferred_pivot;
      throw UndecidedPivot(policy_.describe(v(undecided)));
    }
    return best;
  }

  Index cols_;
  PivotPolicy<Scalar> policy_;
  Index inputs_ = 0;
  std::vector<Vector> rows_;
  std::vector<Index> pivots_;
  std::vector<Vector> transform_;
};

} // namespace diffiety
