#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "meanret/geometry.hpp"

namespace meanret {

/// The first triple (a, b, c) with (ab)c != a(bc), by element index.
struct AssociativityWitness {
  int a = -1;
  int b = -1;
  int c = -1;
};

class AssociativityError : public std::invalid_argument {
 public:
  AssociativityError(const std::string& msg, AssociativityWitness w)
      : std::invalid_argument(msg), witness_(w) {}
  const AssociativityWitness& witness() const { return witness_; }

 private:
  AssociativityWitness witness_;
};

/// Finite semigroup presented by a multiplication table.  Construction
/// validates the table exhaustively (all n^3 triples) and rejects
/// non-associative input with a witness triple.
class FiniteSemigroup {
 public:
  /// table[s][t] = index of s*t.  labels may be empty (defaults to s0..).
  static FiniteSemigroup from_table(std::vector<std::string> labels,
                                    const std::vector<std::vector<int>>& table);

  static FiniteSemigroup cyclic(int n);      // Z_n, generator g
  static FiniteSemigroup left_zero(int n);   // s*t = s
  static FiniteSemigroup right_zero(int n);  // s*t = t

  int size() const { return n_; }
  int product(int s, int t) const { return table_[static_cast<std::size_t>(s) * n_ + t]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int s) const { return labels_[static_cast<std::size_t>(s)]; }

  bool is_commutative() const;
  std::optional<int> identity() const;

  /// Matrix of the composition operator (L_s f)(t) = f(s t) acting on
  /// functions as row vectors indexed by elements.
  Matrix left_translation(int s) const;

  /// Transpose of left_translation: pushes weight vectors forward,
  /// (L_s^* mu)(u) = sum over { t : s t = u } of mu(t).  Every column holds
  /// a single 1, so columns sum to one and the simplex maps into itself.
  Matrix left_translation_adjoint(int s) const;

 private:
  FiniteSemigroup() = default;

  int n_ = 0;
  std::vector<int> table_;  // row-major, n_ * n_
  std::vector<std::string> labels_;
};

}  // namespace meanret
