#include "meanret/semigroup.hpp"

#include <sstream>

namespace meanret {

FiniteSemigroup FiniteSemigroup::from_table(
    std::vector<std::string> labels, const std::vector<std::vector<int>>& table) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw std::invalid_argument("semigroup: empty table");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) {
      throw std::invalid_argument("semigroup: table must be square");
    }
    for (int v : row) {
      if (v < 0 || v >= n) {
        throw std::invalid_argument("semigroup: table entry out of range");
      }
    }
  }
  if (labels.empty()) {
    for (int i = 0; i < n; ++i) labels.push_back("s" + std::to_string(i));
  }
  if (static_cast<int>(labels.size()) != n) {
    throw std::invalid_argument("semigroup: label count mismatch");
  }

  FiniteSemigroup s;
  s.n_ = n;
  s.labels_ = std::move(labels);
  s.table_.resize(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) s.table_[static_cast<std::size_t>(a) * n + b] = table[a][b];
  }

  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const int ab = s.product(a, b);
      for (int c = 0; c < n; ++c) {
        if (s.product(ab, c) != s.product(a, s.product(b, c))) {
          std::ostringstream msg;
          msg << "semigroup: table is not associative at ("
              << s.labels_[a] << ", " << s.labels_[b] << ", " << s.labels_[c]
              << ") = indices (" << a << ", " << b << ", " << c << ")";
          throw AssociativityError(msg.str(), AssociativityWitness{a, b, c});
        }
      }
    }
  }
  return s;
}

FiniteSemigroup FiniteSemigroup::cyclic(int n) {
  if (n < 1) throw std::invalid_argument("cyclic: order must be >= 1");
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  std::vector<std::string> labels;
  for (int a = 0; a < n; ++a) {
    labels.push_back(a == 0 ? "e" : "g^" + std::to_string(a));
    for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  }
  return from_table(std::move(labels), table);
}

FiniteSemigroup FiniteSemigroup::left_zero(int n) {
  if (n < 1) throw std::invalid_argument("left_zero: size must be >= 1");
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) table[a][b] = a;
  }
  return from_table({}, table);
}

FiniteSemigroup FiniteSemigroup::right_zero(int n) {
  if (n < 1) throw std::invalid_argument("right_zero: size must be >= 1");
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) table[a][b] = b;
  }
  return from_table({}, table);
}

bool FiniteSemigroup::is_commutative() const {
  for (int a = 0; a < n_; ++a) {
    for (int b = a + 1; b < n_; ++b) {
      if (product(a, b) != product(b, a)) return false;
    }
  }
  return true;
}

std::optional<int> FiniteSemigroup::identity() const {
  for (int e = 0; e < n_; ++e) {
    bool ok = true;
    for (int a = 0; a < n_ && ok; ++a) {
      ok = product(e, a) == a && product(a, e) == a;
    }
    if (ok) return e;
  }
  return std::nullopt;
}

Matrix FiniteSemigroup::left_translation(int s) const {
  if (s < 0 || s >= n_) throw std::invalid_argument("left_translation: bad element");
  Matrix l = Matrix::Zero(n_, n_);
  for (int t = 0; t < n_; ++t) l(t, product(s, t)) = 1.0;
  return l;
}

Matrix FiniteSemigroup::left_translation_adjoint(int s) const {
  return left_translation(s).transpose();
}

}  // namespace meanret
