#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "eqlab/hilbert/operator.hpp"

namespace eqlab::geometry {

/// A noncommutative polynomial in (P, Q). Each term is coef * W where W is a word over {P, Q}
/// read left to right as an operator product ("QP" means Q*P). The classical symbol replaces
/// the letters by the numbers p and q.
class PhasePolynomial {
 public:
  struct Term {
    double coef = 0.0;
    std::string word;
  };

  PhasePolynomial() = default;
  explicit PhasePolynomial(std::vector<Term> terms) : terms_(std::move(terms)) {
    for (const auto& t : terms_)
      for (char c : t.word)
        if (c != 'P' && c != 'Q') throw ConfigError("polynomial words may only contain P and Q: " + t.word);
  }

  /// 1/2 (P^2 + omega^2 Q^2)
  static PhasePolynomial harmonic(double omega = 1.0) {
    return PhasePolynomial({{0.5, "PP"}, {0.5 * omega * omega, "QQ"}});
  }
  /// c * Q^4
  static PhasePolynomial quartic(double c = 1.0) { return PhasePolynomial({{c, "QQQQ"}}); }

  const std::vector<Term>& terms() const { return terms_; }

  double classical(double p, double q) const {
    double sum = 0.0;
    for (const auto& t : terms_) {
      double v = t.coef;
      for (char c : t.word) v *= c == 'P' ? p : q;
      sum += v;
    }
    return sum;
  }

  /// Operator obtained by substituting matrices for the letters.
  hilbert::OperatorMatrix quantize(const hilbert::OperatorMatrix& P, const hilbert::OperatorMatrix& Q) const {
    hilbert::OperatorMatrix sum = 0.0 * hilbert::OperatorMatrix::identity(P.basis());
    for (const auto& t : terms_) {
      hilbert::OperatorMatrix w = hilbert::OperatorMatrix::identity(P.basis());
      for (char c : t.word) w = w * (c == 'P' ? P : Q);
      sum = sum + t.coef * w;
    }
    return sum;
  }

 private:
  std::vector<Term> terms_;
};

}  // namespace eqlab::geometry
