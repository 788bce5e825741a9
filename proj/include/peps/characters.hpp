#pragma once

#include <vector>

#include "peps/localfield.hpp"

namespace peps {

// Multiplicative character of F_q^*: x -> teich(x)^a.
struct MultChar {
  FieldHandle K;
  long long a = 0;  // stored in [0, q-1)

  // Value at x != 0; throws std::domain_error at zero.
  PadicNumber eval(const FqElem& x) const;
  // Value at the norm of x from F_{q^n}, the pushforward along the tower.
  PadicNumber eval_norm(const FqTower& tower, const FqElem& x) const;
};

MultChar mult_char(const FieldHandle& K, long long a);

// Additive character of F_q: x -> zeta^Tr(s x), zeta = theta(1).
struct AddChar {
  FieldHandle K;
  FqElem s;

  PadicNumber eval(const FqElem& x) const;
  // Value on x in F_{q^n} with s embedded upstairs and the absolute trace.
  PadicNumber eval_ext(const FqTower& tower, const FqElem& x) const;
};

AddChar add_char(const FieldHandle& K, const FqElem& s);

// -sum_{x in F_q^*} teich(x)^a zeta^Tr(x).  Normalized so the value at a = 0
// is 1 and the pi-adic valuation equals the base-p digit sum of a.
PadicNumber gauss_sum(const FieldHandle& K, long long a);

// One pass over F_{q^n}^* as powers of a fixed generator g, bucketed by
// (exponent mod (q-1), absolute trace).  Every extension character sum is a
// linear combination of the bucket counts, so computing the walk once and
// reusing it across exponents turns an O(q^n) job per exponent into O(q^n)
// total plus O(q p) per exponent.
struct ExtensionWalk {
  FqElem generator;
  std::vector<long long> counts;  // row-major (q-1) x p
};

ExtensionWalk extension_walk(const FieldHandle& K, const FqTower& tower);

// The same character sum over F_{q^n}^*, with chi_a composed with the norm
// and the additive character with the trace.  Enumerates the extension as
// powers of a fixed generator so each value needs one field multiplication.
PadicNumber gauss_sum_ext(const FieldHandle& K, const FqTower& tower, long long a);
PadicNumber gauss_sum_ext(const FieldHandle& K, const FqTower& tower,
                          const ExtensionWalk& walk, long long a);

// sum_{x != 0,1} chi_a(x) chi_b(1-x).
PadicNumber jacobi_sum(const FieldHandle& K, long long a, long long b);

// Two-route comparison of a Gauss sum against the Gamma-product closed form
//   gauss_sum(a) = pi^{s_p(a)} * prod_i Gamma_p(<p^i a / (q-1)>),
// which also pins the valuation.  The two sides share no code: the left is a
// character sum through the splitting series, the right a factorial sweep.
struct GaussProductReport {
  long long a = 0;
  long long valuation_expected = 0;
  long long valuation_seen = 0;
  PadicNumber lhs, rhs;
  long long agreed = 0;
  long long required = 0;
  bool pass = false;
};

GaussProductReport gross_koblitz_check(const FieldHandle& K, long long a, long long required_digits);

// Extension-versus-power comparison gauss_sum_ext(a over F_{q^n}) = gauss_sum(a)^n.
struct ExtensionGaussReport {
  long long a = 0;
  int n = 1;
  PadicNumber lhs, rhs;
  long long agreed = 0;
  long long required = 0;
  bool pass = false;
};

ExtensionGaussReport hasse_davenport_check(const FieldHandle& K, const FqTower& tower,
                                           long long a, long long required_digits);
ExtensionGaussReport hasse_davenport_check(const FieldHandle& K, const FqTower& tower,
                                           const ExtensionWalk& walk, long long a,
                                           long long required_digits);

}  // namespace peps
