#pragma once

#include <string>
#include <utility>
#include <vector>

#include "peps/epsilon.hpp"

namespace peps {

// Rank-one coefficient object on an open subset U of the projective line
// over F_q: a product of Kummer factors (x - s_i)^{a_i} with pairwise
// distinct rational ramification points s_i and exponents a_i mod (q-1), an
// exponential (Dwork) factor with parameter c (c = 0 means none), a global
// unramified scalar u0 scaling every Frobenius eigenvalue, and a Tate twist
// tw scaling the linearized Frobenius at a degree-n point by q^{-n*tw}.
//
// U is the complement of the ramification locus; puncture_infinity removes
// the point at infinity from U even when the object is unramified there
// (infinity is always removed when ramified).
struct RankOneGlobalModule {
  FieldHandle K;
  std::vector<std::pair<FqElem, long long>> points;  // (s_i, a_i), a_i nonzero mod q-1
  FqElem dwork_c;
  PadicNumber u0;
  long long tw = 0;
  bool puncture_infinity = false;

  int rank() const { return 1; }
  // Tame exponent at infinity forced by the Kummer factors: -sum a_i mod q-1.
  long long exponent_at_infinity() const;
  bool ramified_at_infinity() const;   // nonzero exponent or Dwork part
  bool infinity_in_u() const;
  // No Kummer points and no Dwork part: the constant object twisted by u0, tw.
  bool geometrically_trivial() const;

  std::string to_string() const;
};

// Validates field membership, deduplicates nothing: points must be pairwise
// distinct.  Exponents are reduced mod q-1 and zero exponents are dropped.
// The scalar u0 must be nonzero to precision.
RankOneGlobalModule make_global_module(const FieldHandle& K,
                                       std::vector<std::pair<FqElem, long long>> points,
                                       const FqElem& dwork_c, const PadicNumber& u0,
                                       long long tw, bool puncture_infinity = false);

RankOneGlobalModule tate_twist(const RankOneGlobalModule& g, long long k);
RankOneGlobalModule scalar_twist(const RankOneGlobalModule& g, const PadicNumber& c);
// Parameter negation plus the Poincare-duality twist on a curve:
// (-a_i, -c, u0^{-1}, -tw + 1).  Punctures are preserved.
RankOneGlobalModule dual_module(const RankOneGlobalModule& g);

// Frobenius eigenvalue at a rational point x of U over F_q, or over F_{q^n}
// for a point of the tower extension: product of teich(Nm(x - s_i))^{a_i},
// the additive character at Tr(c*x), and the degree-n twist u0^n q^{-n*tw}.
// Throws std::invalid_argument when x is a ramification point.
PadicNumber frobenius_eigenvalue(const RankOneGlobalModule& g, const FqElem& x);
PadicNumber frobenius_eigenvalue(const RankOneGlobalModule& g, const FqTower& tower,
                                 const FqElem& x);
// Eigenvalue of the degree-n point at infinity (requires infinity in U).
PadicNumber infinity_eigenvalue(const RankOneGlobalModule& g, int n);

// Local restriction at a ramification point s, carried to the origin
// coordinate u = x - s: tame exponent a_s, no wild part, unramified scalar
// u0 * psi(Tr(c*s)) * prod_{j != s} teich(s - s_j)^{a_j}, twist tw.
RankOneLocalModule local_at(const RankOneGlobalModule& g, const FqElem& s);
// Local restriction at infinity in the coordinate u = 1/x: tame exponent
// -sum a_i, wild parameter c (slope one when nonzero), scalar u0, twist tw.
RankOneLocalModule local_at_infinity(const RankOneGlobalModule& g);

// Dimensions of compactly supported cohomology of U with these coefficients.
// h0 needs global triviality on all of P^1; h2 needs geometric triviality;
// h1 fills in via the Euler characteristic with the wild defect at infinity.
struct CohomologyShape {
  int h0 = 0;
  int h1 = 0;
  int h2 = 0;
  int punctures = 0;         // number of points removed from P^1
  int irregularity = 0;      // wild defect at infinity (0 or 1)
};

CohomologyShape cohomology_shape(const RankOneGlobalModule& g);

// Degree bound for the middle cohomology L-factor (= h1).
int expected_h1(const RankOneGlobalModule& g);

// L-function data: N(t) = det(1 - tF; H^1_c) of degree h1, assembled from
// the point-count power sums S_n by the exponential recurrence and division
// by the h0/h2 Euler factors.  plain carries the untwisted coefficients;
// twisted is the (-1)-twist display N(qt).  The two coefficients past the
// certified degree are computed as witnesses and must vanish to working
// precision (throws std::runtime_error otherwise); tail_digits records the
// depth to which they were checked.
struct LPolynomial {
  CohomologyShape shape;
  std::vector<PadicNumber> plain;
  std::vector<PadicNumber> twisted;
  PadicNumber e0;            // h0 eigenvalue u0 q^{-tw} (meaningful when h0 = 1)
  PadicNumber e2;            // h2 eigenvalue q * u0 q^{-tw} (when h2 = 1)
  long long tail_digits = 0;
};

// workers > 1 splits each point-count sum over contiguous chunks of the
// affine line and combines partial sums in chunk order (bit-deterministic).
// max_degree_override replaces the certified degree bound when >= 0.
LPolynomial l_polynomial(const RankOneGlobalModule& g, int workers = 1,
                         long long max_degree_override = -1);

// Alternating product det(-F; H^0)^{-1} det(-F; H^1) det(-F; H^2)^{-1} on the
// plain (untwisted) cohomology: the constant of the functional equation and
// the left side of the product formula.
PadicNumber global_epsilon(const LPolynomial& l);
PadicNumber global_epsilon(const RankOneGlobalModule& g, int workers = 1);
// The (-1)-twist display value: plain epsilon times q^{h0 - h1 + h2}.
PadicNumber epsilon_display(const LPolynomial& l);

// One verification record: two independently computed values, their labeled
// constituents, and the digit agreement against a required threshold.
struct EpsilonReport {
  std::string module_text;
  std::string omega_text;
  PadicNumber lhs;
  PadicNumber rhs;
  std::vector<std::pair<std::string, std::string>> factors;
  long long agreed = 0;
  long long required = 0;
  bool pass = false;
};

// Product formula: global epsilon of the cohomology route against
// q^{rk} * prod over U-points of (q^{ord} det F_x)^{ord_x omega != 0}
//        * prod over removed points of epsilon_natural(local data, omega jet).
// omega must have rational zeros and poles (throws std::invalid_argument).
EpsilonReport verify_product_formula(const RankOneGlobalModule& g,
                                     const RationalForm& omega,
                                     long long required_digits, int workers = 1);

// Puncturing identity at an unramified infinity: removing infinity from U
// trades the global epsilon against the local epsilon factors of the finite
// ramification points paired with -dx.  Requires exponent_at_infinity() == 0
// and no Dwork part.
EpsilonReport verify_puncture_formula(const RankOneGlobalModule& g,
                                      long long required_digits, int workers = 1);

struct FunceqReport {
  std::string module_text;
  PadicNumber epsilon;
  int compared = 0;        // coefficient pairs checked
  long long agreed = 0;    // minimum digit agreement over the pairs
  long long required = 0;
  bool pass = false;
};

// Functional equation of the full L-function against the dual module:
// cross-multiplied coefficient identity
//   N(t) * revD'(t) == epsilon * revN'(t) * D(t)
// with reversals taken at the structural degrees h1 and h0 + h2.
FunceqReport functional_equation_check(const RankOneGlobalModule& g,
                                       long long required_digits, int workers = 1);

// Fourier images of the shriek extensions at every finite ramification point
// of a tame module (Dwork part must vanish); checks that the summed generic
// ranks match the count of finite ramification points.
std::vector<std::pair<FqElem, LocalFourierImage>> stationary_phase(
    const RankOneGlobalModule& g);

}  // namespace peps
