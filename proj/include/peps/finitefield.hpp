#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace peps {

// Context for F_q, q = p^d, presented as F_p[x]/(m) where m is the monic
// irreducible polynomial of degree d whose coefficient vector (c_0,...,c_{d-1})
// encodes the least integer sum(c_i p^i).  Fixing m this way makes every
// derived object (element encodings, closed points, towers) reproducible
// across runs and machines.
struct FqCtx {
  long long p = 0;  // prime characteristic
  int d = 1;        // extension degree over F_p
  long long q = 0;  // p^d

  std::vector<long long> modulus;  // monic, length d+1, coefficients in [0,p)

  // Cached structure constants, filled by make_fq:
  std::vector<std::vector<long long>> red_rows;   // x^(d+k) mod m, k = 0..d-2
  std::vector<std::vector<long long>> frob_rows;  // (x^i)^p mod m, i = 0..d-1
  std::vector<long long> trace_row;               // Tr(x^i) in [0,p), i = 0..d-1
};

using FqHandle = std::shared_ptr<const FqCtx>;

// Builds the canonical F_{p^d}.  Throws std::invalid_argument for a non-prime
// p or a degree outside [1, 12].
FqHandle make_fq(long long p, int d);

// Element of F_q as a coordinate vector in the power basis 1, x, ..., x^{d-1}.
class FqElem {
 public:
  FqElem() = default;
  FqElem(FqHandle ctx, std::vector<long long> coords);

  static FqElem zero(const FqHandle& ctx);
  static FqElem one(const FqHandle& ctx);
  // Integer encoding sum(c_i p^i) <-> coordinate vector, in [0, q).
  static FqElem from_encoding(const FqHandle& ctx, long long code);

  const FqHandle& ctx() const { return ctx_; }
  const std::vector<long long>& coords() const { return coords_; }
  long long encoding() const;
  bool is_zero() const;

  FqElem operator-() const;
  friend FqElem operator+(const FqElem& a, const FqElem& b);
  friend FqElem operator-(const FqElem& a, const FqElem& b);
  friend FqElem operator*(const FqElem& a, const FqElem& b);
  friend FqElem operator/(const FqElem& a, const FqElem& b);
  friend bool operator==(const FqElem& a, const FqElem& b);
  friend bool operator!=(const FqElem& a, const FqElem& b);

  FqElem inverse() const;        // throws std::domain_error on zero
  FqElem pow(long long k) const; // negative k allowed for nonzero elements
  FqElem frobenius() const;      // x -> x^p
  long long trace_to_prime() const;  // Tr_{F_q/F_p}, value in [0,p)

  std::string to_string() const;     // decimal encoding

 private:
  FqHandle ctx_;
  std::vector<long long> coords_;
};

// Extension pair F_{q^n} / F_q with the embedding fixed once at construction:
// the base generator is sent to the least-encoded root of the base modulus in
// the extension field (identity when n = 1).
struct FqTower {
  FqHandle base;
  FqHandle ext;
  int n = 1;

  std::vector<FqElem> embed_basis;             // images of 1, x, ..., x^{f-1}
  std::vector<std::vector<long long>> section; // solves ext coords -> base coords

  FqElem embed(const FqElem& xb) const;
  // x -> x^q, the relative Frobenius generating Gal(F_{q^n}/F_q).
  FqElem q_frobenius(const FqElem& xe) const;
  FqElem trace_to_base(const FqElem& xe) const;
  FqElem norm_to_base(const FqElem& xe) const;

 private:
  friend FqTower make_tower(const FqHandle& base, int n);
  std::vector<std::vector<long long>> qfrob_rows_;  // (x^i)^q in ext coords
  FqElem pull_back(const FqElem& xe) const;         // inverse of embed on its image
};

FqTower make_tower(const FqHandle& base, int n);

// Dense polynomial over F_q, little-endian coefficients, normalized so the
// leading coefficient is nonzero (the zero polynomial has an empty vector).
class FqPoly {
 public:
  FqPoly() = default;
  FqPoly(FqHandle ctx, std::vector<FqElem> coeffs);
  static FqPoly zero(const FqHandle& ctx);
  static FqPoly constant(const FqElem& c);
  static FqPoly from_encodings(const FqHandle& ctx, const std::vector<long long>& codes);

  const FqHandle& ctx() const { return ctx_; }
  const std::vector<FqElem>& coeffs() const { return coeffs_; }
  int degree() const;  // -1 for the zero polynomial
  bool is_zero() const { return coeffs_.empty(); }
  bool is_monic() const;
  FqElem leading() const;

  friend FqPoly operator+(const FqPoly& a, const FqPoly& b);
  friend FqPoly operator-(const FqPoly& a, const FqPoly& b);
  friend FqPoly operator*(const FqPoly& a, const FqPoly& b);
  friend bool operator==(const FqPoly& a, const FqPoly& b);
  friend bool operator!=(const FqPoly& a, const FqPoly& b);

  FqPoly monic() const;
  FqElem eval(const FqElem& x) const;
  // Division with remainder; throws on zero divisor.
  static void divmod(const FqPoly& a, const FqPoly& b, FqPoly& quo, FqPoly& rem);
  static FqPoly gcd(const FqPoly& a, const FqPoly& b);  // monic gcd
  FqPoly derivative() const;

  std::string to_string() const;  // comma-joined coefficient encodings, low to high
 private:
  FqHandle ctx_;
  std::vector<FqElem> coeffs_;
  void normalize();
};

// Closed point of the projective line over F_q: either the point at infinity
// or the monic irreducible minimal polynomial of a Galois orbit in A^1.
struct ClosedPoint {
  bool at_infinity = false;
  FqPoly minimal;   // monic irreducible; empty when at_infinity
  int degree = 1;

  static ClosedPoint infinity_point();
  static ClosedPoint finite_point(FqPoly minimal_poly);
  static ClosedPoint rational(const FqElem& s);  // x - s

  // "inf" or the coefficient list of the minimal polynomial.
  std::string to_string() const;
  static ClosedPoint parse(const FqHandle& ctx, const std::string& text);
};

// All closed points of P^1/F_q of degree <= max_degree, infinity first, then
// finite points ordered by (degree, coefficient encoding).  Guarded against
// enumerations beyond 10^6 candidates.
std::vector<ClosedPoint> closed_points(const FqHandle& ctx, int max_degree);

// Expected number of degree-d monic irreducibles (necklace count), for tests.
long long irreducible_count(long long q, int d);

// Roots of the minimal polynomial of x in F_{q^n} (empty unless deg(x) | n).
// Infinity has no residues in this affine chart.
std::vector<FqElem> residues_of_point(const ClosedPoint& x, const FqTower& tower);

bool same_field(const FqHandle& a, const FqHandle& b);

}  // namespace peps
