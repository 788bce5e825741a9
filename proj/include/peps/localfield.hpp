#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "peps/finitefield.hpp"

namespace peps {

// Rational number val/den with den | e, measuring p-adic size (normalized so
// v(p) = 1).  infinite marks an exact zero.
struct Valuation {
  long long num = 0;
  long long den = 1;
  bool infinite = false;

  std::string to_string() const;
  friend bool operator==(const Valuation& a, const Valuation& b) {
    return a.infinite == b.infinite && (a.infinite || (a.num == b.num && a.den == b.den));
  }
};

struct FieldCtx;
using FieldHandle = std::shared_ptr<const FieldCtx>;

// Raw digit grid of one field element, used for the immutable context caches.
struct RawElem {
  long long val = 0;   // shift in pi-digits
  long long prec = 0;  // absolute precision in pi-digits
  std::vector<std::uint64_t> d;  // e*f entries, index j*f + i
};

// Context for the working field: the unramified degree-f extension of Q_p,
// optionally with a root pi of X^{p-1} = -p adjoined (for p = 2 this means
// pi = -2).  Absolute precision is counted in pi-adic digits throughout, so
// one power of p spans e = p-1 digits in the ramified case.
//
// Contexts are immutable after construction; all caches (Teichmueller lifts,
// the additive-character series, its value at 1) are filled eagerly so a
// handle can be shared across threads without synchronization.
struct FieldCtx {
  long long p = 0;
  int f = 1;
  bool use_pi = false;
  long long precision = 0;  // default absolute precision N, pi-digits

  int e = 1;                // ramification index
  int levels = 0;           // p-power levels carried per digit-grid entry
  std::uint64_t pcap = 0;   // p^levels, the working coefficient modulus
  FqHandle residue;         // F_q, q = p^f

  std::vector<RawElem> teich_cache;   // indexed by residue encoding, size q
  std::vector<RawElem> zeta_cache;    // zeta^k, k in [0,p); zeta = theta(1)
  std::vector<RawElem> theta_cache;   // additive-character series coefficients
  long long theta_terms = 0;          // number of cached series coefficients

  long long capacity() const { return static_cast<long long>(e) * (levels - 1); }
};

// Builds a context.  Throws std::invalid_argument on a non-prime p, f outside
// [1,2], or precision outside [4, 60].  The series caches are only built when
// use_pi is set (they live in the ramified field).
FieldHandle make_context(long long p, int f, bool use_pi, long long precision);

// Element of the working field with tracked absolute precision: the digit
// grid stores the unit part, val_ counts the pi-power carried in front, and
// digits at or above prec_ are meaningless and kept clamped to zero.
class PadicNumber {
 public:
  PadicNumber() = default;

  static PadicNumber zero(const FieldHandle& K);  // exact zero
  static PadicNumber from_integer(const FieldHandle& K, long long n);
  static PadicNumber from_rational(const FieldHandle& K, long long num, long long den);
  static PadicNumber lift(const FieldHandle& K, const FqElem& x);  // coordinate lift
  static PadicNumber pi(const FieldHandle& K);    // the uniformizer pi (or p if !use_pi)
  static PadicNumber q_power(const FieldHandle& K, long long k);  // q^k, k arbitrary

  const FieldHandle& field() const { return ctx_; }
  bool valid() const { return static_cast<bool>(ctx_); }

  friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b);
  PadicNumber operator-() const;
  PadicNumber inverse() const;       // throws std::domain_error if zero to precision
  PadicNumber pow(long long k) const;

  // Exact pi-adic valuation of the stored value; throws std::domain_error on
  // an element that is zero to its precision (the valuation is then only
  // bounded below by known_precision()).
  long long valuation_pi() const;
  Valuation valuation() const;       // p-normalized; infinite for (apparent) zero
  bool is_zero_to_precision() const;
  bool is_exact_zero() const;
  long long known_precision() const; // absolute, pi-digits
  PadicNumber truncated(long long new_prec) const;  // lower precision view

  FqElem residue() const;  // reduction mod pi; requires valuation >= 0

  // Canonical text form "v=<shift>;digits=<levels>;prec=<n>": the shift is
  // the pi-valuation as a reduced fraction of a p-power ("inf" for zero), and
  // each p-power level lists its nonzero unit-part digits as
  // <unramified-index>:<pi-power>:<value> triples.
  std::string to_string() const;
  static PadicNumber parse(const FieldHandle& K, const std::string& text);

  // Equality means agreement on every digit both sides know.
  friend bool operator==(const PadicNumber& a, const PadicNumber& b);
  friend bool operator!=(const PadicNumber& a, const PadicNumber& b);

  // Number of leading pi-digits on which a and b agree, capped by the shared
  // precision.  The workhorse behind every numerical check in the project.
  friend long long agree_digits(const PadicNumber& a, const PadicNumber& b);

  RawElem raw() const;
  static PadicNumber from_raw(const FieldHandle& K, RawElem r);

 private:
  FieldHandle ctx_;
  long long val_ = 0;
  long long prec_ = 0;
  std::vector<std::uint64_t> d_;

  void normalize();
  friend FieldHandle make_context(long long, int, bool, long long);
};

// Convenience: true when a and b agree to min(known precision) - guard digits.
bool agree(const PadicNumber& a, const PadicNumber& b, long long guard = 2);

// Teichmueller lift: the unique root of X^q = X reducing to x.  Absolute
// precision is the context default.
PadicNumber teichmuller(const FieldHandle& K, const FqElem& x);

// The splitting series theta(t) = sum c_n t^n attached to pi, evaluated at a
// Teichmueller point (or zero).  theta(1) is a primitive p-th root of unity
// congruent to 1 + pi mod pi^2, and over F_q the product of theta at the
// p-power conjugates of teich(x) equals psi(x) := zeta^Tr(x).
PadicNumber dwork_theta(const FieldHandle& K, const PadicNumber& teich_pt);
PadicNumber zeta_root(const FieldHandle& K);          // theta(1)
PadicNumber psi_value(const FieldHandle& K, long long trace_mod_p);  // zeta^t

// The p-adic Gamma function at num/den (den prime to p), by the factorial
// product over an integer approximant congruent to the argument mod p^M.
PadicNumber padic_gamma(const FieldHandle& K, long long num, long long den);
// Same, sharing a single product sweep across all arguments.
std::vector<PadicNumber> padic_gamma_batch(const FieldHandle& K,
                                           const std::vector<std::pair<long long, long long>>& args);

bool same_context(const FieldHandle& a, const FieldHandle& b);

}  // namespace peps
