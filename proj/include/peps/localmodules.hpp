#pragma once

#include <string>
#include <utility>
#include <vector>

#include "peps/characters.hpp"
#include "peps/finitefield.hpp"
#include "peps/localfield.hpp"

namespace peps {

// Extension behaviour across the puncture of the formal disk.  The generic
// tag carries only the differential datum; epsilon evaluation needs one of
// the two extension tags.
enum class Boundary { generic, shriek, plus };

// Rank-one local object at a point with residue field k = F_q: a tame part
// with exponent a mod (q-1), an optional slope-one wild part with parameter
// s in k (s = 0 means no wild part), an unramified scalar c (nonzero, not
// necessarily a unit: Fourier images carry Gauss-sum weights), and a Tate
// twist n (twisting by n scales the linearized Frobenius by q^{-n}).
struct RankOneLocalModule {
  FieldHandle K;
  long long a = 0;
  FqElem s;
  PadicNumber c;
  long long n = 0;
  Boundary b = Boundary::generic;

  int rank() const { return 1; }
  int irregularity() const { return s.is_zero() ? 0 : 1; }
  int slope_max() const { return irregularity(); }
  // Conductor exponent of the attached character: 0 unramified, 1 tame,
  // 2 with a wild part.
  int conductor() const { return !s.is_zero() ? 2 : (a != 0 ? 1 : 0); }
  bool is_trivializable() const { return a == 0 && s.is_zero(); }

  std::string to_string() const;
  static RankOneLocalModule parse(const FieldHandle& K, const std::string& text);
};

RankOneLocalModule make_local_module(const FieldHandle& K, long long a, const FqElem& s,
                                     const PadicNumber& c, long long n, Boundary b);
RankOneLocalModule unit_module(const FieldHandle& K);

RankOneLocalModule tensor(const RankOneLocalModule& m1, const RankOneLocalModule& m2);

enum class DualVariant { plain, d_eta };
RankOneLocalModule dual(const RankOneLocalModule& m, DualVariant variant = DualVariant::plain);
RankOneLocalModule tate_twist(const RankOneLocalModule& m, long long k);

// Punctual object: a skyscraper with the listed Frobenius eigenvalues and a
// common Tate twist.
struct PunctualModule {
  FieldHandle K;
  std::vector<PadicNumber> eigenvalues;
  long long n = 0;
};

// Formal integer combination of rank-one and punctual summands.  Negative
// multiplicities are legal as bookkeeping; evaluation requires effectivity.
struct HolonomicLocalObject {
  std::vector<std::pair<RankOneLocalModule, int>> modules;
  std::vector<std::pair<PunctualModule, int>> punctuals;

  bool is_effective() const;
};

HolonomicLocalObject direct_sum(const HolonomicLocalObject& x, const HolonomicLocalObject& y);
HolonomicLocalObject as_holonomic(const RankOneLocalModule& m);
HolonomicLocalObject as_holonomic(const PunctualModule& v);

// Rank-one character of the Weil group with its linearized Frobenius value:
// on Teichmueller units it acts by teich^{-a}, on the uniformizer by phi,
// and when cond = 2 on principal units 1 + v u + ... by psi(s * v).
struct WeilDeligneChar {
  FieldHandle K;
  long long a = 0;
  int cond = 0;
  FqElem s;
  PadicNumber phi;

  PadicNumber eval_unit(const FqElem& v) const;        // Teichmueller part
  PadicNumber eval_one_unit(const FqElem& v1_over_v0) const;  // wild part
};

WeilDeligneChar wd_char(const RankOneLocalModule& m);

// Truncated Laurent datum v0 u^m + v1 u^{m+1} + ...; depth two suffices for
// conductor <= 2.
struct LaurentJet {
  long long m = 0;
  FqElem v0;
  FqElem v1;
};

// Character value on the jet: phi^m * teich(v0)^{-a} * wild(v1/v0).
PadicNumber rec_eval(const WeilDeligneChar& chi, const LaurentJet& f);
PadicNumber rec_eval(const RankOneLocalModule& m, const LaurentJet& f);

// One rank-one summand of the Fourier transform at the far puncture.  The
// phase of a nonzero source point s0 is stored in module.s; the bookkeeping
// fields describe the slope < 1 part.
struct LocalFourierImage {
  RankOneLocalModule module;  // at the far puncture, Tate twist included
  int rank_out = 1;
  int irr_out = 0;
  int cond_bound = 1;
  bool slope_below_one = true;
};

// Fourier transform of a shriek-extended tame rank-one module placed at the
// rational point s0.  Checks the rank and irregularity laws on every call.
LocalFourierImage local_fourier(const RankOneLocalModule& m, const FqElem& s0);

bool same_module(const RankOneLocalModule& m1, const RankOneLocalModule& m2);

}  // namespace peps
