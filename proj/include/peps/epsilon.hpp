#pragma once

#include <string>

#include "peps/localmodules.hpp"

namespace peps {

// Rational differential form f(x) dx on the projective line, f = num/den.
struct RationalForm {
  FqPoly num;
  FqPoly den;

  std::string to_string() const;
};

RationalForm make_form(const FqPoly& num, const FqPoly& den);

// Local expansion datum of a form at a point: order m = ord_x(omega) and the
// first two coefficients of the unit part of omega / (u^m du) in the local
// coordinate (u = x - s at a finite rational point, u = 1/x at infinity).
struct LocalFormJet {
  long long m = 0;
  FqElem w0;
  FqElem w1;
};

LocalFormJet form_jet(const RationalForm& omega, const ClosedPoint& x);

// Abelian local constant of a rank-one character against the form jet.
// Normalization: unramified chi with uniformizer value phi and ord m gives
// -q^m phi^{m+1}; ramified chi gives the finite Tate sum
//   q^m * sum over units v of (O/m^cond)^* of chi(v u^{-(m+cond)})^{-1}
//                                  * psi(Res(v u^{-(m+cond)} omega)).
PadicNumber epsilon_natural(const WeilDeligneChar& chi, const LocalFormJet& j);
PadicNumber epsilon_natural(const RankOneLocalModule& m, const LocalFormJet& j);

// Variant with the inertia-invariant determinant removed:
// epsilon_sharp = epsilon_natural * det(-F; inertia invariants)^{-1}.
PadicNumber epsilon_sharp(const RankOneLocalModule& m, const LocalFormJet& j);

// Epsilon of an effective holonomic object: product over summands, with the
// punctual rule (-q * eigenvalue)^{-1}, the shriek rule epsilon_natural^{-1},
// and the plus rule derived from the kernel/cokernel skyscrapers of the
// boundary exact sequence.
PadicNumber epsilon_holonomic(const HolonomicLocalObject& obj, const LocalFormJet& j);

struct DetFormulaReport {
  PadicNumber lhs;
  PadicNumber rhs;
  long long agreed = 0;
  long long required = 0;
  bool pass = false;
};

// Two-route determinant identity for a tame rank-one module M placed at the
// origin: epsilon_natural(M, du) against the reciprocity value of the
// twisted determinant of the Fourier transform of the shriek extension.
DetFormulaReport determinant_formula_check(const RankOneLocalModule& m, long long required_digits);

}  // namespace peps
