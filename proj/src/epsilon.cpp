#include "peps/epsilon.hpp"

#include <sstream>
#include <stdexcept>

namespace peps {

namespace {

// Coefficients of f(s + u) for the Taylor shift at a rational point.
std::vector<FqElem> shift_coeffs(const FqPoly& f, const FqElem& s) {
  const FqHandle& k = f.ctx();
  const int d = f.degree();
  std::vector<FqElem> out(static_cast<size_t>(d) + 1, FqElem::zero(k));
  // Horner in the shifted variable: run the synthetic division d+1 times.
  std::vector<FqElem> work = f.coeffs();
  for (int i = 0; i <= d; ++i) {
    FqElem acc = FqElem::zero(k);
    for (int j = d - i; j >= 0; --j) {
      acc = acc * s + work[static_cast<size_t>(j)];
      work[static_cast<size_t>(j)] = acc;
    }
    out[static_cast<size_t>(i)] = work[0];
    work.erase(work.begin());
  }
  return out;
}

long long lowest_nonzero(const std::vector<FqElem>& c) {
  for (size_t i = 0; i < c.size(); ++i)
    if (!c[i].is_zero()) return static_cast<long long>(i);
  throw std::logic_error("form_jet: zero polynomial slipped through");
}

}  // namespace

RationalForm make_form(const FqPoly& num, const FqPoly& den) {
  if (num.is_zero()) throw std::invalid_argument("make_form: zero form");
  if (den.is_zero()) throw std::invalid_argument("make_form: zero denominator");
  if (!same_field(num.ctx(), den.ctx()))
    throw std::invalid_argument("make_form: coefficient field mismatch");
  return RationalForm{num, den};
}

std::string RationalForm::to_string() const {
  std::ostringstream out;
  out << "(" << num.to_string() << ")/(" << den.to_string() << ") dx";
  return out.str();
}

LocalFormJet form_jet(const RationalForm& omega, const ClosedPoint& x) {
  const FqHandle& k = omega.num.ctx();
  LocalFormJet j;
  if (!x.at_infinity) {
    if (x.degree != 1)
      throw std::invalid_argument("form_jet: only rational finite points are supported");
    // x - s is the minimal polynomial, so s is minus its constant term.
    const FqElem s = -x.minimal.coeffs()[0];
    const auto nc = shift_coeffs(omega.num, s);
    const auto dc = shift_coeffs(omega.den, s);
    const long long on = lowest_nonzero(nc), od = lowest_nonzero(dc);
    j.m = on - od;
    const FqElem n0 = nc[static_cast<size_t>(on)];
    const FqElem d0 = dc[static_cast<size_t>(od)];
    const FqElem n1 = static_cast<size_t>(on) + 1 < nc.size() ? nc[static_cast<size_t>(on) + 1]
                                                              : FqElem::zero(k);
    const FqElem d1 = static_cast<size_t>(od) + 1 < dc.size() ? dc[static_cast<size_t>(od) + 1]
                                                              : FqElem::zero(k);
    j.w0 = n0 / d0;
    j.w1 = (n1 - j.w0 * d1) / d0;
    return j;
  }
  // At infinity, u = 1/x and dx = -u^{-2} du; reversing the coefficient
  // vectors gives the expansions of num(1/x) and den(1/x) in u.
  const auto& nc = omega.num.coeffs();
  const auto& dc = omega.den.coeffs();
  const int dn = omega.num.degree(), dd = omega.den.degree();
  j.m = static_cast<long long>(dd) - dn - 2;
  const FqElem rn0 = nc[static_cast<size_t>(dn)];
  const FqElem rd0 = dc[static_cast<size_t>(dd)];
  const FqElem rn1 = dn >= 1 ? nc[static_cast<size_t>(dn) - 1] : FqElem::zero(k);
  const FqElem rd1 = dd >= 1 ? dc[static_cast<size_t>(dd) - 1] : FqElem::zero(k);
  const FqElem u0 = rn0 / rd0;
  j.w0 = -u0;
  j.w1 = -(rn1 - u0 * rd1) / rd0;
  return j;
}

PadicNumber epsilon_natural(const WeilDeligneChar& chi, const LocalFormJet& j) {
  const FieldHandle& K = chi.K;
  const long long q = K->residue->q;
  if (chi.cond == 0) return -PadicNumber::q_power(K, j.m) * chi.phi.pow(j.m + 1);

  if (j.w0.is_zero()) throw std::invalid_argument("epsilon_natural: degenerate form jet");
  const long long d = chi.cond;
  const long long aa = ((chi.a % (q - 1)) + (q - 1)) % (q - 1);
  PadicNumber acc = PadicNumber::zero(K);
  for (long long v0c = 1; v0c < q; ++v0c) {
    const FqElem v0 = FqElem::from_encoding(K->residue, v0c);
    const PadicNumber tame = teichmuller(K, v0).pow(aa);
    if (d == 1) {
      acc = acc + tame * psi_value(K, (v0 * j.w0).trace_to_prime());
      continue;
    }
    // cond = 2: the unit v0(1 + v1 u) pairs the residue v0(w1 + v1 w0)
    // against the inverted wild part psi(-s v1).
    PadicNumber inner = PadicNumber::zero(K);
    for (long long v1c = 0; v1c < q; ++v1c) {
      const FqElem v1 = FqElem::from_encoding(K->residue, v1c);
      const FqElem arg = v0 * j.w1 + v1 * (v0 * j.w0 - chi.s);
      inner = inner + psi_value(K, arg.trace_to_prime());
    }
    acc = acc + tame * inner;
  }
  return PadicNumber::q_power(K, j.m) * chi.phi.pow(j.m + d) * acc;
}

PadicNumber epsilon_natural(const RankOneLocalModule& m, const LocalFormJet& j) {
  return epsilon_natural(wd_char(m), j);
}

PadicNumber epsilon_sharp(const RankOneLocalModule& m, const LocalFormJet& j) {
  const PadicNumber nat = epsilon_natural(m, j);
  if (m.conductor() != 0) return nat;  // no inertia invariants to remove
  return nat * (-wd_char(m).phi).inverse();
}

PadicNumber epsilon_holonomic(const HolonomicLocalObject& obj, const LocalFormJet& j) {
  if (!obj.is_effective())
    throw std::invalid_argument("epsilon_holonomic: virtual objects cannot be evaluated");
  FieldHandle K;
  if (!obj.modules.empty()) K = obj.modules.front().first.K;
  else if (!obj.punctuals.empty()) K = obj.punctuals.front().first.K;
  else throw std::invalid_argument("epsilon_holonomic: empty object");

  PadicNumber r = PadicNumber::from_integer(K, 1);
  for (const auto& [v, mult] : obj.punctuals) {
    PadicNumber one = PadicNumber::from_integer(K, 1);
    for (const auto& eig : v.eigenvalues)
      one = one * (-(eig * PadicNumber::q_power(K, 1 - v.n))).inverse();
    r = r * one.pow(mult);
  }
  for (const auto& [m, mult] : obj.modules) {
    PadicNumber one;
    switch (m.b) {
      case Boundary::shriek:
        one = epsilon_natural(m, j).inverse();
        break;
      case Boundary::plus: {
        // Boundary exact sequence: the kernel skyscraper carries the extra
        // Tate twist, the cokernel none; both exist only when the module
        // trivializes, and together they contribute exactly q^{-1}.
        one = epsilon_natural(m, j).inverse();
        if (m.is_trivializable()) one = one * PadicNumber::q_power(m.K, -1);
        break;
      }
      default:
        throw std::invalid_argument("epsilon_holonomic: summand lacks a boundary tag");
    }
    r = r * one.pow(mult);
  }
  return r;
}

DetFormulaReport determinant_formula_check(const RankOneLocalModule& m, long long required_digits) {
  if (!m.s.is_zero())
    throw std::invalid_argument("determinant_formula_check: only tame modules are supported");
  const FieldHandle& K = m.K;
  const FqHandle& k = K->residue;

  LocalFormJet du;
  du.m = 0;
  du.w0 = FqElem::one(k);
  du.w1 = FqElem::zero(k);

  DetFormulaReport rep;
  rep.required = required_digits;
  rep.lhs = epsilon_natural(m, du);

  RankOneLocalModule shrieked = m;
  shrieked.b = Boundary::shriek;
  const long long gamma = m.rank() + m.irregularity();
  LocalFourierImage img = local_fourier(shrieked, FqElem::zero(k));
  LaurentJet uprime;
  uprime.m = 1;
  uprime.v0 = FqElem::one(k);
  uprime.v1 = FqElem::zero(k);
  // The nearby-cycle shift merges with the stated twist -gamma-1 into -gamma.
  const PadicNumber val = rec_eval(tate_twist(img.module, -gamma), uprime);
  rep.rhs = gamma % 2 == 0 ? val : -val;

  rep.agreed = agree_digits(rep.lhs, rep.rhs);
  rep.pass = rep.agreed >= required_digits;
  return rep;
}

}  // namespace peps
