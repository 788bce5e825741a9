#include "peps/localmodules.hpp"

#include <sstream>
#include <stdexcept>

namespace peps {

namespace {

long long norm_exponent(const FieldHandle& K, long long a) {
  const long long ord = K->residue->q - 1;
  return ((a % ord) + ord) % ord;
}

void check_same(const RankOneLocalModule& m1, const RankOneLocalModule& m2) {
  if (!same_context(m1.K, m2.K))
    throw std::invalid_argument("RankOneLocalModule: context mismatch");
}

const char* boundary_name(Boundary b) {
  switch (b) {
    case Boundary::generic: return "generic";
    case Boundary::shriek: return "shriek";
    default: return "plus";
  }
}

}  // namespace

RankOneLocalModule make_local_module(const FieldHandle& K, long long a, const FqElem& s,
                                     const PadicNumber& c, long long n, Boundary b) {
  if (!same_field(K->residue, s.ctx()))
    throw std::invalid_argument("make_local_module: wild parameter field mismatch");
  // Any nonzero scalar is legal: Fourier images carry Gauss-sum weights of
  // positive valuation, so only zero-to-precision values are rejected.
  if (c.is_zero_to_precision())
    throw std::invalid_argument("make_local_module: scalar must be nonzero");
  RankOneLocalModule m;
  m.K = K;
  m.a = norm_exponent(K, a);
  m.s = s;
  m.c = c;
  m.n = n;
  m.b = b;
  return m;
}

RankOneLocalModule unit_module(const FieldHandle& K) {
  return make_local_module(K, 0, FqElem::zero(K->residue), PadicNumber::from_integer(K, 1), 0,
                           Boundary::generic);
}

RankOneLocalModule tensor(const RankOneLocalModule& m1, const RankOneLocalModule& m2) {
  check_same(m1, m2);
  return make_local_module(m1.K, m1.a + m2.a, m1.s + m2.s, m1.c * m2.c, m1.n + m2.n, m1.b);
}

RankOneLocalModule dual(const RankOneLocalModule& m, DualVariant variant) {
  RankOneLocalModule d =
      make_local_module(m.K, -m.a, -m.s, m.c.inverse(), -m.n, m.b);
  if (variant == DualVariant::d_eta) d = tate_twist(d, -1);
  return d;
}

RankOneLocalModule tate_twist(const RankOneLocalModule& m, long long k) {
  RankOneLocalModule t = m;
  t.n += k;
  return t;
}

bool same_module(const RankOneLocalModule& m1, const RankOneLocalModule& m2) {
  return same_context(m1.K, m2.K) && m1.a == m2.a && m1.s == m2.s && m1.n == m2.n &&
         agree(m1.c, m2.c) && m1.b == m2.b;
}

std::string RankOneLocalModule::to_string() const {
  std::ostringstream out;
  out << "a=" << a << ";s=" << s.to_string() << ";c=" << c.to_string() << ";n=" << n
      << ";b=" << boundary_name(b);
  return out.str();
}

RankOneLocalModule RankOneLocalModule::parse(const FieldHandle& K, const std::string& text) {
  auto field = [&](const std::string& key) {
    const std::string tag = key + "=";
    size_t pos = text.find(tag);
    if (pos == std::string::npos)
      throw std::invalid_argument("RankOneLocalModule::parse: missing field " + key);
    pos += tag.size();
    size_t end = text.find(';', pos);
    // the c field holds a serialized PadicNumber whose own ';' separators are
    // skipped by scanning for the following ";n=" marker instead
    if (key == "c") end = text.find(";n=", pos);
    if (end == std::string::npos) end = text.size();
    return text.substr(pos, end - pos);
  };
  RankOneLocalModule m;
  m.K = K;
  m.a = norm_exponent(K, std::stoll(field("a")));
  m.s = FqElem::from_encoding(K->residue, std::stoll(field("s")));
  m.c = PadicNumber::parse(K, field("c"));
  m.n = std::stoll(field("n"));
  const std::string b = field("b");
  if (b == "generic") m.b = Boundary::generic;
  else if (b == "shriek") m.b = Boundary::shriek;
  else if (b == "plus") m.b = Boundary::plus;
  else throw std::invalid_argument("RankOneLocalModule::parse: bad boundary tag");
  return m;
}

bool HolonomicLocalObject::is_effective() const {
  for (const auto& [m, k] : modules)
    if (k < 0) return false;
  for (const auto& [v, k] : punctuals)
    if (k < 0) return false;
  return true;
}

HolonomicLocalObject direct_sum(const HolonomicLocalObject& x, const HolonomicLocalObject& y) {
  HolonomicLocalObject r = x;
  r.modules.insert(r.modules.end(), y.modules.begin(), y.modules.end());
  r.punctuals.insert(r.punctuals.end(), y.punctuals.begin(), y.punctuals.end());
  return r;
}

HolonomicLocalObject as_holonomic(const RankOneLocalModule& m) {
  HolonomicLocalObject r;
  r.modules.push_back({m, 1});
  return r;
}

HolonomicLocalObject as_holonomic(const PunctualModule& v) {
  HolonomicLocalObject r;
  r.punctuals.push_back({v, 1});
  return r;
}

WeilDeligneChar wd_char(const RankOneLocalModule& m) {
  WeilDeligneChar chi;
  chi.K = m.K;
  chi.a = m.a;
  chi.cond = m.conductor();
  chi.s = m.s;
  // Frobenius value at the uniformizer: the tame part contributes chi_a(-1),
  // the unramified scalar and the Tate twist come in directly.
  const FqElem minus_one = -FqElem::one(m.K->residue);
  chi.phi = teichmuller(m.K, minus_one).pow(m.a) * m.c * PadicNumber::q_power(m.K, -m.n);
  return chi;
}

PadicNumber WeilDeligneChar::eval_unit(const FqElem& v) const {
  if (v.is_zero()) throw std::domain_error("WeilDeligneChar: evaluation at zero");
  const long long ord = K->residue->q - 1;
  return teichmuller(K, v).pow(((-a) % ord + ord) % ord);
}

PadicNumber WeilDeligneChar::eval_one_unit(const FqElem& v1_over_v0) const {
  if (cond < 2) return PadicNumber::from_integer(K, 1);
  return psi_value(K, (s * v1_over_v0).trace_to_prime());
}

PadicNumber rec_eval(const WeilDeligneChar& chi, const LaurentJet& f) {
  if (f.v0.is_zero()) throw std::invalid_argument("rec_eval: jet leading coefficient is zero");
  PadicNumber r = chi.phi.pow(f.m) * chi.eval_unit(f.v0);
  if (chi.cond == 2) r = r * chi.eval_one_unit(f.v1 / f.v0);
  return r;
}

PadicNumber rec_eval(const RankOneLocalModule& m, const LaurentJet& f) {
  return rec_eval(wd_char(m), f);
}

LocalFourierImage local_fourier(const RankOneLocalModule& m, const FqElem& s0) {
  if (m.b != Boundary::shriek)
    throw std::invalid_argument("local_fourier: input must be shriek-extended");
  if (!m.s.is_zero())
    throw std::invalid_argument("local_fourier: wild input is out of scope");
  if (!same_field(m.K->residue, s0.ctx()))
    throw std::invalid_argument("local_fourier: point field mismatch");

  LocalFourierImage img;
  PadicNumber scalar = m.c;
  Boundary tag = Boundary::plus;
  if (m.a != 0) {
    // The kernel contributes the Frobenius trace of the rank-one character
    // sum with exponent a, which is gauss_sum(-a) in our normalization.
    scalar = scalar * gauss_sum(m.K, -m.a);
    tag = Boundary::generic;
  }
  img.module = make_local_module(m.K, m.a, s0, scalar, m.n + 1, tag);
  img.rank_out = m.rank() + m.irregularity();
  img.irr_out = m.irregularity();
  img.cond_bound = 1 + m.irregularity();
  img.slope_below_one = true;

  // Structural laws of the transform on this input class; a violation means
  // a bug, not bad input.
  if (img.rank_out != 1 || img.irr_out != 0)
    throw std::logic_error("local_fourier: rank/irregularity law violated");
  if ((img.module.a != 0 ? 1 : 0) > img.cond_bound)
    throw std::logic_error("local_fourier: conductor bound violated");
  return img;
}

}  // namespace peps
