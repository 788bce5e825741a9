#include "peps/global.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace peps {

namespace {

void check_field(const RankOneGlobalModule& g) {
  if (!g.K) throw std::invalid_argument("global module: null context");
}

long long normalize_exponent(long long a, long long qm1) {
  long long r = a % qm1;
  return r < 0 ? r + qm1 : r;
}

PadicNumber one(const FieldHandle& K) { return PadicNumber::from_integer(K, 1); }

// Truncated product of coefficient vectors (little-endian in t).
std::vector<PadicNumber> poly_mul(const FieldHandle& K, const std::vector<PadicNumber>& a,
                                  const std::vector<PadicNumber>& b, size_t cap) {
  size_t full = a.size() + b.size() - 1;
  std::vector<PadicNumber> out(std::min(cap, full), PadicNumber::zero(K));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size() && i + j < out.size(); ++j)
      out[i + j] = out[i + j] + a[i] * b[j];
  return out;
}

// Divides out (x - r) as often as it goes; returns the multiplicity.
int root_multiplicity(FqPoly& f, const FqElem& r) {
  const FqHandle& ctx = f.ctx();
  FqPoly lin(ctx, {-r, FqElem::one(ctx)});
  int mult = 0;
  while (f.degree() > 0 && f.eval(r).is_zero()) {
    FqPoly quo, rem;
    FqPoly::divmod(f, lin, quo, rem);
    f = quo;
    ++mult;
  }
  return mult;
}

// Sum of Frobenius eigenvalues over the points of U rational over F_{q^n}.
PadicNumber power_sum(const RankOneGlobalModule& g, int n, int workers) {
  const FieldHandle& K = g.K;
  const bool has_dwork = !g.dwork_c.is_zero();

  PadicNumber inner = PadicNumber::zero(K);
  if (n == 1) {
    for (long long code = 0; code < K->residue->q; ++code) {
      FqElem x = FqElem::from_encoding(K->residue, code);
      bool singular = false;
      for (const auto& [s, a] : g.points)
        if (x == s) { singular = true; break; }
      if (singular) continue;
      PadicNumber t = one(K);
      for (const auto& [s, a] : g.points) t = t * teichmuller(K, x - s).pow(a);
      if (has_dwork) t = t * psi_value(K, (g.dwork_c * x).trace_to_prime());
      inner = inner + t;
    }
  } else {
    FqTower tower = make_tower(K->residue, n);
    std::vector<FqElem> es;
    std::vector<long long> as;
    for (const auto& [s, a] : g.points) {
      es.push_back(tower.embed(s));
      as.push_back(a);
    }
    FqElem ec = tower.embed(g.dwork_c);
    const long long total = tower.ext->q;

    auto chunk_sum = [&](long long lo, long long hi) {
      PadicNumber acc = PadicNumber::zero(K);
      for (long long code = lo; code < hi; ++code) {
        FqElem x = FqElem::from_encoding(tower.ext, code);
        bool singular = false;
        for (const FqElem& e : es)
          if (x == e) { singular = true; break; }
        if (singular) continue;
        PadicNumber t = one(K);
        for (size_t i = 0; i < es.size(); ++i)
          t = t * teichmuller(K, tower.norm_to_base(x - es[i])).pow(as[i]);
        if (has_dwork) t = t * psi_value(K, (ec * x).trace_to_prime());
        acc = acc + t;
      }
      return acc;
    };

    int w = std::max(1, workers);
    if (w == 1 || total < 4096) {
      inner = chunk_sum(0, total);
    } else {
      // Fixed chunk decomposition and combine order keep the result
      // independent of the worker count.
      std::vector<PadicNumber> partial(w, PadicNumber::zero(K));
      std::vector<std::thread> pool;
      pool.reserve(w);
      for (int i = 0; i < w; ++i)
        pool.emplace_back([&, i] { partial[i] = chunk_sum(total * i / w, total * (i + 1) / w); });
      for (auto& th : pool) th.join();
      for (const PadicNumber& part : partial) inner = inner + part;
    }
  }

  if (g.infinity_in_u()) inner = inner + one(K);
  return inner * g.u0.pow(n) * PadicNumber::q_power(K, -static_cast<long long>(n) * g.tw);
}

}  // namespace

long long RankOneGlobalModule::exponent_at_infinity() const {
  long long sum = 0;
  for (const auto& [s, a] : points) sum += a;
  return normalize_exponent(-sum, K->residue->q - 1);
}

bool RankOneGlobalModule::ramified_at_infinity() const {
  return exponent_at_infinity() != 0 || !dwork_c.is_zero();
}

bool RankOneGlobalModule::infinity_in_u() const {
  return !ramified_at_infinity() && !puncture_infinity;
}

bool RankOneGlobalModule::geometrically_trivial() const {
  return points.empty() && dwork_c.is_zero();
}

std::string RankOneGlobalModule::to_string() const {
  std::string out = "points=";
  bool first = true;
  for (const auto& [s, a] : points) {
    if (!first) out += ",";
    out += s.to_string() + "^" + std::to_string(a);
    first = false;
  }
  out += ";c=" + dwork_c.to_string();
  out += ";u0=" + u0.to_string();
  out += ";tw=" + std::to_string(tw);
  out += ";punct=";
  out += puncture_infinity ? "1" : "0";
  return out;
}

RankOneGlobalModule make_global_module(const FieldHandle& K,
                                       std::vector<std::pair<FqElem, long long>> points,
                                       const FqElem& dwork_c, const PadicNumber& u0,
                                       long long tw, bool puncture_infinity) {
  if (!K) throw std::invalid_argument("make_global_module: null context");
  if (!same_field(dwork_c.ctx(), K->residue))
    throw std::invalid_argument("make_global_module: Dwork parameter field mismatch");
  if (!u0.valid() || u0.field() != K)
    throw std::invalid_argument("make_global_module: scalar context mismatch");
  if (u0.is_zero_to_precision())
    throw std::invalid_argument("make_global_module: scalar must be nonzero");

  const long long qm1 = K->residue->q - 1;
  std::vector<std::pair<FqElem, long long>> kept;
  for (auto& [s, a] : points) {
    if (!same_field(s.ctx(), K->residue))
      throw std::invalid_argument("make_global_module: point field mismatch");
    for (const auto& [t, b] : kept)
      if (t == s) throw std::invalid_argument("make_global_module: repeated point");
    long long an = normalize_exponent(a, qm1);
    if (an != 0) kept.emplace_back(s, an);
  }

  RankOneGlobalModule g;
  g.K = K;
  g.points = std::move(kept);
  g.dwork_c = dwork_c;
  g.u0 = u0;
  g.tw = tw;
  g.puncture_infinity = puncture_infinity;
  return g;
}

RankOneGlobalModule tate_twist(const RankOneGlobalModule& g, long long k) {
  RankOneGlobalModule out = g;
  out.tw += k;
  return out;
}

RankOneGlobalModule scalar_twist(const RankOneGlobalModule& g, const PadicNumber& c) {
  check_field(g);
  return make_global_module(g.K, g.points, g.dwork_c, g.u0 * c, g.tw, g.puncture_infinity);
}

RankOneGlobalModule dual_module(const RankOneGlobalModule& g) {
  check_field(g);
  std::vector<std::pair<FqElem, long long>> pts;
  for (const auto& [s, a] : g.points) pts.emplace_back(s, -a);
  return make_global_module(g.K, std::move(pts), -g.dwork_c, g.u0.inverse(), -g.tw + 1,
                            g.puncture_infinity);
}

PadicNumber frobenius_eigenvalue(const RankOneGlobalModule& g, const FqElem& x) {
  check_field(g);
  PadicNumber t = g.u0 * PadicNumber::q_power(g.K, -g.tw);
  for (const auto& [s, a] : g.points) {
    if (x == s) throw std::invalid_argument("frobenius_eigenvalue: ramification point");
    t = t * teichmuller(g.K, x - s).pow(a);
  }
  if (!g.dwork_c.is_zero()) t = t * psi_value(g.K, (g.dwork_c * x).trace_to_prime());
  return t;
}

PadicNumber frobenius_eigenvalue(const RankOneGlobalModule& g, const FqTower& tower,
                                 const FqElem& x) {
  check_field(g);
  if (!same_field(tower.base, g.K->residue))
    throw std::invalid_argument("frobenius_eigenvalue: tower base mismatch");
  PadicNumber t =
      g.u0.pow(tower.n) * PadicNumber::q_power(g.K, -static_cast<long long>(tower.n) * g.tw);
  for (const auto& [s, a] : g.points) {
    FqElem es = tower.embed(s);
    if (x == es) throw std::invalid_argument("frobenius_eigenvalue: ramification point");
    t = t * teichmuller(g.K, tower.norm_to_base(x - es)).pow(a);
  }
  if (!g.dwork_c.is_zero())
    t = t * psi_value(g.K, (tower.embed(g.dwork_c) * x).trace_to_prime());
  return t;
}

PadicNumber infinity_eigenvalue(const RankOneGlobalModule& g, int n) {
  check_field(g);
  if (!g.infinity_in_u())
    throw std::invalid_argument("infinity_eigenvalue: infinity not in U");
  return g.u0.pow(n) * PadicNumber::q_power(g.K, -static_cast<long long>(n) * g.tw);
}

RankOneLocalModule local_at(const RankOneGlobalModule& g, const FqElem& s) {
  check_field(g);
  if (!same_field(s.ctx(), g.K->residue))
    throw std::invalid_argument("local_at: point field mismatch");
  long long a = 0;
  PadicNumber c = g.u0;
  for (const auto& [t, b] : g.points) {
    if (t == s)
      a = b;
    else
      c = c * teichmuller(g.K, s - t).pow(b);
  }
  if (!g.dwork_c.is_zero()) c = c * psi_value(g.K, (g.dwork_c * s).trace_to_prime());
  return make_local_module(g.K, a, FqElem::zero(g.K->residue), c, g.tw,
                           Boundary::shriek);
}

RankOneLocalModule local_at_infinity(const RankOneGlobalModule& g) {
  check_field(g);
  return make_local_module(g.K, g.exponent_at_infinity(), g.dwork_c, g.u0, g.tw,
                           Boundary::shriek);
}

CohomologyShape cohomology_shape(const RankOneGlobalModule& g) {
  check_field(g);
  CohomologyShape shape;
  shape.punctures = static_cast<int>(g.points.size()) + (g.infinity_in_u() ? 0 : 1);
  shape.irregularity = g.dwork_c.is_zero() ? 0 : 1;
  bool trivial = g.geometrically_trivial();
  shape.h0 = (trivial && shape.punctures == 0) ? 1 : 0;
  shape.h2 = trivial ? 1 : 0;
  // Euler characteristic bookkeeping: chi_c(U) = 2 - punctures for rank one,
  // with the wild defect at infinity added back on the middle term.
  shape.h1 = shape.h0 + shape.h2 - (2 - shape.punctures) + shape.irregularity;
  return shape;
}

int expected_h1(const RankOneGlobalModule& g) { return cohomology_shape(g).h1; }

LPolynomial l_polynomial(const RankOneGlobalModule& g, int workers,
                         long long max_degree_override) {
  check_field(g);
  const FieldHandle& K = g.K;

  LPolynomial l;
  l.shape = cohomology_shape(g);
  l.e0 = g.u0 * PadicNumber::q_power(K, -g.tw);
  l.e2 = PadicNumber::q_power(K, 1) * l.e0;

  const long long deg = max_degree_override >= 0 ? max_degree_override : l.shape.h1;
  const long long depth = deg + 2;  // two witness coefficients past the bound

  std::vector<PadicNumber> s(depth + 1, PadicNumber::zero(K));
  for (long long n = 1; n <= depth; ++n)
    s[n] = power_sum(g, static_cast<int>(n), workers);

  // exp(sum_n S_n t^n / n) by the standard derivative recurrence.
  std::vector<PadicNumber> expo(depth + 1, PadicNumber::zero(K));
  expo[0] = one(K);
  for (long long k = 1; k <= depth; ++k) {
    PadicNumber acc = PadicNumber::zero(K);
    for (long long j = 1; j <= k; ++j) acc = acc + s[j] * expo[k - j];
    expo[k] = acc * PadicNumber::from_integer(K, k).inverse();
  }

  std::vector<PadicNumber> numer = expo;
  if (l.shape.h0) numer = poly_mul(K, numer, {one(K), -l.e0}, depth + 1);
  if (l.shape.h2) numer = poly_mul(K, numer, {one(K), -l.e2}, depth + 1);
  numer.resize(depth + 1, PadicNumber::zero(K));

  l.tail_digits = numer[deg + 1].known_precision();
  for (long long k = deg + 1; k <= deg + 2; ++k) {
    if (!numer[k].is_zero_to_precision())
      throw std::runtime_error(
          "l_polynomial: tail coefficient t^" + std::to_string(k) +
          " does not vanish (wrong degree bound or exhausted precision) for " +
          g.to_string());
    l.tail_digits = std::min(l.tail_digits, numer[k].known_precision());
  }
  // Exploration overrides may overshoot the true degree; only the structural
  // bound certifies an exact degree, so only then must the top be visible.
  if (max_degree_override < 0 && deg > 0 && numer[deg].is_zero_to_precision())
    throw std::runtime_error("l_polynomial: leading coefficient vanishes to precision for " +
                             g.to_string());

  l.plain.assign(numer.begin(), numer.begin() + deg + 1);
  l.twisted.reserve(deg + 1);
  for (long long k = 0; k <= deg; ++k)
    l.twisted.push_back(l.plain[k] * PadicNumber::q_power(K, k));
  return l;
}

PadicNumber global_epsilon(const LPolynomial& l) {
  // det(-F; H^1_c) is exactly the leading numerator coefficient.
  PadicNumber eps = l.plain.back();
  if (l.shape.h0) eps = eps * (-l.e0).inverse();
  if (l.shape.h2) eps = eps * (-l.e2).inverse();
  return eps;
}

PadicNumber global_epsilon(const RankOneGlobalModule& g, int workers) {
  return global_epsilon(l_polynomial(g, workers));
}

PadicNumber epsilon_display(const LPolynomial& l) {
  const FieldHandle& K = l.e0.field();
  return global_epsilon(l) *
         PadicNumber::q_power(K, l.shape.h0 - l.shape.h1 + l.shape.h2);
}

EpsilonReport verify_product_formula(const RankOneGlobalModule& g,
                                     const RationalForm& omega,
                                     long long required_digits, int workers) {
  check_field(g);
  const FieldHandle& K = g.K;
  const FqHandle& F = K->residue;
  if (omega.num.is_zero())
    throw std::invalid_argument("verify_product_formula: zero form");

  EpsilonReport rep;
  rep.module_text = g.to_string();
  rep.omega_text = omega.to_string();
  rep.lhs = global_epsilon(g, workers);

  // Divisor of omega on the affine line; anything not accounted for by
  // rational roots is out of scope here.
  FqPoly num = omega.num, den = omega.den;
  std::vector<long long> ord(F->q, 0);
  for (long long code = 0; code < F->q; ++code) {
    FqElem r = FqElem::from_encoding(F, code);
    ord[code] = root_multiplicity(num, r) - root_multiplicity(den, r);
  }
  if (num.degree() > 0 || den.degree() > 0)
    throw std::invalid_argument(
        "verify_product_formula: form has zeros or poles at non-rational points");

  PadicNumber rhs = PadicNumber::q_power(K, 1);  // q^{(1-g) rk} on the projective line
  for (long long code = 0; code < F->q; ++code) {
    FqElem r = FqElem::from_encoding(F, code);
    bool singular = false;
    for (const auto& [s, a] : g.points)
      if (r == s) { singular = true; break; }
    if (singular) {
      LocalFormJet jet = form_jet(omega, ClosedPoint::rational(r));
      PadicNumber f = epsilon_natural(local_at(g, r), jet);
      rep.factors.emplace_back("eps(" + r.to_string() + ")", f.to_string());
      rhs = rhs * f;
    } else if (ord[code] != 0) {
      PadicNumber f =
          PadicNumber::q_power(K, ord[code]) * frobenius_eigenvalue(g, r).pow(ord[code]);
      rep.factors.emplace_back("U(" + r.to_string() + ")^" + std::to_string(ord[code]),
                               f.to_string());
      rhs = rhs * f;
    }
  }

  const long long ord_inf = omega.den.degree() - omega.num.degree() - 2;
  if (!g.infinity_in_u()) {
    LocalFormJet jet = form_jet(omega, ClosedPoint::infinity_point());
    PadicNumber f = epsilon_natural(local_at_infinity(g), jet);
    rep.factors.emplace_back("eps(inf)", f.to_string());
    rhs = rhs * f;
  } else if (ord_inf != 0) {
    PadicNumber f =
        PadicNumber::q_power(K, ord_inf) * infinity_eigenvalue(g, 1).pow(ord_inf);
    rep.factors.emplace_back("U(inf)^" + std::to_string(ord_inf), f.to_string());
    rhs = rhs * f;
  }

  rep.rhs = rhs;
  rep.agreed = agree_digits(rep.lhs, rep.rhs);
  rep.required = required_digits;
  rep.pass = rep.agreed >= required_digits;
  return rep;
}

EpsilonReport verify_puncture_formula(const RankOneGlobalModule& g,
                                      long long required_digits, int workers) {
  check_field(g);
  const FieldHandle& K = g.K;
  if (g.exponent_at_infinity() != 0 || !g.dwork_c.is_zero())
    throw std::invalid_argument("verify_puncture_formula: module must be unramified at infinity");

  EpsilonReport rep;
  rep.module_text = g.to_string();
  rep.omega_text = "-dx";

  RankOneGlobalModule punctured = g;
  punctured.puncture_infinity = true;
  PadicNumber eps = global_epsilon(punctured, workers);
  // det(-F; fibre at infinity) for the rank-one unramified restriction.
  PadicNumber det_inf = -(g.u0 * PadicNumber::q_power(K, -g.tw));
  rep.lhs = eps * PadicNumber::q_power(K, 1) * det_inf;
  rep.factors.emplace_back("eps(punctured)", eps.to_string());
  rep.factors.emplace_back("det(-F,inf)", det_inf.to_string());

  const FqHandle& F = K->residue;
  RationalForm mdx = make_form(FqPoly::constant(-FqElem::one(F)),
                               FqPoly::constant(FqElem::one(F)));
  PadicNumber rhs = one(K);
  for (const auto& [s, a] : g.points) {
    LocalFormJet jet = form_jet(mdx, ClosedPoint::rational(s));
    PadicNumber f = epsilon_natural(local_at(g, s), jet);
    rep.factors.emplace_back("eps(" + s.to_string() + ")", f.to_string());
    rhs = rhs * f;
  }

  rep.rhs = rhs;
  rep.agreed = agree_digits(rep.lhs, rep.rhs);
  rep.required = required_digits;
  rep.pass = rep.agreed >= required_digits;
  return rep;
}

FunceqReport functional_equation_check(const RankOneGlobalModule& g,
                                       long long required_digits, int workers) {
  check_field(g);
  const FieldHandle& K = g.K;

  LPolynomial l = l_polynomial(g, workers);
  LPolynomial ld = l_polynomial(dual_module(g), workers);
  if (ld.shape.h0 != l.shape.h0 || ld.shape.h1 != l.shape.h1 || ld.shape.h2 != l.shape.h2)
    throw std::logic_error("functional_equation_check: dual cohomology shape mismatch");

  FunceqReport rep;
  rep.module_text = g.to_string();
  rep.epsilon = global_epsilon(l);

  auto denom = [&](const LPolynomial& lp) {
    std::vector<PadicNumber> d{one(K)};
    if (lp.shape.h0) d = poly_mul(K, d, {one(K), -lp.e0}, 4);
    if (lp.shape.h2) d = poly_mul(K, d, {one(K), -lp.e2}, 4);
    return d;
  };
  auto reverse_at = [&](const std::vector<PadicNumber>& c, size_t deg) {
    std::vector<PadicNumber> out(deg + 1, PadicNumber::zero(K));
    for (size_t i = 0; i < c.size() && i <= deg; ++i) out[deg - i] = c[i];
    return out;
  };

  std::vector<PadicNumber> dd = denom(l), ddual = denom(ld);
  const size_t n1 = l.plain.size() - 1;      // h1
  const size_t d2 = dd.size() - 1;           // h0 + h2
  std::vector<PadicNumber> rev_ndual = reverse_at(ld.plain, n1);
  std::vector<PadicNumber> rev_ddual = reverse_at(ddual, d2);

  const size_t cap = n1 + d2 + 1;
  std::vector<PadicNumber> lhs = poly_mul(K, l.plain, rev_ddual, cap);
  std::vector<PadicNumber> rhs = poly_mul(K, rev_ndual, dd, cap);
  lhs.resize(cap, PadicNumber::zero(K));
  rhs.resize(cap, PadicNumber::zero(K));

  rep.compared = static_cast<int>(cap);
  rep.agreed = PadicNumber::zero(K).known_precision();
  for (size_t k = 0; k < cap; ++k)
    rep.agreed = std::min(rep.agreed, agree_digits(lhs[k], rep.epsilon * rhs[k]));
  rep.required = required_digits;
  rep.pass = rep.agreed >= required_digits;
  return rep;
}

std::vector<std::pair<FqElem, LocalFourierImage>> stationary_phase(
    const RankOneGlobalModule& g) {
  check_field(g);
  if (!g.dwork_c.is_zero())
    throw std::invalid_argument("stationary_phase: module must have no exponential part");

  std::vector<std::pair<FqElem, LocalFourierImage>> out;
  int total_rank = 0;
  for (const auto& [s, a] : g.points) {
    LocalFourierImage img = local_fourier(local_at(g, s), s);
    total_rank += img.rank_out;
    out.emplace_back(s, img);
  }
  if (total_rank != static_cast<int>(g.points.size()))
    throw std::logic_error("stationary_phase: total generic rank mismatch");
  return out;
}

}  // namespace peps
