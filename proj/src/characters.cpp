#include "peps/characters.hpp"

#include <stdexcept>

namespace peps {

namespace {

long long norm_exponent(const FieldHandle& K, long long a) {
  const long long ord = K->residue->q - 1;
  return ((a % ord) + ord) % ord;
}

// Prime factors of n, ascending, without multiplicity.
std::vector<long long> prime_factors(long long n) {
  std::vector<long long> out;
  for (long long d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

MultChar mult_char(const FieldHandle& K, long long a) { return MultChar{K, norm_exponent(K, a)}; }

PadicNumber MultChar::eval(const FqElem& x) const {
  if (x.is_zero()) throw std::domain_error("MultChar: evaluation at zero");
  return teichmuller(K, x).pow(a);
}

PadicNumber MultChar::eval_norm(const FqTower& tower, const FqElem& x) const {
  if (x.is_zero()) throw std::domain_error("MultChar: evaluation at zero");
  return teichmuller(K, tower.norm_to_base(x)).pow(a);
}

AddChar add_char(const FieldHandle& K, const FqElem& s) {
  if (!same_field(K->residue, s.ctx())) throw std::invalid_argument("add_char: field mismatch");
  return AddChar{K, s};
}

PadicNumber AddChar::eval(const FqElem& x) const {
  return psi_value(K, (s * x).trace_to_prime());
}

PadicNumber AddChar::eval_ext(const FqTower& tower, const FqElem& x) const {
  return psi_value(K, (tower.embed(s) * x).trace_to_prime());
}

PadicNumber gauss_sum(const FieldHandle& K, long long a) {
  if (!K->use_pi) throw std::domain_error("gauss_sum: context has no ramified part");
  const long long q = K->residue->q;
  // The summand carries the dual exponent -a: this is the normalization whose
  // pi-adic valuation is the base-p digit sum of a itself, and whose value is
  // + pi^s times the Gamma product checked in gross_koblitz_check.
  const long long neg = norm_exponent(K, -a);
  PadicNumber acc = PadicNumber::zero(K);
  for (long long code = 1; code < q; ++code) {
    const FqElem x = FqElem::from_encoding(K->residue, code);
    acc = acc + teichmuller(K, x).pow(neg) * psi_value(K, x.trace_to_prime());
  }
  return -acc;
}

ExtensionWalk extension_walk(const FieldHandle& K, const FqTower& tower) {
  if (!same_field(K->residue, tower.base))
    throw std::invalid_argument("extension_walk: tower base mismatch");
  const FqHandle& E = tower.ext;
  const long long Q = E->q;
  const long long q = K->residue->q;
  const long long ord = Q - 1;

  // Deterministic generator of the extension's multiplicative group.
  const auto primes = prime_factors(ord);
  FqElem g = FqElem::zero(E);
  for (long long code = 2; code < Q; ++code) {
    FqElem cand = FqElem::from_encoding(E, code);
    bool ok = !cand.is_zero();
    for (long long l : primes) {
      if (!ok) break;
      if (cand.pow(ord / l) == FqElem::one(E)) ok = false;
    }
    if (ok) {
      g = cand;
      break;
    }
  }
  if (g.is_zero()) throw std::logic_error("extension_walk: no generator found");

  // Walk x = g^k once around the group, bucketing by (k mod (q-1), absolute
  // trace): the character value only depends on the bucket, because the norm
  // of g generates the base group.
  const long long p = K->p;
  ExtensionWalk walk;
  walk.generator = g;
  walk.counts.assign(static_cast<size_t>(q - 1) * p, 0);
  {
    const int de = E->d;
    std::vector<long long> x(de, 0);
    x[0] = 1;
    std::vector<long long> conv(2 * de - 1);
    const auto& red = E->red_rows;
    const auto& tr = E->trace_row;
    const auto& gc = g.coords();
    for (long long k = 0; k < ord; ++k) {
      long long t = 0;
      for (int i = 0; i < de; ++i) t += x[i] * tr[i];
      ++walk.counts[static_cast<size_t>(k % (q - 1)) * p + (t % p)];
      // x <- x * g, schoolbook with lazy reduction
      std::fill(conv.begin(), conv.end(), 0);
      for (int i = 0; i < de; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < de; ++j) conv[i + j] += x[i] * gc[j];
      }
      for (int i = 0; i < de; ++i) x[i] = conv[i];
      for (int k2 = 2 * de - 2; k2 >= de; --k2) {
        const long long c = conv[k2] % p;
        if (c == 0) continue;
        for (int i = 0; i < de; ++i) x[i] += c * red[k2 - de][i];
      }
      for (int i = 0; i < de; ++i) x[i] %= p;
    }
  }
  return walk;
}

PadicNumber gauss_sum_ext(const FieldHandle& K, const FqTower& tower, long long a) {
  return gauss_sum_ext(K, tower, extension_walk(K, tower), a);
}

PadicNumber gauss_sum_ext(const FieldHandle& K, const FqTower& tower,
                          const ExtensionWalk& walk, long long a) {
  if (!K->use_pi) throw std::domain_error("gauss_sum_ext: context has no ramified part");
  const long long q = K->residue->q;
  const long long p = K->p;
  const auto& counts = walk.counts;
  if (counts.size() != static_cast<size_t>(q - 1) * p)
    throw std::invalid_argument("gauss_sum_ext: walk does not match the context");

  // Same dual-exponent normalization as gauss_sum, composed with the norm.
  const long long neg = norm_exponent(K, -a);
  const PadicNumber rho = teichmuller(K, tower.norm_to_base(walk.generator)).pow(neg);
  PadicNumber acc = PadicNumber::zero(K);
  PadicNumber rpow = PadicNumber::from_integer(K, 1);
  for (long long r = 0; r < q - 1; ++r) {
    PadicNumber inner = PadicNumber::zero(K);
    for (long long t = 0; t < p; ++t) {
      const long long c = counts[static_cast<size_t>(r) * p + t];
      if (c) inner = inner + PadicNumber::from_integer(K, c) * psi_value(K, t);
    }
    acc = acc + rpow * inner;
    rpow = rpow * rho;
  }
  return -acc;
}

PadicNumber jacobi_sum(const FieldHandle& K, long long a, long long b) {
  const long long q = K->residue->q;
  const long long aa = norm_exponent(K, a), bb = norm_exponent(K, b);
  const FqElem one = FqElem::one(K->residue);
  PadicNumber acc = PadicNumber::zero(K);
  // encodings 0 and 1 are exactly the elements 0 and 1 in the power basis
  for (long long code = 2; code < q; ++code) {
    const FqElem x = FqElem::from_encoding(K->residue, code);
    acc = acc + teichmuller(K, x).pow(aa) * teichmuller(K, one - x).pow(bb);
  }
  return acc;
}

GaussProductReport gross_koblitz_check(const FieldHandle& K, long long a, long long required_digits) {
  if (!K->use_pi) throw std::domain_error("gross_koblitz_check: context has no ramified part");
  const long long q = K->residue->q;
  const long long p = K->p;
  const long long aa = norm_exponent(K, a);

  GaussProductReport rep;
  rep.a = aa;
  rep.required = required_digits;

  // Digit sum of a in base p, which is the pi-adic valuation of the sum.
  long long s = 0;
  for (long long t = aa; t; t /= p) s += t % p;
  rep.valuation_expected = s;

  rep.lhs = gauss_sum(K, aa);

  std::vector<std::pair<long long, long long>> gargs;
  long long r = aa;
  for (int i = 0; i < K->f; ++i) {
    gargs.push_back({r, q - 1});
    r = (r * p) % (q - 1);
  }
  if (aa == 0)
    for (auto& ga : gargs) ga = {0, 1};
  auto gammas = padic_gamma_batch(K, gargs);
  PadicNumber prod = PadicNumber::pi(K).pow(s);
  for (const auto& gv : gammas) prod = prod * gv;
  rep.rhs = prod;

  rep.valuation_seen =
      rep.lhs.is_zero_to_precision() ? rep.lhs.known_precision() : rep.lhs.valuation_pi();
  rep.agreed = agree_digits(rep.lhs, rep.rhs);
  rep.pass = rep.agreed >= required_digits && rep.valuation_seen == rep.valuation_expected;
  return rep;
}

ExtensionGaussReport hasse_davenport_check(const FieldHandle& K, const FqTower& tower,
                                           long long a, long long required_digits) {
  return hasse_davenport_check(K, tower, extension_walk(K, tower), a, required_digits);
}

ExtensionGaussReport hasse_davenport_check(const FieldHandle& K, const FqTower& tower,
                                           const ExtensionWalk& walk, long long a,
                                           long long required_digits) {
  ExtensionGaussReport rep;
  rep.a = norm_exponent(K, a);
  rep.n = tower.n;
  rep.required = required_digits;
  rep.lhs = gauss_sum_ext(K, tower, walk, rep.a);
  rep.rhs = gauss_sum(K, rep.a).pow(tower.n);
  rep.agreed = agree_digits(rep.lhs, rep.rhs);
  rep.pass = rep.agreed >= required_digits;
  return rep;
}

}  // namespace peps
