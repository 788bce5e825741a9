#include "peps/localfield.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace peps {

namespace {

constexpr long long kInfPrec = (1LL << 52);

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

// Inverse of a p-unit modulo p^levels by Hensel lifting from F_p.
std::uint64_t unit_inverse(std::uint64_t u, long long p, std::uint64_t pcap) {
  std::uint64_t x = powmod(u % p, static_cast<std::uint64_t>(p - 2), static_cast<std::uint64_t>(p));
  if (x == 0) throw std::domain_error("unit_inverse: not a unit");
  for (int i = 0; i < 7; ++i) {
    // x <- x(2 - ux) mod pcap, doubling the number of correct p-levels
    unsigned __int128 ux = static_cast<unsigned __int128>(u) * x % pcap;
    unsigned __int128 t = (2 + static_cast<unsigned __int128>(pcap) - ux) % pcap;
    x = static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * t % pcap);
  }
  return x;
}

long long vp_of(std::uint64_t c, long long p, int levels) {
  if (c == 0) return levels;  // beyond the window
  long long v = 0;
  while (c % p == 0) {
    c /= p;
    ++v;
  }
  return v;
}

long long ceil_div(long long a, long long b) {
  return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

// Full-window convolution of two digit grids (no precision logic): the core
// of multiplication, also reused by the Newton inverse.
std::vector<std::uint64_t> conv_raw(const FieldCtx& K, const std::vector<std::uint64_t>& a,
                                    const std::vector<std::uint64_t>& b) {
  const int e = K.e, f = K.f;
  const std::uint64_t pcap = K.pcap;
  std::vector<unsigned __int128> acc(static_cast<size_t>(2 * e - 1) * (2 * f - 1), 0);
  for (int j1 = 0; j1 < e; ++j1)
    for (int i1 = 0; i1 < f; ++i1) {
      const std::uint64_t x = a[static_cast<size_t>(j1) * f + i1];
      if (x == 0) continue;
      for (int j2 = 0; j2 < e; ++j2)
        for (int i2 = 0; i2 < f; ++i2) {
          const std::uint64_t y = b[static_cast<size_t>(j2) * f + i2];
          if (y == 0) continue;
          acc[static_cast<size_t>(j1 + j2) * (2 * f - 1) + (i1 + i2)] +=
              static_cast<unsigned __int128>(x) * y;
        }
    }
  // Reduce the unramified direction by the lifted residue modulus.
  const auto& red = K.residue->red_rows;
  for (int j = 0; j < 2 * e - 1; ++j)
    for (int k = 2 * f - 2; k >= f; --k) {
      unsigned __int128 c = acc[static_cast<size_t>(j) * (2 * f - 1) + k] % pcap;
      if (c == 0) continue;
      acc[static_cast<size_t>(j) * (2 * f - 1) + k] = 0;
      for (int i = 0; i < f; ++i) {
        const long long r = red[k - f][i];
        if (r) acc[static_cast<size_t>(j) * (2 * f - 1) + i] += c * static_cast<std::uint64_t>(r);
      }
    }
  // Fold pi^(e+t) = -p * pi^t and reduce mod pcap.
  std::vector<std::uint64_t> out(static_cast<size_t>(e) * f, 0);
  for (int j = 0; j < e; ++j)
    for (int i = 0; i < f; ++i)
      out[static_cast<size_t>(j) * f + i] =
          static_cast<std::uint64_t>(acc[static_cast<size_t>(j) * (2 * f - 1) + i] % pcap);
  for (int j = e; j < 2 * e - 1; ++j)
    for (int i = 0; i < f; ++i) {
      const std::uint64_t c =
          static_cast<std::uint64_t>(acc[static_cast<size_t>(j) * (2 * f - 1) + i] % pcap);
      if (c == 0) continue;
      const std::uint64_t sub = mulmod(c, static_cast<std::uint64_t>(K.p), pcap);
      std::uint64_t& t = out[static_cast<size_t>(j - e) * f + i];
      t = (t + pcap - sub) % pcap;
    }
  return out;
}

// Multiply a grid by the uniformizer (shift one pi-digit up); the top row
// wraps to the bottom scaled by pi^e, which is -p with the ramified part and
// p itself without it.
void shift_up_one(const FieldCtx& K, std::vector<std::uint64_t>& d) {
  const int e = K.e, f = K.f;
  std::vector<std::uint64_t> top(d.end() - f, d.end());
  for (int j = e - 1; j >= 1; --j)
    for (int i = 0; i < f; ++i) d[static_cast<size_t>(j) * f + i] = d[static_cast<size_t>(j - 1) * f + i];
  for (int i = 0; i < f; ++i) {
    const std::uint64_t c = mulmod(top[i], static_cast<std::uint64_t>(K.p), K.pcap);
    d[i] = K.use_pi ? (K.pcap - c) % K.pcap : c;
  }
}

// Divide a grid by the uniformizer; the bottom row must be divisible by p
// (valid whenever the grid valuation is positive).
void shift_down_one(const FieldCtx& K, std::vector<std::uint64_t>& d) {
  const int e = K.e, f = K.f;
  std::vector<std::uint64_t> bottom(d.begin(), d.begin() + f);
  for (int j = 0; j + 1 < e; ++j)
    for (int i = 0; i < f; ++i) d[static_cast<size_t>(j) * f + i] = d[static_cast<size_t>(j + 1) * f + i];
  for (int i = 0; i < f; ++i) {
    std::uint64_t c = K.use_pi ? (K.pcap - bottom[i]) % K.pcap : bottom[i];
    if (c % K.p != 0) throw std::logic_error("shift_down_one: not divisible by p");
    d[static_cast<size_t>(e - 1) * f + i] = c / K.p;
  }
}

}  // namespace

// -------------------------------------------------------------- Valuation ---

std::string Valuation::to_string() const {
  if (infinite) return "inf";
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

bool same_context(const FieldHandle& a, const FieldHandle& b) {
  if (!a || !b) return false;
  return a.get() == b.get() ||
         (a->p == b->p && a->f == b->f && a->use_pi == b->use_pi && a->levels == b->levels);
}

// ------------------------------------------------------------ PadicNumber ---

void PadicNumber::normalize() {
  const FieldCtx& K = *ctx_;
  // Grid valuation: min over nonzero entries of (pi-power + e * p-valuation).
  long long gv = -1;
  for (int j = 0; j < K.e && gv != 0; ++j)
    for (int i = 0; i < K.f; ++i) {
      const std::uint64_t c = d_[static_cast<size_t>(j) * K.f + i];
      if (c == 0) continue;
      const long long v = j + K.e * vp_of(c, K.p, K.levels);
      if (gv < 0 || v < gv) gv = v;
      if (gv == 0) break;
    }
  if (gv < 0) {
    // Zero to precision: pin the convention val == prec.
    if (prec_ < kInfPrec) val_ = prec_;
    else { val_ = kInfPrec; prec_ = kInfPrec; }
    return;
  }
  // The trusted window is anchored at the pre-shift baseline: factoring the
  // valuation out of the grid cannot extend what the top p-level knows.
  const long long baseline = val_;
  for (long long t = 0; t < gv; ++t) shift_down_one(K, d_);
  val_ += gv;
  if (prec_ > baseline + K.capacity()) prec_ = baseline + K.capacity();
  // Clamp digits at or above the precision mark.
  for (int j = 0; j < K.e; ++j) {
    const long long lv = ceil_div(prec_ - val_ - j, K.e);
    if (lv >= K.levels) continue;
    std::uint64_t cap = 1;
    for (long long t = 0; t < std::max<long long>(lv, 0); ++t) cap *= static_cast<std::uint64_t>(K.p);
    for (int i = 0; i < K.f; ++i) d_[static_cast<size_t>(j) * K.f + i] %= cap;
  }
  // Clamping may have emptied the grid entirely.
  bool any = false;
  for (const auto& c : d_)
    if (c) { any = true; break; }
  if (!any && prec_ < kInfPrec) val_ = prec_;
}

PadicNumber PadicNumber::zero(const FieldHandle& K) {
  PadicNumber x;
  x.ctx_ = K;
  x.val_ = kInfPrec;
  x.prec_ = kInfPrec;
  x.d_.assign(static_cast<size_t>(K->e) * K->f, 0);
  return x;
}

PadicNumber PadicNumber::from_integer(const FieldHandle& K, long long n) {
  PadicNumber x = zero(K);
  if (n == 0) return x;
  long long r = n % static_cast<long long>(K->pcap);
  if (r < 0) r += static_cast<long long>(K->pcap);
  x.d_[0] = static_cast<std::uint64_t>(r);
  x.val_ = 0;
  x.prec_ = kInfPrec;
  x.normalize();
  return x;
}

PadicNumber PadicNumber::from_rational(const FieldHandle& K, long long num, long long den) {
  if (den == 0) throw std::invalid_argument("from_rational: zero denominator");
  return from_integer(K, num) / from_integer(K, den);
}

PadicNumber PadicNumber::lift(const FieldHandle& K, const FqElem& x) {
  if (!same_field(K->residue, x.ctx())) throw std::invalid_argument("lift: residue field mismatch");
  PadicNumber r = zero(K);
  for (int i = 0; i < K->f; ++i) r.d_[i] = static_cast<std::uint64_t>(x.coords()[i]);
  r.val_ = 0;
  r.prec_ = kInfPrec;
  r.normalize();
  return r;
}

PadicNumber PadicNumber::pi(const FieldHandle& K) {
  if (!K->use_pi) return from_integer(K, K->p);
  if (K->p == 2) return from_integer(K, -2);  // the canonical root of X + 2
  PadicNumber x = zero(K);
  x.d_[static_cast<size_t>(1) * K->f] = 1;  // the grid basis vector pi^1
  x.val_ = 0;
  x.prec_ = kInfPrec;
  x.normalize();
  return x;
}

PadicNumber PadicNumber::q_power(const FieldHandle& K, long long k) {
  return from_integer(K, K->residue->q).pow(k);
}

PadicNumber PadicNumber::operator-() const {
  PadicNumber r = *this;
  for (auto& c : r.d_) c = (r.ctx_->pcap - c) % r.ctx_->pcap;
  r.normalize();
  return r;
}

PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
  if (!same_context(a.ctx_, b.ctx_)) throw std::invalid_argument("PadicNumber: context mismatch");
  if (a.is_exact_zero()) return b;
  if (b.is_exact_zero()) return a;
  const FieldCtx& K = *a.ctx_;
  PadicNumber r = PadicNumber::zero(a.ctx_);
  const long long v = std::min(a.val_, b.val_);
  r.val_ = v;
  r.prec_ = std::min(a.prec_, b.prec_);
  std::vector<std::uint64_t> da = a.d_, db = b.d_;
  for (long long t = 0; t < a.val_ - v; ++t) shift_up_one(K, da);
  for (long long t = 0; t < b.val_ - v; ++t) shift_up_one(K, db);
  r.d_.resize(da.size());
  for (size_t i = 0; i < da.size(); ++i) r.d_[i] = (da[i] + db[i]) % K.pcap;
  r.normalize();
  return r;
}

PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
  if (!same_context(a.ctx_, b.ctx_)) throw std::invalid_argument("PadicNumber: context mismatch");
  if (a.is_exact_zero() || b.is_exact_zero()) return PadicNumber::zero(a.ctx_);
  const long long va = a.is_zero_to_precision() ? a.prec_ : a.val_;
  const long long vb = b.is_zero_to_precision() ? b.prec_ : b.val_;
  PadicNumber r = PadicNumber::zero(a.ctx_);
  r.val_ = a.val_ + b.val_;
  r.prec_ = std::min(a.prec_ + vb, b.prec_ + va);
  r.prec_ = std::min(r.prec_, kInfPrec);
  r.d_ = conv_raw(*a.ctx_, a.d_, b.d_);
  r.normalize();
  return r;
}

PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) { return a * b.inverse(); }

PadicNumber PadicNumber::inverse() const {
  if (is_zero_to_precision())
    throw std::domain_error("PadicNumber: inverse of a value that is zero to precision");
  const FieldCtx& K = *ctx_;
  // Newton iteration z <- z(2 - uz) on the unit part, starting from the
  // residue-field inverse; each round doubles the correct pi-digits.
  std::vector<std::uint64_t> two(static_cast<size_t>(K.e) * K.f, 0);
  two[0] = 2 % K.pcap;
  FqElem r0 = FqElem(K.residue, std::vector<long long>(d_.begin(), d_.begin() + K.f)).inverse();
  std::vector<std::uint64_t> z(static_cast<size_t>(K.e) * K.f, 0);
  for (int i = 0; i < K.f; ++i) z[i] = static_cast<std::uint64_t>(r0.coords()[i]);
  int rounds = 1;
  while ((1LL << rounds) < K.capacity() + K.e) ++rounds;
  ++rounds;
  for (int it = 0; it < rounds; ++it) {
    std::vector<std::uint64_t> uz = conv_raw(K, d_, z);
    for (size_t i = 0; i < uz.size(); ++i) uz[i] = (two[i] + K.pcap - uz[i]) % K.pcap;
    z = conv_raw(K, z, uz);
  }
  PadicNumber out = zero(ctx_);
  out.d_ = std::move(z);
  out.val_ = -val_;
  out.prec_ = prec_ - 2 * val_;
  out.prec_ = std::min(out.prec_, kInfPrec);
  out.normalize();
  return out;
}

PadicNumber PadicNumber::pow(long long k) const {
  if (k == 0) return from_integer(ctx_, 1);
  PadicNumber base = k < 0 ? inverse() : *this;
  unsigned long long n = k < 0 ? static_cast<unsigned long long>(-(k + 1)) + 1ULL
                               : static_cast<unsigned long long>(k);
  PadicNumber r = from_integer(ctx_, 1);
  while (n) {
    if (n & 1) r = r * base;
    base = base * base;
    n >>= 1;
  }
  return r;
}

bool PadicNumber::is_zero_to_precision() const {
  for (const auto& c : d_)
    if (c) return false;
  return true;
}

bool PadicNumber::is_exact_zero() const { return is_zero_to_precision() && prec_ >= kInfPrec; }

long long PadicNumber::valuation_pi() const {
  if (is_zero_to_precision())
    throw std::domain_error("PadicNumber: valuation of a value that is zero to precision");
  return val_;
}

Valuation PadicNumber::valuation() const {
  Valuation v;
  if (is_zero_to_precision()) {
    v.infinite = true;
    return v;
  }
  const long long g = std::gcd(std::abs(val_), static_cast<long long>(ctx_->e));
  v.num = val_ / (g ? g : 1);
  v.den = ctx_->e / (g ? g : 1);
  if (val_ == 0) { v.num = 0; v.den = 1; }
  return v;
}

long long PadicNumber::known_precision() const { return std::min(prec_, kInfPrec); }

PadicNumber PadicNumber::truncated(long long new_prec) const {
  PadicNumber r = *this;
  r.prec_ = std::min(r.prec_, new_prec);
  r.normalize();
  return r;
}

FqElem PadicNumber::residue() const {
  const FieldCtx& K = *ctx_;
  if (is_zero_to_precision()) {
    if (val_ < 0) throw std::domain_error("PadicNumber: residue needs valuation >= 0");
    return FqElem::zero(K.residue);
  }
  if (val_ < 0) throw std::domain_error("PadicNumber: residue needs valuation >= 0");
  if (val_ > 0) return FqElem::zero(K.residue);
  std::vector<long long> c(K.f);
  for (int i = 0; i < K.f; ++i) c[i] = static_cast<long long>(d_[i] % K.p);
  return FqElem(K.residue, std::move(c));
}

bool operator==(const PadicNumber& a, const PadicNumber& b) {
  if (!same_context(a.ctx_, b.ctx_)) return false;
  return (a - b).is_zero_to_precision();
}

bool operator!=(const PadicNumber& a, const PadicNumber& b) { return !(a == b); }

long long agree_digits(const PadicNumber& a, const PadicNumber& b) {
  if (!same_context(a.field(), b.field()))
    throw std::invalid_argument("agree_digits: context mismatch");
  PadicNumber diff = a - b;
  if (diff.is_zero_to_precision()) return diff.known_precision();
  return diff.valuation_pi();
}

bool agree(const PadicNumber& a, const PadicNumber& b, long long guard) {
  const long long shared = std::min(a.known_precision(), b.known_precision());
  return agree_digits(a, b) >= shared - guard;
}

RawElem PadicNumber::raw() const { return RawElem{val_, prec_, d_}; }

PadicNumber PadicNumber::from_raw(const FieldHandle& K, RawElem r) {
  PadicNumber x;
  x.ctx_ = K;
  x.val_ = r.val;
  x.prec_ = r.prec;
  x.d_ = std::move(r.d);
  x.d_.resize(static_cast<size_t>(K->e) * K->f, 0);
  x.normalize();
  return x;
}

// ---------------------------------------------------------- serialization ---

std::string PadicNumber::to_string() const {
  const FieldCtx& K = *ctx_;
  std::string s = "v=";
  if (is_zero_to_precision()) {
    s += "inf;digits=;prec=";
    s += (prec_ >= kInfPrec) ? "inf" : std::to_string(prec_);
    return s;
  }
  const long long g0 = std::gcd(std::abs(val_), static_cast<long long>(K.e));
  const long long g = g0 ? g0 : static_cast<long long>(K.e);
  if (val_ == 0) s += "0";
  else if (K.e / g == 1) s += std::to_string(val_ / g);
  else s += std::to_string(val_ / g) + "/" + std::to_string(K.e / g);
  s += ";digits=";
  const long long lmax = std::min<long long>(K.levels, ceil_div(prec_ - val_, K.e));
  std::uint64_t plev = 1;
  for (long long L = 0; L < lmax; ++L) {
    if (L) s += ';';
    bool first = true;
    for (int j = 0; j < K.e; ++j)
      for (int i = 0; i < K.f; ++i) {
        const std::uint64_t digit = (d_[static_cast<size_t>(j) * K.f + i] / plev) % K.p;
        if (digit == 0) continue;
        if (!first) s += ',';
        first = false;
        s += std::to_string(i) + ':' + std::to_string(j) + ':' + std::to_string(digit);
      }
    plev *= static_cast<std::uint64_t>(K.p);
  }
  s += ";prec=" + std::to_string(prec_);
  return s;
}

PadicNumber PadicNumber::parse(const FieldHandle& K, const std::string& text) {
  const auto vpos = text.find("v=");
  const auto dpos = text.find(";digits=");
  const auto ppos = text.rfind(";prec=");
  if (vpos != 0 || dpos == std::string::npos || ppos == std::string::npos || ppos < dpos)
    throw std::invalid_argument("PadicNumber::parse: malformed text");
  const std::string vstr = text.substr(2, dpos - 2);
  const std::string dstr = text.substr(dpos + 8, ppos - (dpos + 8));
  const std::string pstr = text.substr(ppos + 6);

  PadicNumber x = zero(K);
  if (vstr == "inf") {
    if (pstr == "inf") return x;
    x.val_ = x.prec_ = std::stoll(pstr);
    return x;
  }
  long long num = 0, den = 1;
  const auto slash = vstr.find('/');
  if (slash == std::string::npos) num = std::stoll(vstr);
  else {
    num = std::stoll(vstr.substr(0, slash));
    den = std::stoll(vstr.substr(slash + 1));
  }
  if (den <= 0 || K->e % den != 0)
    throw std::invalid_argument("PadicNumber::parse: shift denominator must divide e");
  x.val_ = num * (K->e / den);
  x.prec_ = (pstr == "inf") ? kInfPrec : std::stoll(pstr);

  std::uint64_t plev = 1;
  size_t pos = 0;
  long long level = 0;
  while (pos <= dstr.size() && !dstr.empty()) {
    size_t nxt = dstr.find(';', pos);
    if (nxt == std::string::npos) nxt = dstr.size();
    const std::string lv = dstr.substr(pos, nxt - pos);
    size_t tp = 0;
    while (tp < lv.size()) {
      size_t tn = lv.find(',', tp);
      if (tn == std::string::npos) tn = lv.size();
      const std::string trip = lv.substr(tp, tn - tp);
      const auto c1 = trip.find(':');
      const auto c2 = trip.rfind(':');
      if (c1 == std::string::npos || c2 == c1)
        throw std::invalid_argument("PadicNumber::parse: malformed digit triple");
      const long long i = std::stoll(trip.substr(0, c1));
      const long long j = std::stoll(trip.substr(c1 + 1, c2 - c1 - 1));
      const long long digit = std::stoll(trip.substr(c2 + 1));
      if (i < 0 || i >= K->f || j < 0 || j >= K->e || digit < 0 || digit >= K->p)
        throw std::invalid_argument("PadicNumber::parse: digit triple out of range");
      if (level < K->levels)
        x.d_[static_cast<size_t>(j) * K->f + i] += static_cast<std::uint64_t>(digit) * plev;
      tp = tn + 1;
    }
    ++level;
    if (level < K->levels) plev *= static_cast<std::uint64_t>(K->p);
    pos = nxt + 1;
  }
  x.normalize();
  return x;
}

// ------------------------------------------------------------ make_context --

namespace {

// Fixpoint of t -> t^q starting from the coordinate lift; quadratic
// convergence gives one extra correct p-level per round at worst.
PadicNumber teich_fixpoint(const FieldHandle& K, const FqElem& x) {
  if (x.is_zero()) return PadicNumber::zero(K);
  PadicNumber t = PadicNumber::lift(K, x);
  for (int it = 0; it < K->levels + 4; ++it) {
    PadicNumber tn = t.pow(K->residue->q);
    if (tn.raw().d == t.raw().d) return t;
    t = tn;
  }
  throw std::logic_error("teich_fixpoint: no convergence");
}

// Unit part and p-valuation of k! modulo pcap, k = 0..n.
void factorial_tables(long long n, long long p, std::uint64_t pcap,
                      std::vector<std::uint64_t>& unit, std::vector<long long>& val) {
  unit.assign(n + 1, 1);
  val.assign(n + 1, 0);
  for (long long k = 1; k <= n; ++k) {
    long long m = k, v = 0;
    while (m % p == 0) { m /= p; ++v; }
    unit[k] = mulmod(unit[k - 1], static_cast<std::uint64_t>(m) % pcap, pcap);
    val[k] = val[k - 1] + v;
  }
}

}  // namespace

FieldHandle make_context(long long p, int f, bool use_pi, long long precision) {
  if (!is_prime(p) || p > 7) throw std::invalid_argument("make_context: p must be a prime <= 7");
  if (f < 1 || f > 2) throw std::invalid_argument("make_context: f must be 1 or 2");
  if (precision < 4 || precision > 60)
    throw std::invalid_argument("make_context: precision out of range [4, 60]");

  auto ctx = std::make_shared<FieldCtx>();
  ctx->p = p;
  ctx->f = f;
  ctx->use_pi = use_pi;
  ctx->precision = precision;
  ctx->e = use_pi ? static_cast<int>(p - 1) : 1;  // for p = 2 the root is -2, so e = 1
  ctx->levels = static_cast<int>(ceil_div(precision, ctx->e)) + (p == 2 ? 16 : 8);
  ctx->pcap = 1;
  for (int i = 0; i < ctx->levels; ++i) {
    if (ctx->pcap > (1ULL << 62) / static_cast<std::uint64_t>(p))
      throw std::invalid_argument("make_context: precision too deep for the digit window");
    ctx->pcap *= static_cast<std::uint64_t>(p);
  }
  ctx->residue = make_fq(p, f);

  FieldHandle h = ctx;  // caches are filled through the live handle below

  ctx->teich_cache.resize(ctx->residue->q);
  for (long long code = 0; code < ctx->residue->q; ++code) {
    PadicNumber t = teich_fixpoint(h, FqElem::from_encoding(ctx->residue, code));
    ctx->teich_cache[code] = t.truncated(precision).raw();
  }

  if (use_pi) {
    // Splitting series: c_n = sum over n = j + p*m of
    // (-1)^m pi^(j+m) / (j! m!), assembled from exact (unit, valuation) pairs.
    // Legendre gives v_pi(term) = s_p(j) + s_p(m) >= 0, and the total
    // valuation grows at least linearly in n, so the series can be cut once
    // the bound clears the digit window.
    const long long cap = ctx->capacity();
    const long long n0 = ceil_div(cap * p * p, (p - 1) * (p - 1)) + p * p;
    std::vector<std::uint64_t> fu;
    std::vector<long long> fv;
    factorial_tables(n0, p, ctx->pcap, fu, fv);
    ctx->theta_cache.resize(n0 + 1);
    ctx->theta_terms = n0 + 1;
    for (long long n = 0; n <= n0; ++n) {
      PadicNumber cn = PadicNumber::zero(h);
      for (long long m = 0; m * p <= n; ++m) {
        const long long j = n - p * m;
        const long long vfac = fv[j] + fv[m];
        const long long vpi = j + m - ctx->e * vfac;
        std::uint64_t u = mulmod(unit_inverse(fu[j], p, ctx->pcap),
                                 unit_inverse(fu[m], p, ctx->pcap), ctx->pcap);
        if ((m + vfac) % 2 != 0) u = (ctx->pcap - u) % ctx->pcap;
        RawElem term;
        term.val = vpi;
        term.prec = kInfPrec;
        term.d.assign(static_cast<size_t>(ctx->e) * f, 0);
        term.d[0] = u;
        cn = cn + PadicNumber::from_raw(h, std::move(term));
      }
      ctx->theta_cache[n] = cn.raw();
    }

    // zeta = theta(1); cache its first p powers for the additive character.
    PadicNumber zeta = PadicNumber::zero(h);
    for (long long n = 0; n <= n0; ++n)
      zeta = zeta + PadicNumber::from_raw(h, RawElem(ctx->theta_cache[n]));
    zeta = zeta.truncated(precision);
    ctx->zeta_cache.resize(p);
    PadicNumber zp = PadicNumber::from_integer(h, 1);
    for (long long k = 0; k < p; ++k) {
      ctx->zeta_cache[k] = zp.raw();
      zp = zp * zeta;
    }
  }
  return h;
}

// ------------------------------------------------------- special functions --

PadicNumber teichmuller(const FieldHandle& K, const FqElem& x) {
  if (!same_field(K->residue, x.ctx()))
    throw std::invalid_argument("teichmuller: residue field mismatch");
  return PadicNumber::from_raw(K, RawElem(K->teich_cache[x.encoding()]));
}

PadicNumber zeta_root(const FieldHandle& K) {
  if (!K->use_pi) throw std::domain_error("zeta_root: context has no ramified part");
  return PadicNumber::from_raw(K, RawElem(K->zeta_cache[1]));
}

PadicNumber psi_value(const FieldHandle& K, long long trace_mod_p) {
  if (!K->use_pi) throw std::domain_error("psi_value: context has no ramified part");
  long long t = ((trace_mod_p % K->p) + K->p) % K->p;
  return PadicNumber::from_raw(K, RawElem(K->zeta_cache[t]));
}

PadicNumber dwork_theta(const FieldHandle& K, const PadicNumber& teich_pt) {
  if (!K->use_pi) throw std::domain_error("dwork_theta: context has no ramified part");
  if (!same_context(K, teich_pt.field()))
    throw std::invalid_argument("dwork_theta: context mismatch");
  if (!teich_pt.is_zero_to_precision()) {
    PadicNumber fix = teich_pt.pow(K->residue->q);
    if (!agree(fix, teich_pt))
      throw std::invalid_argument("dwork_theta: argument must be a Teichmueller point or zero");
  }
  PadicNumber acc = PadicNumber::zero(K);
  for (long long n = K->theta_terms - 1; n >= 0; --n)
    acc = acc * teich_pt + PadicNumber::from_raw(K, RawElem(K->theta_cache[n]));
  return acc.truncated(K->precision);
}

std::vector<PadicNumber> padic_gamma_batch(const FieldHandle& K,
                                           const std::vector<std::pair<long long, long long>>& args) {
  const long long p = K->p;
  // Depth of the integer approximant: enough p-levels to cover the context
  // precision, bounded by both the digit window and a sweep-cost ceiling.
  long long M = ceil_div(K->precision, K->e) + 1 + (p == 2 ? 2 : 0);
  M = std::min<long long>(M, K->levels - 1);
  std::uint64_t pm = 1;
  long long Meff = 0;
  while (Meff < M) {
    if (pm > 50000000ULL / static_cast<std::uint64_t>(p)) break;
    pm *= static_cast<std::uint64_t>(p);
    ++Meff;
  }
  const long long haircut = (p == 2) ? 2 : 0;  // conservative continuity margin at p = 2

  struct Req { std::uint64_t m; size_t idx; };
  std::vector<Req> reqs;
  reqs.reserve(args.size());
  for (size_t i = 0; i < args.size(); ++i) {
    const long long num = args[i].first, den = args[i].second;
    if (den == 0 || den % p == 0)
      throw std::invalid_argument("padic_gamma: argument must lie in Z_p");
    // num/den mod p^Meff
    std::uint64_t dinv = unit_inverse(static_cast<std::uint64_t>(((den % static_cast<long long>(pm)) +
                                                                  static_cast<long long>(pm)) %
                                                                 static_cast<long long>(pm)),
                                      p, pm);
    std::uint64_t nmod = static_cast<std::uint64_t>(((num % static_cast<long long>(pm)) +
                                                     static_cast<long long>(pm)) %
                                                    static_cast<long long>(pm));
    reqs.push_back({mulmod(nmod, dinv, pm), i});
  }
  std::vector<Req> sorted = reqs;
  std::sort(sorted.begin(), sorted.end(), [](const Req& a, const Req& b) { return a.m < b.m; });

  // One factorial-style sweep: partial products of all j < m with p not
  // dividing j, snapshotted at each requested approximant.
  std::vector<std::uint64_t> snap(args.size(), 1);
  std::uint64_t acc = 1;
  std::uint64_t j = 1;
  for (const Req& r : sorted) {
    while (j < r.m) {
      if (j % p != 0) acc = mulmod(acc, j, pm);
      ++j;
    }
    snap[r.idx] = acc;
  }

  std::vector<PadicNumber> out;
  out.reserve(args.size());
  for (size_t i = 0; i < args.size(); ++i) {
    std::uint64_t u = snap[i];
    if (reqs[i].m % 2 != 0) u = (pm - u) % pm;  // (-1)^m
    RawElem raw;
    raw.val = 0;
    raw.prec = std::min<long long>(K->precision, K->e * (Meff - haircut));
    raw.d.assign(static_cast<size_t>(K->e) * K->f, 0);
    raw.d[0] = u % K->pcap;
    out.push_back(PadicNumber::from_raw(K, std::move(raw)));
  }
  return out;
}

PadicNumber padic_gamma(const FieldHandle& K, long long num, long long den) {
  return padic_gamma_batch(K, {{num, den}})[0];
}

}  // namespace peps
