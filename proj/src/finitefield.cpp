#include "peps/finitefield.hpp"

#include <algorithm>
#include <stdexcept>

namespace peps {

namespace {

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

long long power_ll(long long b, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// --- dense polynomials over F_p, little-endian, used only to build contexts ---

using PPoly = std::vector<long long>;

void ptrim(PPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

PPoly pmul(const PPoly& a, const PPoly& b, long long p) {
  if (a.empty() || b.empty()) return {};
  PPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  ptrim(r);
  return r;
}

// a mod m, m monic
PPoly pmod(PPoly a, const PPoly& m, long long p) {
  ptrim(a);
  const int dm = static_cast<int>(m.size()) - 1;
  while (static_cast<int>(a.size()) - 1 >= dm) {
    const int k = static_cast<int>(a.size()) - 1 - dm;
    const long long c = a.back();
    for (int i = 0; i <= dm; ++i) {
      long long& t = a[k + i];
      t = ((t - c * m[i]) % p + p) % p;
    }
    ptrim(a);
  }
  return a;
}

PPoly ppowmod(PPoly base, long long e, const PPoly& m, long long p) {
  PPoly r{1};
  base = pmod(std::move(base), m, p);
  while (e > 0) {
    if (e & 1) r = pmod(pmul(r, base, p), m, p);
    base = pmod(pmul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

PPoly pgcd(PPoly a, PPoly b, long long p) {
  ptrim(a);
  ptrim(b);
  while (!b.empty()) {
    // reduce a mod b after making b monic
    long long lead = b.back();
    long long inv = 1;
    for (long long t = 1; t < p; ++t)
      if (t * lead % p == 1) { inv = t; break; }
    PPoly bm = b;
    for (auto& c : bm) c = c * inv % p;
    a = pmod(std::move(a), bm, p);
    std::swap(a, b);
  }
  return a;
}

bool is_irreducible(const PPoly& m, long long p, int d) {
  // Rabin: x^{p^d} == x mod m, and gcd(x^{p^{d/l}} - x, m) = 1 for prime l | d.
  PPoly x{0, 1};
  PPoly xq = ppowmod(x, power_ll(p, d), m, p);
  if (xq != pmod(x, m, p)) return false;
  int rest = d;
  for (int l = 2; l <= rest; ++l) {
    if (rest % l != 0) continue;
    while (rest % l == 0) rest /= l;
    PPoly xe = ppowmod(x, power_ll(p, d / l), m, p);
    // xe - x
    PPoly diff = xe;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = ((diff[1] - 1) % p + p) % p;
    ptrim(diff);
    PPoly g = pgcd(diff, m, p);
    if (static_cast<int>(g.size()) - 1 != 0) return false;
  }
  return true;
}

std::vector<long long> apply_rows(const std::vector<std::vector<long long>>& rows,
                                  const std::vector<long long>& coords, long long p) {
  const size_t d = rows.empty() ? coords.size() : rows[0].size();
  std::vector<long long> out(d, 0);
  for (size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] == 0) continue;
    for (size_t j = 0; j < d; ++j)
      out[j] = (out[j] + coords[i] * rows[i][j]) % p;
  }
  return out;
}

}  // namespace

FqHandle make_fq(long long p, int d) {
  if (!is_prime(p)) throw std::invalid_argument("make_fq: p must be prime");
  if (d < 1 || d > 12) throw std::invalid_argument("make_fq: degree out of range [1,12]");

  auto ctx = std::make_shared<FqCtx>();
  ctx->p = p;
  ctx->d = d;
  ctx->q = power_ll(p, d);

  // Least monic irreducible: scan coefficient encodings upward.
  const long long span = power_ll(p, d);
  PPoly m;
  for (long long code = 0; code < span; ++code) {
    PPoly cand(d + 1, 0);
    long long a = code;
    for (int i = 0; i < d; ++i) {
      cand[i] = a % p;
      a /= p;
    }
    cand[d] = 1;
    if (is_irreducible(cand, p, d)) {
      m = cand;
      break;
    }
  }
  if (m.empty()) throw std::logic_error("make_fq: no irreducible found");
  ctx->modulus = m;

  // x^{d+k} mod m for schoolbook reduction.
  ctx->red_rows.assign(std::max(0, d - 1), {});
  PPoly cur(d + 1, 0);
  cur[d] = 1;  // x^d
  for (int k = 0; k <= d - 2; ++k) {
    PPoly r = pmod(cur, m, p);
    r.resize(d, 0);
    ctx->red_rows[k] = r;
    cur.insert(cur.begin(), 0);  // multiply by x
  }

  // Frobenius rows: (x^i)^p mod m.
  ctx->frob_rows.resize(d);
  for (int i = 0; i < d; ++i) {
    PPoly xi(i + 1, 0);
    xi[i] = 1;
    PPoly fi = ppowmod(xi, p, m, p);
    fi.resize(d, 0);
    ctx->frob_rows[i] = fi;
  }

  // Trace of basis: Tr(x^i) = sum of Frobenius iterates, constant coefficient.
  ctx->trace_row.resize(d);
  for (int i = 0; i < d; ++i) {
    std::vector<long long> t(d, 0);
    t[i] = 1;
    std::vector<long long> acc = t;
    for (int j = 1; j < d; ++j) {
      t = apply_rows(ctx->frob_rows, t, p);
      for (int k = 0; k < d; ++k) acc[k] = (acc[k] + t[k]) % p;
    }
    for (int k = 1; k < d; ++k)
      if (acc[k] != 0) throw std::logic_error("make_fq: trace not in prime field");
    ctx->trace_row[i] = acc[0];
  }
  return ctx;
}

bool same_field(const FqHandle& a, const FqHandle& b) {
  if (!a || !b) return false;
  return a.get() == b.get() || (a->p == b->p && a->d == b->d);
}

// ---------------------------------------------------------------- FqElem ----

FqElem::FqElem(FqHandle ctx, std::vector<long long> coords) : ctx_(std::move(ctx)) {
  if (!ctx_) throw std::invalid_argument("FqElem: null context");
  coords.resize(ctx_->d, 0);
  for (auto& c : coords) c = ((c % ctx_->p) + ctx_->p) % ctx_->p;
  coords_ = std::move(coords);
}

FqElem FqElem::zero(const FqHandle& ctx) { return FqElem(ctx, {}); }

FqElem FqElem::one(const FqHandle& ctx) { return FqElem(ctx, {1}); }

FqElem FqElem::from_encoding(const FqHandle& ctx, long long code) {
  if (!ctx) throw std::invalid_argument("FqElem: null context");
  if (code < 0 || code >= ctx->q) throw std::invalid_argument("FqElem: encoding out of range");
  std::vector<long long> c(ctx->d, 0);
  for (int i = 0; i < ctx->d; ++i) {
    c[i] = code % ctx->p;
    code /= ctx->p;
  }
  return FqElem(ctx, std::move(c));
}

long long FqElem::encoding() const {
  long long code = 0;
  for (int i = ctx_->d - 1; i >= 0; --i) code = code * ctx_->p + coords_[i];
  return code;
}

bool FqElem::is_zero() const {
  for (long long c : coords_)
    if (c != 0) return false;
  return true;
}

FqElem FqElem::operator-() const {
  std::vector<long long> c(coords_);
  for (auto& v : c) v = (ctx_->p - v) % ctx_->p;
  return FqElem(ctx_, std::move(c));
}

FqElem operator+(const FqElem& a, const FqElem& b) {
  if (!same_field(a.ctx_, b.ctx_)) throw std::invalid_argument("FqElem: field mismatch");
  std::vector<long long> c(a.coords_);
  for (int i = 0; i < a.ctx_->d; ++i) c[i] = (c[i] + b.coords_[i]) % a.ctx_->p;
  return FqElem(a.ctx_, std::move(c));
}

FqElem operator-(const FqElem& a, const FqElem& b) { return a + (-b); }

FqElem operator*(const FqElem& a, const FqElem& b) {
  if (!same_field(a.ctx_, b.ctx_)) throw std::invalid_argument("FqElem: field mismatch");
  const long long p = a.ctx_->p;
  const int d = a.ctx_->d;
  std::vector<long long> conv(2 * d - 1, 0);
  for (int i = 0; i < d; ++i) {
    if (a.coords_[i] == 0) continue;
    for (int j = 0; j < d; ++j)
      conv[i + j] = (conv[i + j] + a.coords_[i] * b.coords_[j]) % p;
  }
  std::vector<long long> out(conv.begin(), conv.begin() + d);
  for (int k = d; k < 2 * d - 1; ++k) {
    if (conv[k] == 0) continue;
    const auto& row = a.ctx_->red_rows[k - d];
    for (int j = 0; j < d; ++j) out[j] = (out[j] + conv[k] * row[j]) % p;
  }
  return FqElem(a.ctx_, std::move(out));
}

FqElem operator/(const FqElem& a, const FqElem& b) { return a * b.inverse(); }

bool operator==(const FqElem& a, const FqElem& b) {
  return same_field(a.ctx_, b.ctx_) && a.coords_ == b.coords_;
}

bool operator!=(const FqElem& a, const FqElem& b) { return !(a == b); }

FqElem FqElem::inverse() const {
  if (is_zero()) throw std::domain_error("FqElem: inverse of zero");
  return pow(ctx_->q - 2);
}

FqElem FqElem::pow(long long k) const {
  if (k < 0) {
    if (is_zero()) throw std::domain_error("FqElem: negative power of zero");
    // reduce modulo the group order once, then go positive
    long long ord = ctx_->q - 1;
    k = ((k % ord) + ord) % ord;
  }
  FqElem r = one(ctx_);
  FqElem b = *this;
  while (k > 0) {
    if (k & 1) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}

FqElem FqElem::frobenius() const {
  return FqElem(ctx_, apply_rows(ctx_->frob_rows, coords_, ctx_->p));
}

long long FqElem::trace_to_prime() const {
  long long t = 0;
  for (int i = 0; i < ctx_->d; ++i) t = (t + coords_[i] * ctx_->trace_row[i]) % ctx_->p;
  return t;
}

std::string FqElem::to_string() const { return std::to_string(encoding()); }

// ---------------------------------------------------------------- FqTower ---

FqTower make_tower(const FqHandle& base, int n) {
  if (!base) throw std::invalid_argument("make_tower: null base");
  if (n < 1) throw std::invalid_argument("make_tower: n must be >= 1");
  FqTower t;
  t.base = base;
  t.n = n;
  t.ext = (n == 1) ? base : make_fq(base->p, base->d * n);

  const long long p = base->p;
  const int f = base->d;
  const int de = t.ext->d;

  // Image of the base generator: least-encoded root of the base modulus in ext.
  FqElem root = FqElem::zero(t.ext);
  if (n == 1) {
    root = FqElem::from_encoding(t.ext, (f == 1) ? 0 : p);  // x itself (or 0 when f=1)
  } else {
    bool found = false;
    for (long long code = 0; code < t.ext->q; ++code) {
      FqElem cand = FqElem::from_encoding(t.ext, code);
      // Horner with prime-field scalar coefficients of the base modulus.
      FqElem acc = FqElem::zero(t.ext);
      for (int i = f; i >= 0; --i) {
        acc = acc * cand;
        std::vector<long long> cv(de, 0);
        cv[0] = base->modulus[i];
        acc = acc + FqElem(t.ext, std::move(cv));
      }
      if (acc.is_zero()) {
        root = cand;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("make_tower: base modulus has no root in extension");
  }

  t.embed_basis.clear();
  FqElem powr = FqElem::one(t.ext);
  for (int i = 0; i < f; ++i) {
    t.embed_basis.push_back(powr);
    powr = powr * root;
  }

  // Section: Gaussian elimination on the de x f matrix of embedded basis
  // vectors, with a transform matrix T so that pivot rows of T recover base
  // coordinates from extension coordinates.
  std::vector<std::vector<long long>> A(de, std::vector<long long>(f, 0));
  for (int c = 0; c < f; ++c)
    for (int r = 0; r < de; ++r) A[r][c] = t.embed_basis[c].coords()[r];
  std::vector<std::vector<long long>> T(de, std::vector<long long>(de, 0));
  for (int r = 0; r < de; ++r) T[r][r] = 1;

  auto inv_mod_p = [p](long long v) {
    for (long long t2 = 1; t2 < p; ++t2)
      if (t2 * v % p == 1) return t2;
    throw std::logic_error("inv_mod_p: not invertible");
  };

  int row = 0;
  std::vector<int> pivot_row_of_col(f, -1);
  for (int col = 0; col < f && row < de; ++col) {
    int pr = -1;
    for (int r = row; r < de; ++r)
      if (A[r][col] != 0) { pr = r; break; }
    if (pr == -1) throw std::logic_error("make_tower: embedding matrix rank-deficient");
    std::swap(A[pr], A[row]);
    std::swap(T[pr], T[row]);
    const long long inv = inv_mod_p(A[row][col]);
    for (int c = 0; c < f; ++c) A[row][c] = A[row][c] * inv % p;
    for (int c = 0; c < de; ++c) T[row][c] = T[row][c] * inv % p;
    for (int r = 0; r < de; ++r) {
      if (r == row || A[r][col] == 0) continue;
      const long long m = A[r][col];
      for (int c = 0; c < f; ++c) A[r][c] = ((A[r][c] - m * A[row][c]) % p + p) % p;
      for (int c = 0; c < de; ++c) T[r][c] = ((T[r][c] - m * T[row][c]) % p + p) % p;
    }
    pivot_row_of_col[col] = row;
    ++row;
  }
  t.section.assign(f, std::vector<long long>(de, 0));
  for (int col = 0; col < f; ++col) t.section[col] = T[pivot_row_of_col[col]];

  // q-Frobenius rows: d/dbasis images of x -> x^{p^f} in the extension.
  t.qfrob_rows_.resize(de);
  for (int i = 0; i < de; ++i) {
    std::vector<long long> v(de, 0);
    v[i] = 1;
    for (int j = 0; j < f; ++j) v = apply_rows(t.ext->frob_rows, v, p);
    t.qfrob_rows_[i] = v;
  }
  return t;
}

FqElem FqTower::embed(const FqElem& xb) const {
  if (!same_field(xb.ctx(), base)) throw std::invalid_argument("FqTower::embed: wrong field");
  FqElem acc = FqElem::zero(ext);
  for (int i = 0; i < base->d; ++i) {
    if (xb.coords()[i] == 0) continue;
    std::vector<long long> scaled = embed_basis[i].coords();
    for (auto& c : scaled) c = c * xb.coords()[i] % base->p;
    acc = acc + FqElem(ext, std::move(scaled));
  }
  return acc;
}

FqElem FqTower::pull_back(const FqElem& xe) const {
  std::vector<long long> out(base->d, 0);
  for (int i = 0; i < base->d; ++i) {
    long long s = 0;
    for (int j = 0; j < ext->d; ++j) s = (s + section[i][j] * xe.coords()[j]) % base->p;
    out[i] = s;
  }
  FqElem r(base, std::move(out));
  if (embed(r) != xe) throw std::domain_error("FqTower: element not in base field image");
  return r;
}

FqElem FqTower::q_frobenius(const FqElem& xe) const {
  if (!same_field(xe.ctx(), ext)) throw std::invalid_argument("FqTower::q_frobenius: wrong field");
  return FqElem(ext, apply_rows(qfrob_rows_, xe.coords(), ext->p));
}

FqElem FqTower::trace_to_base(const FqElem& xe) const {
  FqElem t = xe;
  FqElem acc = xe;
  for (int i = 1; i < n; ++i) {
    t = q_frobenius(t);
    acc = acc + t;
  }
  return pull_back(acc);
}

FqElem FqTower::norm_to_base(const FqElem& xe) const {
  FqElem t = xe;
  FqElem acc = xe;
  for (int i = 1; i < n; ++i) {
    t = q_frobenius(t);
    acc = acc * t;
  }
  return pull_back(acc);
}

// ---------------------------------------------------------------- FqPoly ----

FqPoly::FqPoly(FqHandle ctx, std::vector<FqElem> coeffs)
    : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {
  if (!ctx_) throw std::invalid_argument("FqPoly: null context");
  normalize();
}

void FqPoly::normalize() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

FqPoly FqPoly::zero(const FqHandle& ctx) { return FqPoly(ctx, {}); }

FqPoly FqPoly::constant(const FqElem& c) { return FqPoly(c.ctx(), {c}); }

FqPoly FqPoly::from_encodings(const FqHandle& ctx, const std::vector<long long>& codes) {
  std::vector<FqElem> cs;
  cs.reserve(codes.size());
  for (long long c : codes) cs.push_back(FqElem::from_encoding(ctx, c));
  return FqPoly(ctx, std::move(cs));
}

int FqPoly::degree() const { return static_cast<int>(coeffs_.size()) - 1; }

bool FqPoly::is_monic() const {
  return !coeffs_.empty() && coeffs_.back() == FqElem::one(ctx_);
}

FqElem FqPoly::leading() const {
  if (coeffs_.empty()) throw std::domain_error("FqPoly: leading of zero");
  return coeffs_.back();
}

FqPoly operator+(const FqPoly& a, const FqPoly& b) {
  if (!same_field(a.ctx_, b.ctx_)) throw std::invalid_argument("FqPoly: field mismatch");
  std::vector<FqElem> c(std::max(a.coeffs_.size(), b.coeffs_.size()), FqElem::zero(a.ctx_));
  for (size_t i = 0; i < a.coeffs_.size(); ++i) c[i] = c[i] + a.coeffs_[i];
  for (size_t i = 0; i < b.coeffs_.size(); ++i) c[i] = c[i] + b.coeffs_[i];
  return FqPoly(a.ctx_, std::move(c));
}

FqPoly operator-(const FqPoly& a, const FqPoly& b) {
  if (!same_field(a.ctx_, b.ctx_)) throw std::invalid_argument("FqPoly: field mismatch");
  std::vector<FqElem> c(std::max(a.coeffs_.size(), b.coeffs_.size()), FqElem::zero(a.ctx_));
  for (size_t i = 0; i < a.coeffs_.size(); ++i) c[i] = c[i] + a.coeffs_[i];
  for (size_t i = 0; i < b.coeffs_.size(); ++i) c[i] = c[i] - b.coeffs_[i];
  return FqPoly(a.ctx_, std::move(c));
}

FqPoly operator*(const FqPoly& a, const FqPoly& b) {
  if (!same_field(a.ctx_, b.ctx_)) throw std::invalid_argument("FqPoly: field mismatch");
  if (a.is_zero() || b.is_zero()) return FqPoly::zero(a.ctx_);
  std::vector<FqElem> c(a.coeffs_.size() + b.coeffs_.size() - 1, FqElem::zero(a.ctx_));
  for (size_t i = 0; i < a.coeffs_.size(); ++i)
    for (size_t j = 0; j < b.coeffs_.size(); ++j)
      c[i + j] = c[i + j] + a.coeffs_[i] * b.coeffs_[j];
  return FqPoly(a.ctx_, std::move(c));
}

bool operator==(const FqPoly& a, const FqPoly& b) {
  if (!same_field(a.ctx_, b.ctx_)) return false;
  if (a.coeffs_.size() != b.coeffs_.size()) return false;
  for (size_t i = 0; i < a.coeffs_.size(); ++i)
    if (a.coeffs_[i] != b.coeffs_[i]) return false;
  return true;
}

bool operator!=(const FqPoly& a, const FqPoly& b) { return !(a == b); }

FqPoly FqPoly::monic() const {
  if (is_zero()) throw std::domain_error("FqPoly: monic of zero");
  FqElem inv = leading().inverse();
  std::vector<FqElem> c = coeffs_;
  for (auto& v : c) v = v * inv;
  return FqPoly(ctx_, std::move(c));
}

FqElem FqPoly::eval(const FqElem& x) const {
  FqElem acc = FqElem::zero(ctx_);
  for (int i = degree(); i >= 0; --i) acc = acc * x + coeffs_[i];
  return acc;
}

void FqPoly::divmod(const FqPoly& a, const FqPoly& b, FqPoly& quo, FqPoly& rem) {
  if (b.is_zero()) throw std::domain_error("FqPoly: division by zero");
  const FqHandle& k = a.ctx_;
  std::vector<FqElem> r = a.coeffs_;
  std::vector<FqElem> q(std::max<int>(0, a.degree() - b.degree() + 1), FqElem::zero(k));
  const FqElem lead_inv = b.leading().inverse();
  for (int i = a.degree(); i >= b.degree(); --i) {
    if (static_cast<int>(r.size()) - 1 < i) continue;
    FqElem c = r[i] * lead_inv;
    if (c.is_zero()) continue;
    q[i - b.degree()] = c;
    for (int j = 0; j <= b.degree(); ++j)
      r[i - b.degree() + j] = r[i - b.degree() + j] - c * b.coeffs_[j];
  }
  quo = FqPoly(k, std::move(q));
  rem = FqPoly(k, std::move(r));
}

FqPoly FqPoly::gcd(const FqPoly& a, const FqPoly& b) {
  FqPoly x = a, y = b;
  while (!y.is_zero()) {
    FqPoly q, r;
    divmod(x, y, q, r);
    x = y;
    y = r;
  }
  if (x.is_zero()) return x;
  return x.monic();
}

FqPoly FqPoly::derivative() const {
  if (degree() < 1) return FqPoly::zero(ctx_);
  std::vector<FqElem> c;
  for (int i = 1; i <= degree(); ++i) {
    std::vector<long long> scaled = coeffs_[i].coords();
    for (auto& v : scaled) v = v * i % ctx_->p;
    c.push_back(FqElem(ctx_, std::move(scaled)));
  }
  return FqPoly(ctx_, std::move(c));
}

std::string FqPoly::to_string() const {
  if (is_zero()) return "0";
  std::string s;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(coeffs_[i].encoding());
  }
  return s;
}

// ------------------------------------------------------------ ClosedPoint ---

ClosedPoint ClosedPoint::infinity_point() {
  ClosedPoint x;
  x.at_infinity = true;
  x.degree = 1;
  return x;
}

ClosedPoint ClosedPoint::finite_point(FqPoly minimal_poly) {
  if (minimal_poly.degree() < 1 || !minimal_poly.is_monic())
    throw std::invalid_argument("ClosedPoint: minimal polynomial must be monic nonconstant");
  ClosedPoint x;
  x.at_infinity = false;
  x.degree = minimal_poly.degree();
  x.minimal = std::move(minimal_poly);
  return x;
}

ClosedPoint ClosedPoint::rational(const FqElem& s) {
  return finite_point(FqPoly(s.ctx(), {-s, FqElem::one(s.ctx())}));
}

std::string ClosedPoint::to_string() const {
  if (at_infinity) return "inf";
  return minimal.to_string();
}

ClosedPoint ClosedPoint::parse(const FqHandle& ctx, const std::string& text) {
  if (text == "inf") return infinity_point();
  std::vector<long long> codes;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nxt = text.find(',', pos);
    if (nxt == std::string::npos) nxt = text.size();
    codes.push_back(std::stoll(text.substr(pos, nxt - pos)));
    pos = nxt + 1;
  }
  return finite_point(FqPoly::from_encodings(ctx, codes));
}

std::vector<ClosedPoint> closed_points(const FqHandle& ctx, int max_degree) {
  if (max_degree < 1) throw std::invalid_argument("closed_points: max_degree must be >= 1");
  long long total = 0, powq = 1;
  for (int d = 1; d <= max_degree; ++d) {
    powq *= ctx->q;
    total += powq;
    if (total > 1000000) throw std::invalid_argument("closed_points: enumeration too large");
  }

  std::vector<ClosedPoint> out;
  out.push_back(ClosedPoint::infinity_point());
  std::vector<FqPoly> small_irreducibles;  // trial divisors, degree <= max_degree/2
  for (int d = 1; d <= max_degree; ++d) {
    long long span = 1;
    for (int i = 0; i < d; ++i) span *= ctx->q;
    for (long long code = 0; code < span; ++code) {
      std::vector<FqElem> cs;
      cs.reserve(d + 1);
      long long a = code;
      for (int i = 0; i < d; ++i) {
        cs.push_back(FqElem::from_encoding(ctx, a % ctx->q));
        a /= ctx->q;
      }
      cs.push_back(FqElem::one(ctx));
      FqPoly cand(ctx, std::move(cs));
      bool irred = true;
      for (const auto& f : small_irreducibles) {
        if (f.degree() > d / 2) break;
        FqPoly q, r;
        FqPoly::divmod(cand, f, q, r);
        if (r.is_zero()) {
          irred = false;
          break;
        }
      }
      if (!irred) continue;
      if (d <= max_degree / 2) small_irreducibles.push_back(cand);
      out.push_back(ClosedPoint::finite_point(std::move(cand)));
    }
  }
  return out;
}

long long irreducible_count(long long q, int d) {
  // Moebius-inverted necklace count (1/d) sum_{e|d} mu(e) q^{d/e}.
  auto mu = [](int n) {
    int m = 1;
    for (int l = 2; l * l <= n; ++l) {
      if (n % l) continue;
      n /= l;
      if (n % l == 0) return 0;
      m = -m;
    }
    if (n > 1) m = -m;
    return m;
  };
  long long s = 0;
  for (int e = 1; e <= d; ++e) {
    if (d % e) continue;
    long long t = 1;
    for (int i = 0; i < d / e; ++i) t *= q;
    s += mu(e) * t;
  }
  return s / d;
}

std::vector<FqElem> residues_of_point(const ClosedPoint& x, const FqTower& tower) {
  if (x.at_infinity) return {};
  if (tower.n % x.degree != 0) return {};
  // Embed coefficients, then scan the extension for roots.  Fine for the
  // test-sized fields this is used on; the L-function path never calls this.
  if (tower.ext->q > 2000000)
    throw std::invalid_argument("residues_of_point: extension too large to scan");
  std::vector<FqElem> ecoeffs;
  for (const auto& c : x.minimal.coeffs()) ecoeffs.push_back(tower.embed(c));
  std::vector<FqElem> roots;
  for (long long code = 0; code < tower.ext->q; ++code) {
    FqElem cand = FqElem::from_encoding(tower.ext, code);
    FqElem acc = FqElem::zero(tower.ext);
    for (int i = static_cast<int>(ecoeffs.size()) - 1; i >= 0; --i)
      acc = acc * cand + ecoeffs[i];
    if (acc.is_zero()) roots.push_back(cand);
  }
  return roots;
}

}  // namespace peps
