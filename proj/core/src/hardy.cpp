#include "hardynil/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "hardynil/errors.hpp"

namespace hardynil::hardy {

namespace mp = boost::multiprecision;

std::string GrowthOrder::to_string() const {
  std::string out = "t^{" + hardynil::to_string(power) + "}";
  if (logpow != 0) out += "*log(t)^{" + hardynil::to_string(logpow) + "}";
  return out;
}

// ---------------------------------------------------------------- HardyExpr

HardyExpr::HardyExpr(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.order() > y.order(); });
  for (auto& t : terms) {
    if (!terms_.empty() && terms_.back().power == t.power && terms_.back().logpow == t.logpow) {
      terms_.back().coeff = terms_.back().coeff + t.coeff;
    } else {
      terms_.push_back(std::move(t));
    }
  }
  std::erase_if(terms_, [](const Term& t) { return t.coeff.is_zero(); });
}

HardyExpr HardyExpr::monomial(Coefficient c, Rational power, int logpow) {
  return HardyExpr(std::vector<Term>{Term{std::move(c), std::move(power), logpow}});
}

const Term& HardyExpr::dominant() const {
  if (terms_.empty()) throw PreconditionError("dominant term of the zero function");
  return terms_.front();
}

Coefficient HardyExpr::constant_term() const {
  for (const auto& t : terms_)
    if (t.is_constant()) return t.coeff;
  return {};
}

HardyExpr HardyExpr::operator-() const {
  HardyExpr out = *this;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

HardyExpr operator+(const HardyExpr& f, const HardyExpr& g) {
  std::vector<Term> all = f.terms_;
  all.insert(all.end(), g.terms_.begin(), g.terms_.end());
  return HardyExpr(std::move(all));
}

HardyExpr operator*(const Rational& s, const HardyExpr& f) {
  std::vector<Term> scaled = f.terms_;
  for (auto& t : scaled) t.coeff = t.coeff * s;
  return HardyExpr(std::move(scaled));
}

double HardyExpr::evaluate(double t) const { return Evaluator(*this)(t); }
DD HardyExpr::evaluate(DD t) const { return Evaluator(*this)(t); }

namespace {

std::string monomial_text(const Rational& power, int logpow) {
  std::string out;
  if (power != 0) out = power == 1 ? "t" : "t^{" + hardynil::to_string(power) + "}";
  if (logpow != 0) {
    if (!out.empty()) out += "*";
    out += logpow == 1 ? "log(t)" : "log(t)^{" + std::to_string(logpow) + "}";
  }
  return out;
}

}  // namespace

std::string HardyExpr::to_string() const {
  if (terms_.empty()) return "0";
  // One textual term per nonzero basis component; the parser merges them.
  std::vector<std::pair<bool, std::string>> pieces;
  for (const auto& t : terms_) {
    const std::string mono = monomial_text(t.power, t.logpow);
    for (std::size_t i = 0; i < Coefficient::kBasisSize; ++i) {
      Rational c = t.coeff.component(i);
      if (c == 0) continue;
      const bool negative = c < 0;
      if (negative) c = -c;
      std::string text;
      std::string name = i == 0 ? std::string() : std::string(constant_registry()[i - 1].name);
      if (c != 1 || (name.empty() && mono.empty())) text = hardynil::to_string(c);
      if (!name.empty()) text += (text.empty() ? "" : "*") + name;
      if (!mono.empty()) text += (text.empty() ? "" : "*") + mono;
      pieces.emplace_back(negative, std::move(text));
    }
  }
  std::string out = pieces.front().first ? "-" + pieces.front().second : pieces.front().second;
  for (std::size_t i = 1; i < pieces.size(); ++i) out += (pieces[i].first ? " - " : " + ") + pieces[i].second;
  return out;
}

// ---------------------------------------------------------------- Evaluator

Evaluator::Evaluator(const HardyExpr& f) {
  for (const auto& t : f.terms()) {
    terms_.push_back({t.coeff.to_dd(), to_int64(mp::numerator(t.power)), to_int64(mp::denominator(t.power)),
                      t.logpow});
    needs_log_ = needs_log_ || t.logpow != 0 || mp::denominator(t.power) != 1;
  }
}

namespace {

/// r with r^den == n exactly, if one exists.
std::optional<std::int64_t> exact_root(std::int64_t n, std::int64_t den) {
  if (n < 0) return std::nullopt;
  auto r = static_cast<std::int64_t>(std::llround(std::pow(static_cast<double>(n), 1.0 / static_cast<double>(den))));
  for (std::int64_t cand = std::max<std::int64_t>(r - 1, 0); cand <= r + 1; ++cand) {
    __int128 acc = 1;
    bool overflow = false;
    for (std::int64_t i = 0; i < den && !overflow; ++i) {
      acc *= cand;
      overflow = acc > static_cast<__int128>(n);
    }
    if (!overflow && acc == n) return cand;
  }
  return std::nullopt;
}

}  // namespace

DD Evaluator::operator()(DD t) const {
  DD logt = needs_log_ ? log(t) : DD(0.0);
  DD sum(0.0);
  for (const auto& c : terms_) {
    DD v;
    if (c.den == 1)
      v = powi(t, c.num);
    else if (c.den == 2)
      v = powi(sqrt(t), c.num);
    else
      v = exp(DD(static_cast<double>(c.num)) / DD(static_cast<double>(c.den)) * logt);
    if (c.logpow != 0) v *= powi(logt, c.logpow);
    sum += c.coeff * v;
  }
  return sum;
}

DD Evaluator::at(std::int64_t n) const {
  DD t(n);
  DD logt = needs_log_ ? log(t) : DD(0.0);
  DD sum(0.0);
  for (const auto& c : terms_) {
    DD v;
    if (c.den == 1) {
      v = powi(t, c.num);
    } else if (auto r = exact_root(n, c.den)) {
      v = powi(DD(*r), c.num);
    } else if (c.den == 2) {
      v = powi(sqrt(t), c.num);
    } else {
      v = exp(DD(static_cast<double>(c.num)) / DD(static_cast<double>(c.den)) * logt);
    }
    if (c.logpow != 0) v *= powi(logt, c.logpow);
    sum += c.coeff * v;
  }
  return sum;
}

double Evaluator::operator()(double t) const {
  double logt = std::log(t);
  double sum = 0.0;
  for (const auto& c : terms_) {
    double v = std::pow(t, static_cast<double>(c.num) / static_cast<double>(c.den));
    if (c.logpow != 0) v *= std::pow(logt, c.logpow);
    sum += c.coeff.to_double() * v;
  }
  return sum;
}

// ---------------------------------------------------------------- calculus

HardyExpr differentiate(const HardyExpr& f) {
  std::vector<Term> out;
  for (const auto& t : f.terms()) {
    if (t.power != 0) out.push_back({t.coeff * t.power, t.power - 1, t.logpow});
    if (t.logpow != 0) out.push_back({t.coeff * Rational(t.logpow), t.power - 1, t.logpow - 1});
  }
  return HardyExpr(std::move(out));
}

HardyExpr differentiate(const HardyExpr& f, int times) {
  HardyExpr g = f;
  for (int i = 0; i < times; ++i) g = differentiate(g);
  return g;
}

Comparison compare(const HardyExpr& f, const HardyExpr& g) {
  if (g.is_zero()) throw PreconditionError("compare: division by the zero function");
  if (f.is_zero()) return {Ordering::less, std::nullopt, std::nullopt};
  auto c = f.growth() <=> g.growth();
  if (c < 0) return {Ordering::less, std::nullopt, std::nullopt};
  if (c > 0) return {Ordering::greater, std::nullopt, std::nullopt};
  const auto& cf = f.dominant().coeff;
  const auto& cg = g.dominant().coeff;
  return {Ordering::equivalent, (cf.to_dd() / cg.to_dd()).to_double(), cf.ratio_to(cg)};
}

GrowthClassification classify(const HardyExpr& f) {
  GrowthClassification out{};
  out.is_polynomial = std::all_of(f.terms().begin(), f.terms().end(),
                                  [](const Term& t) { return t.is_polynomial_monomial(); });
  if (f.is_zero()) {
    out.tends_to = Tendency::zero;
    out.polynomial_growth_degree = 0;
    out.is_sublinear = out.is_subfractional = out.is_strongly_nonpolynomial = true;
    return out;
  }
  const Term& d = f.dominant();
  const GrowthOrder g = d.order();
  const GrowthOrder one{0, 0};
  if (g > one) {
    out.tends_to = d.coeff.sign() > 0 ? Tendency::plus_infinity : Tendency::minus_infinity;
  } else if (g == one) {
    out.tends_to = Tendency::finite;
    out.limit = d.coeff;
  } else {
    out.tends_to = Tendency::zero;
  }

  // Smallest k with (power, logpow) <= (k, 0).
  BigInt k = floor_of(d.power);
  if (k < d.power || d.logpow > 0) k += 1;
  out.polynomial_growth_degree = static_cast<int>(to_int64(k < 0 ? BigInt(0) : k));

  out.is_sublinear = g < GrowthOrder{1, 0};
  out.is_subfractional = d.power <= 0;
  if (d.power < 0)
    out.is_strongly_nonpolynomial = true;
  else if (!is_integer(d.power))
    out.is_strongly_nonpolynomial = true;
  else
    out.is_strongly_nonpolynomial = d.logpow > 0 || (d.logpow < 0 && (d.power >= 1 || d.power == 0));
  return out;
}

Decomposition decompose(const HardyExpr& f) {
  std::vector<Term> poly;
  std::vector<Term> rest;
  for (const auto& t : f.terms()) (t.is_polynomial_monomial() ? poly : rest).push_back(t);
  return {HardyExpr(std::move(poly)), HardyExpr(std::move(rest))};
}

namespace {

/// Terms left after removing what a polynomial with coefficients in the
/// given ring can cancel.
HardyExpr uncancellable_part(const HardyExpr& f, bool rational_ring) {
  std::vector<Term> rest;
  for (const auto& t : f.terms()) {
    const bool cancellable =
        t.is_polynomial_monomial() && (rational_ring ? t.coeff.is_rational() : t.coeff.is_integer());
    if (!cancellable) rest.push_back(t);
  }
  return HardyExpr(std::move(rest));
}

P1Result p1_in_ring(const HardyExpr& f, bool rational_ring) {
  HardyExpr rest = uncancellable_part(f, rational_ring);
  if (rest.is_zero() || rest.dominant().power <= 0) return {false, std::nullopt};
  return {true, rest.dominant().power / 2};
}

}  // namespace

P1Result check_P1(const HardyExpr& f) { return p1_in_ring(f, false); }

P2Result check_P2(const HardyExpr& f) {
  for (const auto& t : f.terms()) {
    const bool ok = t.power < 0 || (t.power == 0 && t.logpow <= 0);
    if (!ok) return {false, std::nullopt};
  }
  return {true, f.constant_term()};
}

Mod1Class classify_mod1(const HardyExpr& f) {
  const P1Result p1 = check_P1(f);
  const P2Result p2 = check_P2(f);
  if (!p1.holds && !p2.holds)
    throw PreconditionError("classify_mod1: " + f.to_string() + " satisfies neither P1 nor P2");
  if (p1.holds) {
    // Equidistribution of f(n) mod 1 needs the rational-polynomial version:
    // (1/2)t^2 satisfies P1 but n^2/2 mod 1 only takes the values 0 and 1/2.
    if (!p1_in_ring(f, true).holds)
      throw PreconditionError("classify_mod1: " + f.to_string() +
                              " has a rational polynomial part that is not cancelled mod 1; "
                              "f(n) mod 1 is periodic, not one of the three mod-1 cases");
    return {Mod1Kind::equidistributed, std::nullopt, 0, 0};
  }
  const Coefficient c = *p2.limit;
  if (!c.is_integer()) return {Mod1Kind::converges_nonzero, frac(c.to_dd()).to_double(), 0, 0};
  const HardyExpr deviation = f - HardyExpr::constant(c);
  if (deviation.is_zero()) return {Mod1Kind::converges_zero_signed, std::nullopt, 0, -1};
  const int approach = deviation.dominant().coeff.sign();
  return {Mod1Kind::converges_zero_signed, std::nullopt, approach, approach > 0 ? -1 : 1};
}

std::optional<double> dominance_threshold(const HardyExpr& f, double start, double limit) {
  if (f.is_zero()) return std::nullopt;
  start = std::max(start, 2.0);
  const Term& d = f.dominant();
  const double c0 = std::abs(d.coeff.to_double());
  const double a0 = to_double(d.power);
  const double b0 = d.logpow;
  struct Ratio {
    double logc, da, db;
  };
  std::vector<Ratio> ratios;
  double monotone_from = start;
  for (std::size_t i = 1; i < f.terms().size(); ++i) {
    const Term& t = f.terms()[i];
    Ratio r{std::log(std::abs(t.coeff.to_double()) / c0), to_double(t.power) - a0, t.logpow - b0};
    // d/dt log(ratio) < 0  <=>  da*log t + db < 0.
    if (r.da < 0 && r.db > 0) monotone_from = std::max(monotone_from, std::exp(r.db / -r.da));
    ratios.push_back(r);
  }
  for (double t = monotone_from; t <= limit; t *= 2.0) {
    const double lt = std::log(t);
    const double llt = std::log(lt);
    double sum = 0.0;
    for (const auto& r : ratios) sum += std::exp(r.logc + r.da * lt + r.db * llt);
    if (sum < 1.0) return t;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- linear algebra over term space

namespace {

using Key = std::tuple<Rational, int, std::size_t>;
struct KeyLess {
  bool operator()(const Key& x, const Key& y) const {
    if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
    if (std::get<1>(x) != std::get<1>(y)) return std::get<1>(x) > std::get<1>(y);
    return std::get<2>(x) < std::get<2>(y);
  }
};
using SparseVec = std::map<Key, Rational, KeyLess>;

SparseVec to_vector(const HardyExpr& f) {
  SparseVec v;
  for (const auto& t : f.terms())
    for (std::size_t i = 0; i < Coefficient::kBasisSize; ++i)
      if (t.coeff.component(i) != 0) v[{t.power, t.logpow, i}] = t.coeff.component(i);
  return v;
}

void axpy(SparseVec& y, const Rational& a, const SparseVec& x) {
  for (const auto& [k, v] : x) {
    auto& slot = y[k];
    slot += a * v;
    if (slot == 0) y.erase(k);
  }
}

std::vector<std::vector<Rational>> invert(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) throw PreconditionError("singular change of basis");
    std::swap(m[piv], m[col]);
    std::swap(inv[piv], inv[col]);
    const Rational p = m[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      m[col][j] /= p;
      inv[col][j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      const Rational f = m[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        m[r][j] -= f * m[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

struct Item {
  HardyExpr f;
  std::vector<Rational> combo;  // f = sum combo[i] * inputs[i]
};

bool trivial_snp(const HardyExpr& f) {
  HardyExpr x = decompose(f).snp_part;
  return x.is_zero() || classify(x).tends_to == Tendency::zero;
}

void reduce_items(std::vector<Item> items, std::vector<Item>& out) {
  if (items.empty()) return;
  std::vector<HardyExpr> snp;
  // Nontrivial first, by decreasing non-polynomial growth.
  std::stable_sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
    const bool tx = trivial_snp(x.f), ty = trivial_snp(y.f);
    if (tx != ty) return !tx;
    if (tx) return false;
    return decompose(x.f).snp_part.growth() > decompose(y.f).snp_part.growth();
  });
  std::size_t nontrivial = 0;
  while (nontrivial < items.size() && !trivial_snp(items[nontrivial].f)) ++nontrivial;

  // Highest group of equal growth with at least two members.
  for (std::size_t i = 0; i + 1 < nontrivial; ++i) {
    const HardyExpr xi = decompose(items[i].f).snp_part;
    if (decompose(items[i + 1].f).snp_part.growth() != xi.growth()) continue;
    Item pivot = items[i];
    std::vector<Item> rest;
    for (std::size_t j = 0; j < items.size(); ++j) {
      if (j == i) continue;
      Item it = items[j];
      const HardyExpr xj = decompose(it.f).snp_part;
      if (j < nontrivial && xj.growth() == xi.growth()) {
        auto lambda = xj.dominant().coeff.ratio_to(xi.dominant().coeff);
        if (!lambda)
          throw PreconditionError("growth_basis: leading coefficients of " + it.f.to_string() + " and " +
                                  pivot.f.to_string() + " are not rationally proportional");
        it.f = it.f - (*lambda) * pivot.f;
        for (std::size_t k = 0; k < it.combo.size(); ++k) it.combo[k] -= *lambda * pivot.combo[k];
      }
      rest.push_back(std::move(it));
    }
    out.push_back(std::move(pivot));
    reduce_items(std::move(rest), out);
    return;
  }
  for (auto& it : items) out.push_back(std::move(it));
}

}  // namespace

IndependentSubset independent_subset(std::span<const HardyExpr> inputs) {
  struct Row {
    SparseVec v;
    Key pivot;
    std::vector<Rational> combo;  // over selected indices
  };
  std::vector<Row> rows;
  IndependentSubset out;
  std::vector<std::vector<Rational>> raw_expansion;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    SparseVec v = to_vector(inputs[i]);
    std::vector<Rational> combo(out.indices.size() + 1);
    // v_reduced = inputs[i] - sum mu_r rows_r ; track sum mu_r combo_r.
    std::vector<Rational> used(out.indices.size());
    for (const auto& r : rows) {
      auto it = v.find(r.pivot);
      if (it == v.end()) continue;
      const Rational mu = it->second / r.v.at(r.pivot);
      axpy(v, -mu, r.v);
      for (std::size_t k = 0; k < r.combo.size(); ++k) used[k] += mu * r.combo[k];
    }
    if (v.empty()) {
      raw_expansion.push_back(used);
      continue;
    }
    out.indices.push_back(i);
    Row row;
    row.pivot = v.begin()->first;
    row.v = std::move(v);
    row.combo.assign(out.indices.size(), 0);
    for (std::size_t k = 0; k < used.size(); ++k) row.combo[k] = -used[k];
    row.combo.back() = 1;
    for (auto& r : rows) r.combo.resize(out.indices.size());
    rows.push_back(std::move(row));
    std::vector<Rational> unit(out.indices.size());
    unit.back() = 1;
    raw_expansion.push_back(unit);
  }
  for (auto& e : raw_expansion) e.resize(out.indices.size());
  out.expansion = std::move(raw_expansion);
  return out;
}

std::vector<HardyExpr> GrowthBasis::basis() const {
  std::vector<HardyExpr> all = snp_basis;
  all.insert(all.end(), poly_basis.begin(), poly_basis.end());
  return all;
}

GrowthBasis growth_basis(std::span<const HardyExpr> inputs) {
  const std::size_t k = inputs.size();
  if (independent_subset(inputs).indices.size() != k)
    throw PreconditionError("growth_basis: inputs are linearly dependent; pass an independent subset");
  std::vector<Item> items;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Rational> e(k);
    e[i] = 1;
    items.push_back({inputs[i], std::move(e)});
  }
  std::vector<Item> reduced;
  reduce_items(std::move(items), reduced);

  std::vector<Item> snp, poly;
  for (auto& it : reduced) (trivial_snp(it.f) ? poly : snp).push_back(std::move(it));
  std::stable_sort(snp.begin(), snp.end(), [](const Item& x, const Item& y) {
    return decompose(x.f).snp_part.growth() > decompose(y.f).snp_part.growth();
  });

  GrowthBasis out;
  std::vector<std::vector<Rational>> transform;  // basis = transform * inputs
  for (auto& it : snp) {
    out.snp_basis.push_back(it.f);
    transform.push_back(it.combo);
  }
  for (auto& it : poly) {
    out.poly_basis.push_back(it.f);
    transform.push_back(it.combo);
  }
  out.coeff_matrix = invert(std::move(transform));
  return out;
}

}  // namespace hardynil::hardy
