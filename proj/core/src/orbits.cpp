#include "hardynil/orbits.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <ostream>
#include <thread>

#include "hardynil/errors.hpp"

namespace hardynil::orbits {

namespace {

using nilpotent::LieElement;

double unit_interval(DD x) {
  const double v = x.to_double();
  if (v >= 1.0) return std::nextafter(1.0, 0.0);
  return v < 0.0 ? 0.0 : v;
}
double unit_interval(double v) {
  if (v >= 1.0) return std::nextafter(1.0, 0.0);
  return v < 0.0 ? 0.0 : v;
}

LieElement<double> to_double(const LieElement<DD>& x) {
  LieElement<double> r(x.dim());
  for (int i = 0; i < x.dim(); ++i)
    for (int j = i + 1; j < x.dim(); ++j) r(i, j) = x(i, j).to_double();
  return r;
}

Unitriangular<double> to_double(const Unitriangular<DD>& x) {
  Unitriangular<double> r(x.dim());
  for (int i = 0; i < x.dim(); ++i)
    for (int j = i + 1; j < x.dim(); ++j) r(i, j) = x(i, j).to_double();
  return r;
}

Complex unit_phase(double theta) {
  const double r = theta - std::floor(theta);
  const double a = 2.0 * std::numbers::pi * r;
  return {std::cos(a), std::sin(a)};
}

std::vector<int> parse_int_list(std::string_view s, std::string_view id) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string_view::npos) comma = s.size();
    const std::string_view item = s.substr(pos, comma - pos);
    int v = 0;
    const char* b = item.data();
    if (!item.empty() && item.front() == '+') ++b;
    const auto r = std::from_chars(b, item.data() + item.size(), v);
    if (item.empty() || r.ec != std::errc() || r.ptr != item.data() + item.size())
      throw PreconditionError("unknown test function '" + std::string(id) + "': bad frequency list");
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

std::vector<std::vector<BigInt>> stirling2(int n) {
  std::vector<std::vector<BigInt>> s(static_cast<std::size_t>(n + 1), std::vector<BigInt>(static_cast<std::size_t>(n + 1)));
  s[0][0] = 1;
  for (int j = 1; j <= n; ++j)
    for (int i = 1; i <= j; ++i) s[j][i] = s[j - 1][i - 1] + BigInt(i) * s[j - 1][i];
  return s;
}

/// Signed Stirling numbers of the first kind: (x)_i = sum_j s(i, j) x^j.
std::vector<std::vector<BigInt>> stirling1(int n) {
  std::vector<std::vector<BigInt>> s(static_cast<std::size_t>(n + 1), std::vector<BigInt>(static_cast<std::size_t>(n + 1)));
  s[0][0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= i; ++j) s[i][j] = s[i - 1][j - 1] - BigInt(i - 1) * s[i - 1][j];
  return s;
}

BigInt factorial(int i) {
  BigInt f = 1;
  for (int k = 2; k <= i; ++k) f *= k;
  return f;
}

unsigned worker_count(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Generates samples first..last in parallel batches and hands them to
/// `consume` strictly in order of n.
void for_each_sample(const OrbitEngine& engine, std::int64_t first, std::int64_t last,
                     const std::function<void(const OrbitSample&)>& consume) {
  if (last < first) return;
  if (last > engine.config().n_cap)
    throw PrecisionError("orbit: n = " + std::to_string(last) + " exceeds the precision cap " +
                         std::to_string(engine.config().n_cap));
  const unsigned workers = worker_count(engine.config().threads);
  const std::int64_t batch = 8192 * static_cast<std::int64_t>(workers);
  std::vector<OrbitSample> buffer(static_cast<std::size_t>(batch));
  for (std::int64_t start = first; start <= last; start += batch) {
    const std::int64_t count = std::min(batch, last - start + 1);
    auto work = [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t j = lo; j < hi; ++j) engine.sample_into(start + j, buffer[static_cast<std::size_t>(j)]);
    };
    if (workers == 1 || count < 1024) {
      work(0, count);
    } else {
      std::vector<std::thread> pool;
      const std::int64_t per = (count + workers - 1) / workers;
      for (unsigned w = 0; w < workers; ++w) {
        const std::int64_t lo = per * w, hi = std::min(count, lo + per);
        if (lo < hi) pool.emplace_back(work, lo, hi);
      }
      for (auto& t : pool) t.join();
    }
    for (std::int64_t j = 0; j < count; ++j) consume(buffer[static_cast<std::size_t>(j)]);
  }
}

void check_grid(std::span<const std::int64_t> ns) {
  if (ns.empty()) throw PreconditionError("empty N grid");
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 1) throw PreconditionError("N must be at least 1");
    if (i > 0 && ns[i] < ns[i - 1]) throw PreconditionError("N grid must be ascending");
  }
}

}  // namespace

// ------------------------------------------------------------ OrbitConfig

std::size_t OrbitConfig::coord_count() const {
  std::size_t n = 0;
  for (int d : block_dims) n += static_cast<std::size_t>(d * (d - 1) / 2);
  return n;
}

std::size_t OrbitConfig::horizontal_dim() const {
  std::size_t n = 0;
  for (int d : block_dims) n += static_cast<std::size_t>(d - 1);
  return n;
}

std::size_t OrbitConfig::coord_offset(std::size_t block) const {
  std::size_t n = 0;
  for (std::size_t b = 0; b < block; ++b) n += static_cast<std::size_t>(block_dims[b] * (block_dims[b] - 1) / 2);
  return n;
}

std::size_t OrbitConfig::horizontal_offset(std::size_t block) const {
  std::size_t n = 0;
  for (std::size_t b = 0; b < block; ++b) n += static_cast<std::size_t>(block_dims[b] - 1);
  return n;
}

std::vector<DD> OrbitConfig::generator_horizontal(std::size_t i) const {
  std::vector<DD> u(horizontal_dim(), DD(0.0));
  const auto& g = generators.at(i);
  const auto h = nilpotent::horizontal_projection(g.element);
  std::copy(h.begin(), h.end(), u.begin() + static_cast<std::ptrdiff_t>(horizontal_offset(g.block)));
  return u;
}

void OrbitConfig::validate() const {
  if (block_dims.empty()) throw PreconditionError("orbit: no group blocks");
  for (int d : block_dims)
    if (d < 2) throw PreconditionError("orbit: block dimension must be at least 2");
  if (functions.size() != generators.size())
    throw PreconditionError("orbit: " + std::to_string(functions.size()) + " functions for " +
                            std::to_string(generators.size()) + " generators");
  for (const auto& g : generators) {
    if (g.block >= block_dims.size()) throw PreconditionError("orbit: generator block out of range");
    if (g.element.dim() != block_dims[g.block]) throw PreconditionError("orbit: generator dimension mismatch");
  }
  if (!base_point.blocks.empty() && base_point.dims() != block_dims)
    throw PreconditionError("orbit: base point shape does not match the group");
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = i + 1; j < generators.size(); ++j) {
      if (generators[i].block != generators[j].block) continue;
      const auto c = nilpotent::commutator(generators[i].element, generators[j].element);
      if (nilpotent::max_abs_diff(c, Unitriangular<DD>::identity(c.dim())) > 1e-12)
        throw PreconditionError("orbit: generators " + std::to_string(i) + " and " + std::to_string(j) +
                                " do not commute");
    }
}

// ------------------------------------------------------------ OrbitEngine

OrbitEngine::OrbitEngine(const OrbitConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  if (cfg_.base_point.blocks.empty()) cfg_.base_point = BlockElement<DD>::identity(cfg_.block_dims);
  for (const auto& f : cfg_.functions) evals_.emplace_back(f);
  for (const auto& g : cfg_.generators) {
    logs_dd_.push_back(nilpotent::log(g.element));
    logs_d_.push_back(to_double(logs_dd_.back()));
  }
  for (const auto& b : cfg_.base_point.blocks) base_d_.blocks.push_back(to_double(b));
}

DD OrbitEngine::exponent(std::size_t i, std::int64_t n) const {
  const DD v = evals_[i].at(n);
  return cfg_.floor_mode == FloorMode::integer_part ? floor(v) : v;
}

OrbitSample OrbitEngine::sample(std::int64_t n) const {
  OrbitSample s;
  sample_into(n, s);
  return s;
}

void OrbitEngine::sample_into(std::int64_t n, OrbitSample& out) const {
  if (n < 1) throw PreconditionError("orbit: n must be at least 1");
  if (n > cfg_.n_cap)
    throw PrecisionError("orbit: n = " + std::to_string(n) + " exceeds the precision cap " +
                         std::to_string(cfg_.n_cap));
  out.n = n;
  out.coords.clear();
  out.horiz.clear();
  const std::size_t nb = cfg_.block_dims.size();
  auto finish = [&](auto& blocks) {
    for (std::size_t b = 0; b < nb; ++b) {
      const auto r = nilpotent::reduce_mod_lattice(blocks[b]);
      for (const auto& c : r.coords) out.coords.push_back(unit_interval(c));
      for (int i = 0; i + 1 < r.reduced.dim(); ++i) out.horiz.push_back(unit_interval(r.reduced(i, i + 1)));
    }
  };
  if (cfg_.precision == Precision::double_double) {
    std::vector<Unitriangular<DD>> blocks;
    for (int d : cfg_.block_dims) blocks.emplace_back(d);
    for (std::size_t i = 0; i < cfg_.generators.size(); ++i) {
      const std::size_t b = cfg_.generators[i].block;
      blocks[b] = blocks[b] * nilpotent::exp(exponent(i, n) * logs_dd_[i]);
    }
    for (std::size_t b = 0; b < nb; ++b) blocks[b] = blocks[b] * cfg_.base_point.blocks[b];
    finish(blocks);
  } else {
    std::vector<Unitriangular<double>> blocks;
    for (int d : cfg_.block_dims) blocks.emplace_back(d);
    for (std::size_t i = 0; i < cfg_.generators.size(); ++i) {
      const std::size_t b = cfg_.generators[i].block;
      blocks[b] = blocks[b] * nilpotent::exp(exponent(i, n).to_double() * logs_d_[i]);
    }
    for (std::size_t b = 0; b < nb; ++b) blocks[b] = blocks[b] * base_d_.blocks[b];
    finish(blocks);
  }
}

OrbitSample orbit_point(const OrbitConfig& cfg, std::int64_t n) { return OrbitEngine(cfg).sample(n); }

// ------------------------------------------------------------ summation

std::vector<std::vector<Complex>> prefix_sums(const OrbitEngine& engine, std::span<const std::int64_t> at,
                                              std::size_t width,
                                              const std::function<void(const OrbitSample&, Complex*)>& value,
                                              const std::function<void(const OrbitSample&)>& observe) {
  check_grid(at);
  // Binary-counter stack of complete subtrees: entry (level, sums).
  struct Node {
    int level;
    std::vector<Complex> sum;
  };
  std::vector<Node> stack;
  std::vector<Complex> leaf(width), v(width);
  std::int64_t in_leaf = 0;
  std::size_t next = 0;
  std::vector<std::vector<Complex>> out;
  out.reserve(at.size());

  auto snapshot = [&] {
    std::vector<Complex> total(width, Complex(0.0, 0.0));
    for (auto it = stack.rbegin(); it != stack.rend(); ++it)
      for (std::size_t w = 0; w < width; ++w) total[w] = it->sum[w] + total[w];
    for (std::size_t w = 0; w < width; ++w) total[w] = total[w] + leaf[w];
    return total;
  };

  for_each_sample(engine, 1, at.back(), [&](const OrbitSample& s) {
    value(s, v.data());
    if (observe) observe(s);
    for (std::size_t w = 0; w < width; ++w) leaf[w] += v[w];
    if (++in_leaf == kLeaf) {
      Node node{0, leaf};
      while (!stack.empty() && stack.back().level == node.level) {
        for (std::size_t w = 0; w < width; ++w) node.sum[w] = stack.back().sum[w] + node.sum[w];
        ++node.level;
        stack.pop_back();
      }
      stack.push_back(std::move(node));
      std::fill(leaf.begin(), leaf.end(), Complex(0.0, 0.0));
      in_leaf = 0;
    }
    while (next < at.size() && at[next] == s.n) {
      out.push_back(snapshot());
      ++next;
    }
  });
  return out;
}

Complex weyl_sum(const OrbitConfig& cfg, std::span<const int> m, std::int64_t n) {
  const std::int64_t grid[] = {n};
  return weyl_series(cfg, m, grid).front();
}

std::vector<Complex> weyl_series(const OrbitConfig& cfg, std::span<const int> m, std::span<const std::int64_t> grid) {
  const OrbitEngine engine(cfg);
  if (m.size() != cfg.horizontal_dim())
    throw PreconditionError("weyl_sum: frequency has " + std::to_string(m.size()) + " entries, horizontal torus has " +
                            std::to_string(cfg.horizontal_dim()));
  const std::vector<int> freq(m.begin(), m.end());
  const bool trivial = std::all_of(freq.begin(), freq.end(), [](int x) { return x == 0; });
  const auto sums = prefix_sums(engine, grid, 1, [&](const OrbitSample& s, Complex* out) {
    if (trivial) {
      *out = Complex(1.0, 0.0);
      return;
    }
    double theta = 0.0;
    for (std::size_t j = 0; j < freq.size(); ++j) theta += freq[j] * s.horiz[j];
    *out = unit_phase(theta);
  });
  std::vector<Complex> out;
  for (std::size_t i = 0; i < grid.size(); ++i) out.push_back(sums[i][0] / static_cast<double>(grid[i]));
  return out;
}

// ------------------------------------------------------------ discrepancy

DiscrepancyAccumulator::DiscrepancyAccumulator(std::size_t dim, int grid) : dim_(dim), grid_(grid) {
  if (grid < 2) throw PreconditionError("box_discrepancy: grid must be at least 2");
  if (dim == 0) throw PreconditionError("box_discrepancy: zero dimension");
  double cells = std::pow(static_cast<double>(grid), static_cast<double>(dim));
  if (cells > 1 << 26) throw PreconditionError("box_discrepancy: grid^dim too large");
  cells_.assign(static_cast<std::size_t>(cells), 0);
}

void DiscrepancyAccumulator::add(std::span<const double> point) {
  if (point.size() != dim_) throw PreconditionError("box_discrepancy: point dimension mismatch");
  std::size_t idx = 0;
  for (std::size_t j = dim_; j-- > 0;) {
    int c = static_cast<int>(point[j] * grid_);
    c = std::clamp(c, 0, grid_ - 1);
    idx = idx * static_cast<std::size_t>(grid_) + static_cast<std::size_t>(c);
  }
  ++cells_[idx];
  ++count_;
}

double DiscrepancyAccumulator::value() const {
  if (count_ == 0) throw PreconditionError("box_discrepancy: no samples");
  // Inclusive prefix sums along every axis turn cell counts into counts of
  // anchored boxes.
  std::vector<std::int64_t> box = cells_;
  const std::size_t g = static_cast<std::size_t>(grid_);
  std::size_t stride = 1;
  for (std::size_t axis = 0; axis < dim_; ++axis) {
    for (std::size_t idx = 0; idx < box.size(); ++idx)
      if ((idx / stride) % g != 0) box[idx] += box[idx - stride];
    stride *= g;
  }
  double worst = 0.0;
  const double n = static_cast<double>(count_);
  for (std::size_t idx = 0; idx < box.size(); ++idx) {
    double vol = 1.0;
    std::size_t rest = idx;
    for (std::size_t axis = 0; axis < dim_; ++axis) {
      vol *= static_cast<double>(rest % g + 1) / grid_;
      rest /= g;
    }
    worst = std::max(worst, std::abs(static_cast<double>(box[idx]) / n - vol));
  }
  return worst;
}

double box_discrepancy(std::span<const std::vector<double>> points, int grid) {
  if (points.empty()) throw PreconditionError("box_discrepancy: no samples");
  DiscrepancyAccumulator acc(points.front().size(), grid);
  for (const auto& p : points) acc.add(p);
  return acc.value();
}

std::vector<double> discrepancy_series(const OrbitConfig& cfg, int grid, std::span<const std::int64_t> ns) {
  check_grid(ns);
  const OrbitEngine engine(cfg);
  DiscrepancyAccumulator acc(cfg.coord_count(), grid);
  std::vector<double> out;
  std::size_t next = 0;
  for_each_sample(engine, 1, ns.back(), [&](const OrbitSample& s) {
    acc.add(s.coords);
    while (next < ns.size() && ns[next] == s.n) {
      out.push_back(acc.value());
      ++next;
    }
  });
  return out;
}

// ------------------------------------------------------------ binomial basis

BinomialPolynomial<Rational> to_binomial_basis(std::span<const Rational> monomial) {
  const int d = static_cast<int>(monomial.size()) - 1;
  BinomialPolynomial<Rational> p;
  if (d < 0) return p;
  const auto s = stirling2(d);
  p.coeffs.assign(monomial.size(), Rational(0));
  for (int i = 0; i <= d; ++i) {
    Rational acc = 0;
    for (int j = i; j <= d; ++j) acc += monomial[static_cast<std::size_t>(j)] * s[j][i];
    p.coeffs[static_cast<std::size_t>(i)] = acc * factorial(i);
  }
  while (p.coeffs.size() > 1 && p.coeffs.back() == 0) p.coeffs.pop_back();
  return p;
}

BinomialPolynomial<DD> to_binomial_basis(std::span<const DD> monomial) {
  const int d = static_cast<int>(monomial.size()) - 1;
  BinomialPolynomial<DD> p;
  if (d < 0) return p;
  const auto s = stirling2(d);
  p.coeffs.assign(monomial.size(), DD(0.0));
  for (int i = 0; i <= d; ++i) {
    DD acc(0.0);
    const BigInt fi = factorial(i);
    for (int j = i; j <= d; ++j) acc += monomial[static_cast<std::size_t>(j)] * to_dd(BigInt(s[j][i] * fi));
    p.coeffs[static_cast<std::size_t>(i)] = acc;
  }
  return p;
}

std::vector<Rational> from_binomial_basis(const BinomialPolynomial<Rational>& p) {
  const int d = p.degree();
  std::vector<Rational> c(p.coeffs.size(), Rational(0));
  if (d < 0) return c;
  const auto s = stirling1(d);
  for (int i = 0; i <= d; ++i) {
    const Rational scaled = p.coeffs[static_cast<std::size_t>(i)] / factorial(i);
    for (int j = 0; j <= i; ++j) c[static_cast<std::size_t>(j)] += scaled * s[i][j];
  }
  return c;
}

Rational cinfty_norm(const BinomialPolynomial<Rational>& p, const Rational& n) {
  if (n < 1) throw PreconditionError("cinfty_norm: N must be at least 1");
  Rational best = 0, power = 1;
  for (std::size_t i = 1; i < p.coeffs.size(); ++i) {
    power *= n;
    const Rational f = p.coeffs[i] - Rational(floor_of(p.coeffs[i]));
    const Rational dist = f > Rational(1, 2) ? Rational(1 - f) : f;
    best = std::max(best, Rational(power * dist));
  }
  return best;
}

double cinfty_norm(const BinomialPolynomial<DD>& p, double n) {
  if (!(n >= 1.0)) throw PreconditionError("cinfty_norm: N must be at least 1");
  double best = 0.0, power = 1.0;
  for (std::size_t i = 1; i < p.coeffs.size(); ++i) {
    power *= n;
    best = std::max(best, power * dist_to_int(p.coeffs[i]));
  }
  return best;
}

// ------------------------------------------------------------ obstruction

ObstructionReport obstruction_search(const OrbitConfig& cfg, const windows::WindowPlan& plan, std::int64_t n,
                                     int m_max) {
  cfg.validate();
  if (m_max < 1) throw PreconditionError("obstruction_search: M_max must be at least 1");
  if (n < 2) throw PreconditionError("obstruction_search: N must be at least 2");
  const double L = plan.window_at(n).to_double();

  // Monomial coefficients in h of each window polynomial q_{i,N} + p_{i,N}.
  std::vector<BinomialPolynomial<DD>> basis;
  for (const auto& f : cfg.functions) {
    const auto dec = hardy::decompose(f);
    std::vector<DD> coeffs;
    auto add = [&coeffs](std::size_t j, DD v) {
      if (coeffs.size() <= j) coeffs.resize(j + 1, DD(0.0));
      coeffs[j] += v;
    };
    if (!dec.poly_part.is_zero()) {
      // p(N+h) = sum_j p^(j)(N) h^j / j!, exact up to the degree.
      hardy::HardyExpr d = dec.poly_part;
      DD fact(1.0);
      for (int j = 0; !d.is_zero(); ++j) {
        if (j > 0) fact *= DD(static_cast<double>(j));
        add(static_cast<std::size_t>(j), hardy::Evaluator(d).at(n) / fact);
        d = hardy::differentiate(d);
      }
    }
    const auto& x = dec.snp_part;
    if (!x.is_zero()) {
      const auto cls = hardy::classify(x);
      const bool local_constant = cls.is_subfractional || cls.tends_to == hardy::Tendency::zero ||
                                  cls.tends_to == hardy::Tendency::finite;
      if (!local_constant) {
        std::optional<int> order;
        for (std::size_t j = 0; j < plan.inputs.size(); ++j)
          if (plan.inputs[j] == x || plan.inputs[j] == f) order = plan.orders[j];
        if (!order)
          throw PreconditionError("obstruction_search: window plan has no entry for " + x.to_string());
        const auto w = windows::taylor_window(x, n, *order, L);
        for (std::size_t j = 0; j < w.coeffs.size(); ++j) add(j, w.coeffs[j]);
      } else {
        add(0, x.evaluate(DD(static_cast<double>(n))));
      }
    }
    basis.push_back(to_binomial_basis(coeffs));
  }

  std::size_t width = 0;
  for (const auto& b : basis) width = std::max(width, b.coeffs.size());
  const std::size_t dim = cfg.horizontal_dim();
  std::vector<std::vector<DD>> u;
  for (std::size_t i = 0; i < cfg.generators.size(); ++i) u.push_back(cfg.generator_horizontal(i));

  ObstructionReport report;
  report.n = n;
  report.window_length = L;
  report.min_norm = std::numeric_limits<double>::infinity();
  std::vector<int> k(dim, -m_max);
  BinomialPolynomial<DD> poly;
  for (;;) {
    if (std::any_of(k.begin(), k.end(), [](int x) { return x != 0; })) {
      ++report.frequencies;
      poly.coeffs.assign(width, DD(0.0));
      for (std::size_t i = 0; i < basis.size(); ++i) {
        DD c(0.0);
        for (std::size_t j = 0; j < dim; ++j)
          if (k[j] != 0) c += DD(k[j]) * u[i][j];
        for (std::size_t j = 0; j < basis[i].coeffs.size(); ++j) poly.coeffs[j] += c * basis[i].coeffs[j];
      }
      const double norm = cinfty_norm(poly, L);
      if (norm < report.min_norm) {
        report.min_norm = norm;
        report.argmin = k;
      }
    }
    std::size_t pos = 0;
    while (pos < dim && k[pos] == m_max) k[pos++] = -m_max;
    if (pos == dim) break;
    ++k[pos];
  }
  return report;
}

// ------------------------------------------------------------ test functions

TestFunction TestFunction::parse(std::string_view id) {
  if (id == "one") return one();
  const auto colon = id.find(':');
  if (colon == std::string_view::npos) throw PreconditionError("unknown test function '" + std::string(id) + "'");
  const std::string_view head = id.substr(0, colon);
  std::vector<int> freq = parse_int_list(id.substr(colon + 1), id);
  if (head == "hchar") return TestFunction(Kind::horizontal_character, std::move(freq));
  if (head == "cchar") return TestFunction(Kind::coordinate_character, std::move(freq));
  if (head == "bump") return TestFunction(Kind::bump, std::move(freq));
  throw PreconditionError("unknown test function '" + std::string(id) + "'");
}

std::string TestFunction::id() const {
  std::string out;
  switch (kind_) {
    case Kind::one:
      return "one";
    case Kind::horizontal_character:
      out = "hchar:";
      break;
    case Kind::coordinate_character:
      out = "cchar:";
      break;
    case Kind::bump:
      out = "bump:";
      break;
  }
  for (std::size_t i = 0; i < freq_.size(); ++i) out += (i ? "," : "") + std::to_string(freq_[i]);
  return out;
}

void TestFunction::check_shape(std::size_t coord_count, std::size_t horizontal_dim) const {
  const std::size_t want = kind_ == Kind::one                    ? freq_.size()
                           : kind_ == Kind::horizontal_character ? horizontal_dim
                                                                 : coord_count;
  if (freq_.size() != want)
    throw PreconditionError("test function '" + id() + "' needs " + std::to_string(want) + " frequencies");
}

Complex TestFunction::operator()(std::span<const double> coords, std::span<const double> horiz) const {
  switch (kind_) {
    case Kind::one:
      return {1.0, 0.0};
    case Kind::horizontal_character: {
      double theta = 0.0;
      for (std::size_t j = 0; j < freq_.size(); ++j) theta += freq_[j] * horiz[j];
      return unit_phase(theta);
    }
    case Kind::coordinate_character: {
      double theta = 0.0;
      for (std::size_t j = 0; j < freq_.size(); ++j) theta += freq_[j] * coords[j];
      return unit_phase(theta);
    }
    case Kind::bump: {
      double v = 1.0;
      for (std::size_t j = 0; j < freq_.size(); ++j)
        if (freq_[j] != 0) v *= (1.0 - unit_phase(freq_[j] * coords[j]).real()) / 2.0;
      return {v, 0.0};
    }
  }
  return {0.0, 0.0};
}

Complex TestFunction::integral() const {
  const auto nonzero = std::count_if(freq_.begin(), freq_.end(), [](int x) { return x != 0; });
  switch (kind_) {
    case Kind::one:
      return {1.0, 0.0};
    case Kind::horizontal_character:
    case Kind::coordinate_character:
      return {nonzero == 0 ? 1.0 : 0.0, 0.0};
    case Kind::bump:
      return {std::ldexp(1.0, -static_cast<int>(nonzero)), 0.0};
  }
  return {0.0, 0.0};
}

Complex window_average(const OrbitConfig& cfg, const TestFunction& f, std::int64_t n, std::int64_t window_length) {
  if (n < 1 || window_length < 0) throw PreconditionError("window_average: need N >= 1 and L >= 0");
  f.check_shape(cfg.coord_count(), cfg.horizontal_dim());
  const OrbitEngine engine(cfg);
  Complex sum(0.0, 0.0);
  for_each_sample(engine, n, n + window_length, [&](const OrbitSample& s) { sum += f(s.coords, s.horiz); });
  return sum / static_cast<double>(window_length + 1);
}

void write_samples_csv(std::ostream& os, const OrbitConfig& cfg, std::int64_t first, std::int64_t last) {
  const OrbitEngine engine(cfg);
  os << "n";
  for (std::size_t j = 1; j <= cfg.coord_count(); ++j) os << ",coord_" << j;
  for (std::size_t j = 1; j <= cfg.horizontal_dim(); ++j) os << ",horiz_" << j;
  os << '\n';
  char buf[32];
  auto put = [&](double v) {
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    os << ',' << std::string_view(buf, static_cast<std::size_t>(r.ptr - buf));
  };
  for_each_sample(engine, first, last, [&](const OrbitSample& s) {
    os << s.n;
    for (double c : s.coords) put(c);
    for (double h : s.horiz) put(h);
    os << '\n';
  });
}

}  // namespace hardynil::orbits
