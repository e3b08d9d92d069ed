#include "hardynil/cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include "hardynil/averages.hpp"
#include "hardynil/cli/config.hpp"
#include "hardynil/errors.hpp"

namespace hardynil::cli {

namespace {

std::string num(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

/// Output sink: the --out file when given, otherwise the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot write '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

/// Two-column `x y` files, one per statistic, under --emit-plot.
class Plotter {
 public:
  explicit Plotter(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
  }
  void write(const std::string& stat, const std::vector<std::pair<double, double>>& xy) const {
    if (dir_.empty()) return;
    std::ofstream f(std::filesystem::path(dir_) / (stat + ".dat"));
    if (!f) throw ConfigError("cannot write plot file for " + stat);
    for (const auto& [x, y] : xy) f << num(x) << ' ' << num(y) << '\n';
  }

 private:
  std::string dir_;
};

struct Common {
  std::string config_path, out_path, plot_dir, n_text, grid_text;
  int threads = -1;

  ExperimentConfig load() const {
    ExperimentConfig cfg = load_config(config_path);
    if (threads >= 0) cfg.threads = static_cast<unsigned>(threads);
    return cfg;
  }
  /// --N, else --grid, else the config's N_grid.
  std::vector<std::int64_t> grid(const ExperimentConfig& cfg) const {
    if (!n_text.empty()) return parse_grid(n_text);
    if (!grid_text.empty()) return parse_grid(grid_text);
    if (cfg.n_grid.empty()) throw ConfigError("no N given: use --N, --grid or N_grid in the config");
    return cfg.n_grid;
  }
};

void add_common(CLI::App* cmd, Common& c, bool with_grid) {
  cmd->add_option("config", c.config_path, "experiment JSON")->required();
  cmd->add_option("--out", c.out_path, "CSV output file (default stdout)");
  cmd->add_option("--emit-plot", c.plot_dir, "directory for two-column x y files");
  cmd->add_option("--threads", c.threads, "worker threads (0 = all cores)");
  cmd->add_option("--N", c.n_text, "N, a comma list, or a:b:decade");
  if (with_grid) cmd->add_option("--grid", c.grid_text, "a:b:decade or a comma list");
}

std::string tendency_name(hardy::Tendency t) {
  switch (t) {
    case hardy::Tendency::plus_infinity:
      return "+inf";
    case hardy::Tendency::minus_infinity:
      return "-inf";
    case hardy::Tendency::finite:
      return "finite";
    case hardy::Tendency::zero:
      return "zero";
  }
  return "?";
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

int cmd_classify(const std::vector<std::string>& exprs, std::ostream& out) {
  std::vector<hardy::HardyExpr> fs;
  for (const auto& text : exprs) fs.push_back(hardy::parse(text));
  out << "expression,P1,P2,limit,tends_to,growth_degree,strongly_nonpolynomial,mod1,usable\n";
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const auto& text = exprs[i];
    const auto& f = fs[i];
    const auto p1 = hardy::check_P1(f);
    const auto p2 = hardy::check_P2(f);
    const auto cls = hardy::classify(f);
    std::string mod1 = "-";
    if (p1.holds || p2.holds) {
      const auto m = hardy::classify_mod1(f);
      switch (m.kind) {
        case hardy::Mod1Kind::equidistributed:
          mod1 = "equidistributed";
          break;
        case hardy::Mod1Kind::converges_nonzero:
          mod1 = "converges_to_" + num(*m.limit_frac);
          break;
        case hardy::Mod1Kind::converges_zero_signed:
          mod1 = std::string("converges_to_0") + (m.approach > 0 ? "+" : m.approach < 0 ? "-" : "");
          break;
      }
    }
    out << csv_quote(text) << ',' << (p1.holds ? "holds" : "fails") << ',' << (p2.holds ? "holds" : "fails") << ','
        << (p2.limit ? csv_quote(p2.limit->to_string()) : "") << ',' << tendency_name(cls.tends_to) << ','
        << cls.polynomial_growth_degree << ',' << (cls.is_strongly_nonpolynomial ? "yes" : "no") << ',' << mod1
        << ',' << (p1.holds || p2.holds ? "yes" : "unusable") << '\n';
  }
  return kOk;
}

int cmd_window(const Common& c, std::ostream& out, std::ostream& err) {
  const auto cfg = c.load();
  const auto plan = window_plan(cfg);
  Sink sink(c.out_path, out);
  *sink << "function,order,class_lower,class_upper,gamma,member\n";
  for (std::size_t i = 0; i < plan.inputs.size(); ++i) {
    const auto b = windows::class_bounds(plan.inputs[i], plan.orders[i]);
    *sink << csv_quote(plan.inputs[i].to_string()) << ',' << plan.orders[i] << ',' << csv_quote(b.lower.to_string())
          << ',' << csv_quote(b.upper.to_string()) << ',' << to_string(plan.gamma) << ','
          << (windows::member(plan.window(), plan.inputs[i], plan.orders[i]) ? "yes" : "no") << '\n';
  }
  err << "window L(t) = t^{" << to_string(plan.gamma) << "}\n";
  return kOk;
}

int cmd_orbit(const Common& c, std::ostream& out, std::ostream& err) {
  const auto cfg = c.load();
  const auto grid = c.grid(cfg);
  const auto oc = to_orbit_config(cfg);
  Sink sink(c.out_path, out);
  orbits::write_samples_csv(*sink, oc, 1, grid.back());
  if (!c.plot_dir.empty()) {
    const orbits::OrbitEngine engine(oc);
    std::vector<std::pair<double, double>> xy;
    for (std::int64_t n = 1; n <= grid.back(); ++n) {
      const auto s = engine.sample(n);
      xy.emplace_back(s.horiz.size() > 1 ? s.horiz[0] : static_cast<double>(n), s.horiz.size() > 1 ? s.horiz[1] : s.horiz[0]);
    }
    Plotter(c.plot_dir).write("horizontal", xy);
  }
  err << "wrote " << grid.back() << " orbit points\n";
  return kOk;
}

/// Frequency on the full horizontal torus: --m, else the concatenated
/// horizontal characters of the configured tests.
std::vector<int> weyl_frequency(const ExperimentConfig& cfg, const std::string& m_text) {
  std::vector<int> m;
  if (!m_text.empty()) {
    try {
      m = orbits::TestFunction::parse("hchar:" + m_text).frequencies();
    } catch (const PreconditionError&) {
      throw ConfigError("--m: expected a comma list of integers");
    }
    return m;
  }
  if (cfg.tests.empty()) throw ConfigError("weyl: no frequency; give --m or horizontal characters in 'tests'");
  for (std::size_t i = 0; i < cfg.tests.size(); ++i) {
    const auto f = orbits::TestFunction::parse(cfg.tests[i]);
    if (f.kind() == orbits::TestFunction::Kind::one) {
      m.insert(m.end(), static_cast<std::size_t>(cfg.dims[i] - 1), 0);
    } else if (f.kind() == orbits::TestFunction::Kind::horizontal_character) {
      m.insert(m.end(), f.frequencies().begin(), f.frequencies().end());
    } else {
      throw ConfigError("weyl: test '" + cfg.tests[i] + "' is not a horizontal character; give --m");
    }
  }
  return m;
}

int cmd_weyl(const Common& c, const std::string& m_text, std::ostream& out, std::ostream& err) {
  const auto cfg = c.load();
  const auto grid = c.grid(cfg);
  const auto m = weyl_frequency(cfg, m_text);
  const auto sums = orbits::weyl_series(to_orbit_config(cfg), m, grid);
  Sink sink(c.out_path, out);
  *sink << "N,re(S_N),im(S_N),abs(S_N)\n";
  std::vector<std::pair<double, double>> xy;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    *sink << grid[i] << ',' << num(sums[i].real()) << ',' << num(sums[i].imag()) << ',' << num(std::abs(sums[i]))
          << '\n';
    xy.emplace_back(static_cast<double>(grid[i]), std::abs(sums[i]));
  }
  Plotter(c.plot_dir).write("abs_S", xy);
  err << "N=" << grid.back() << " |S_N|=" << num(std::abs(sums.back())) << '\n';
  return kOk;
}

int cmd_discrepancy(const Common& c, int cells, std::ostream& out, std::ostream& err) {
  const auto cfg = c.load();
  const auto grid = c.grid(cfg);
  const auto d = orbits::discrepancy_series(to_orbit_config(cfg), cells, grid);
  Sink sink(c.out_path, out);
  *sink << "N,discrepancy\n";
  std::vector<std::pair<double, double>> xy;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    *sink << grid[i] << ',' << num(d[i]) << '\n';
    xy.emplace_back(static_cast<double>(grid[i]), d[i]);
  }
  Plotter(c.plot_dir).write("discrepancy", xy);
  err << "N=" << grid.back() << " D_N=" << num(d.back()) << '\n';
  return kOk;
}

int cmd_obstruction(const Common& c, int m_max, std::ostream& out, std::ostream& err) {
  const auto cfg = c.load();
  const auto grid = c.grid(cfg);
  const auto oc = to_orbit_config(cfg);
  const auto plan = window_plan(cfg);
  Sink sink(c.out_path, out);
  *sink << "N,L,min_norm,argmin,frequencies\n";
  std::vector<std::pair<double, double>> xy;
  for (std::int64_t n : grid) {
    const auto r = orbits::obstruction_search(oc, plan, n, m_max);
    std::string k;
    for (std::size_t j = 0; j < r.argmin.size(); ++j) k += (j ? " " : "") + std::to_string(r.argmin[j]);
    *sink << n << ',' << num(r.window_length) << ',' << num(r.min_norm) << ',' << k << ',' << r.frequencies << '\n';
    xy.emplace_back(static_cast<double>(n), r.min_norm);
  }
  Plotter(c.plot_dir).write("min_norm", xy);
  if (xy.size() > 1 && xy.front().second > 0)
    err << "min norm growth " << num(xy.back().second / xy.front().second) << "x from N=" << grid.front()
        << " to N=" << grid.back() << '\n';
  return kOk;
}

int cmd_average(const Common& c, std::ostream& out, std::ostream& err) {
  const auto cfg = c.load();
  const auto grid = c.grid(cfg);
  const auto series = averages::convergence_series(to_experiment(cfg), grid);
  Sink sink(c.out_path, out);
  series.write_csv(*sink);
  std::vector<std::pair<double, double>> abs_a, err_xy, inc;
  for (const auto& r : series.rows) {
    const double n = static_cast<double>(r.n);
    abs_a.emplace_back(n, std::abs(r.value));
    if (r.limit) err_xy.emplace_back(n, r.abs_err);
    if (!std::isnan(r.cauchy_inc)) inc.emplace_back(n, r.cauchy_inc);
  }
  const Plotter plot(c.plot_dir);
  plot.write("abs_A", abs_a);
  plot.write("cauchy_inc", inc);
  if (!err_xy.empty()) plot.write("abs_err", err_xy);
  const auto& last = series.rows.back();
  err << "N=" << last.n << " |A_N|=" << num(std::abs(last.value));
  if (!std::isnan(last.cauchy_inc)) err << " cauchy_inc=" << num(last.cauchy_inc);
  if (!last.limit) err << " limit undeclared";
  err << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hardy-field orbits on nilmanifolds"};
  app.require_subcommand(1);

  std::vector<std::string> exprs;
  auto* classify = app.add_subcommand("classify", "growth and mod-1 classification of expressions");
  classify->add_option("expr", exprs, "expressions in t")->required();

  Common window_c, orbit_c, weyl_c, disc_c, obs_c, avg_c;
  auto* window = app.add_subcommand("window", "common window L(t) = t^gamma and class bounds");
  add_common(window, window_c, false);
  auto* orbit = app.add_subcommand("orbit", "orbit points n = 1..N as CSV");
  add_common(orbit, orbit_c, false);
  std::string m_text;
  auto* weyl = app.add_subcommand("weyl", "normalized Weyl sums of a horizontal character");
  add_common(weyl, weyl_c, true);
  weyl->add_option("--m", m_text, "frequency on the horizontal torus, comma separated");
  int cells = 8;
  auto* disc = app.add_subcommand("discrepancy", "anchored-box discrepancy of Malcev coordinates");
  add_common(disc, disc_c, true);
  disc->add_option("--cells", cells, "grid cells per axis")->check(CLI::Range(2, 4096));
  int m_max = 3;
  auto* obs = app.add_subcommand("obstruction", "minimal C^inf window norm of the frequency polynomials");
  add_common(obs, obs_c, true);
  obs->add_option("--Mmax", m_max, "frequency bound |k|_inf")->check(CLI::Range(1, 64));
  auto* avg = app.add_subcommand("average", "multiple ergodic averages with Cauchy increments");
  add_common(avg, avg_c, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*classify) return cmd_classify(exprs, out);
    if (*window) return cmd_window(window_c, out, err);
    if (*orbit) return cmd_orbit(orbit_c, out, err);
    if (*weyl) return cmd_weyl(weyl_c, m_text, out, err);
    if (*disc) return cmd_discrepancy(disc_c, cells, out, err);
    if (*obs) return cmd_obstruction(obs_c, m_max, out, err);
    if (*avg) return cmd_average(avg_c, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const PrecisionError& e) {
    err << "precision error: " << e.what() << '\n';
    return kPrecisionError;
  } catch (const PreconditionError& e) {
    err << "precondition error: " << e.what() << '\n';
    return kPreconditionError;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kPreconditionError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace hardynil::cli
