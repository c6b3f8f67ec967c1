#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "triconv/autoconv.hpp"
#include "triconv/config.hpp"
#include "triconv/errors.hpp"
#include "triconv/extension.hpp"
#include "triconv/numeric.hpp"
#include "triconv/oracle.hpp"

namespace triconv::cli {

namespace {

struct Settings {
  int quad_nodes = TripleConvolution::kDefaultNodes;
  GridSpec grid;
  double fd_step = 0.0;  // 0: library default
  double oracle_width = 0.0;
  int oracle_grid_n = 2048;
  bool oracle_extrapolate = true;
  std::size_t oracle_nx = 5;
  std::size_t oracle_ne = 5;
  std::vector<double> deltas{0.2, 0.1, 0.05};
  ExtensionGrid ext;
  unsigned threads = 0;
};

std::size_t parse_count(std::string_view key, std::string_view text) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || v == 0) {
    throw ConfigError(std::string(key) + ": expected a positive integer, got '" + std::string(text) + "'");
  }
  return v;
}

int parse_int(std::string_view key, std::string_view text) {
  const auto v = parse_count(key, text);
  if (v > 1u << 24) throw ConfigError(std::string(key) + ": value too large");
  return static_cast<int>(v);
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(text) + "'");
}

double parse_positive(std::string_view key, std::string_view text) {
  const double v = parse_real(text, key);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(key) + ": must be positive");
  return v;
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    out.push_back(parse_positive(key, item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

using Setter = std::function<void(Settings&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table{
      {"quad.nodes", [](Settings& s, auto k, auto v) { s.quad_nodes = parse_int(k, v); }},
      {"grid.nx", [](Settings& s, auto k, auto v) { s.grid.nx = parse_count(k, v); }},
      {"grid.ne", [](Settings& s, auto k, auto v) { s.grid.ne = parse_count(k, v); }},
      {"grid.margin",
       [](Settings& s, auto k, auto v) {
         const double m = parse_real(v, k);
         if (!(m >= 0.0 && m < 1.0)) throw ConfigError("grid.margin: must lie in [0, 1)");
         s.grid.margin = m;
       }},
      {"grid.eps_max", [](Settings& s, auto k, auto v) { s.grid.eps_max = parse_positive(k, v); }},
      {"fd.step", [](Settings& s, auto k, auto v) { s.fd_step = parse_positive(k, v); }},
      {"oracle.width", [](Settings& s, auto k, auto v) { s.oracle_width = parse_positive(k, v); }},
      {"oracle.grid_n", [](Settings& s, auto k, auto v) { s.oracle_grid_n = parse_int(k, v); }},
      {"oracle.extrapolate", [](Settings& s, auto k, auto v) { s.oracle_extrapolate = parse_bool(k, v); }},
      {"oracle.nx", [](Settings& s, auto k, auto v) { s.oracle_nx = parse_count(k, v); }},
      {"oracle.ne", [](Settings& s, auto k, auto v) { s.oracle_ne = parse_count(k, v); }},
      {"sweep.deltas", [](Settings& s, auto k, auto v) { s.deltas = parse_list(k, v); }},
      {"ext.nx", [](Settings& s, auto k, auto v) { s.ext.nx = parse_count(k, v); }},
      {"ext.ne", [](Settings& s, auto k, auto v) { s.ext.ne = parse_count(k, v); }},
      {"ext.quad", [](Settings& s, auto k, auto v) { s.ext.quad_nodes = parse_int(k, v); }},
      {"ext.tol", [](Settings& s, auto k, auto v) { s.ext.tolerance = parse_positive(k, v); }},
      {"run.threads", [](Settings& s, auto k, auto v) { s.threads = static_cast<unsigned>(parse_int(k, v)); }},
  };
  return table;
}

Settings apply_overrides(const std::vector<std::pair<std::string, std::string>>& overrides) {
  Settings s;
  for (const auto& [key, value] : overrides) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError("unknown override key '" + key + "'");
    it->second(s, key, value);
  }
  return s;
}

std::string fmt(double x) { return format_real(x); }

void write_check_regime(const CurveParams& p, std::ostream& os) {
  const auto rep = classify_regime(p);
  os << "lambda = " << fmt(p.lambda) << '\n'
     << "a = " << fmt(rep.a_value) << '\n'
     << "threshold_min = " << fmt(rep.threshold_min) << '\n'
     << "threshold_exist = " << fmt(rep.threshold_exist) << '\n'
     << "threshold_nonexist = " << fmt(rep.threshold_nonexist) << '\n'
     << "24a−3λ³ = " << fmt(rep.kappa_s2_at_origin) << '\n'
     << "regime = " << to_string(rep.regime) << '\n';
}

void write_surface(const TripleConvolution& model, const Settings& s, std::ostream& os) {
  const auto grid = model.evaluate_grid(s.grid, s.quad_nodes);
  os << "xi,eps,tau,F\n";
  for (std::size_t i = 0; i < grid.xi.size(); ++i) {
    for (std::size_t j = 0; j < grid.eps.size(); ++j) {
      const std::size_t k = i * grid.eps.size() + j;
      os << fmt(grid.xi[i]) << ',' << fmt(grid.eps[j]) << ',' << fmt(grid.tau[k]) << ',' << fmt(grid.values[k])
         << '\n';
    }
  }
}

double rel_diff(double x, double ref) { return ref == 0.0 ? std::abs(x) : std::abs(x - ref) / std::abs(ref); }

void write_hessian(const TripleConvolution& model, const Settings& s, std::ostream& os) {
  const double step = s.fd_step > 0.0 ? s.fd_step : model.default_fd_step();
  const auto h = model.hessian_at_origin(step, s.quad_nodes);
  os << "lambda = " << fmt(model.params().lambda) << '\n'
     << "a = " << fmt(model.params().a) << '\n'
     << "regime = " << to_string(h.regime.regime) << '\n'
     << "fd_step = " << fmt(h.step) << '\n'
     << "entry,closed_form,finite_difference,rel_error\n"
     << "d2_xi," << fmt(h.closed_form.xx) << ',' << fmt(h.fd.xx) << ',' << fmt(rel_diff(h.fd.xx, h.closed_form.xx))
     << '\n'
     << "d2_eps," << fmt(h.closed_form.ee) << ',' << fmt(h.fd.ee) << ','
     << fmt(rel_diff(h.fd.ee, h.closed_form.ee)) << '\n'
     << "mixed," << fmt(h.closed_form.xe) << ',' << fmt(h.fd.xe) << ',' << fmt(std::abs(h.fd.xe)) << '\n'
     << "is_strict_max = " << (h.is_strict_max ? "true" : "false") << '\n';
}

void write_oracle_compare(const TripleConvolution& model, const Settings& s, std::ostream& os, std::ostream& err) {
  const BruteForceOracle oracle(model.params());
  auto cfg = default_oracle_config(model.params());
  if (s.oracle_width > 0.0) cfg.delta_width = s.oracle_width;
  cfg.grid_n = s.oracle_grid_n;
  cfg.extrapolate = s.oracle_extrapolate;
  ComparisonGrid grid;
  grid.nx = s.oracle_nx;
  grid.ne = s.oracle_ne;
  const auto rep = compare_on_grid(model, oracle, grid, cfg, s.quad_nodes);
  os << "xi,eps,formula,oracle,rel_err\n";
  for (const auto& row : rep.rows) {
    os << fmt(row.xi) << ',' << fmt(row.eps) << ',' << fmt(row.formula) << ',' << fmt(row.oracle) << ','
       << fmt(row.rel_err) << '\n';
  }
  if (rep.flagged) err << "triconv: warning: max relative error " << fmt(rep.max_rel_error) << " above 1e-2\n";
}

void write_ratio_sweep(const TripleConvolution& model, const Settings& s, std::ostream& os) {
  const auto rows = ratio_sweep(model, s.deltas, s.ext);
  os << "delta,ratio,foschi,gap\n";
  for (const auto& p : rows) os << fmt(p.delta) << ',' << fmt(p.ratio) << ',' << fmt(p.foschi) << ',' << fmt(p.gap) << '\n';
}

void write_constants(const TripleConvolution& model, const Settings& s, std::ostream& os) {
  const auto rep = constants_report(model, s.grid, s.quad_nodes);
  os << "lambda = " << fmt(model.params().lambda) << '\n'
     << "foschi = " << fmt(rep.foschi) << '\n'
     << "foschi_pow6 = " << fmt(std::pow(rep.foschi, 6)) << '\n'
     << "linf_triple = " << fmt(rep.linf_triple) << '\n'
     << "holder_cap = " << fmt(rep.holder_cap) << '\n'
     << "origin_value = " << fmt(rep.origin_value) << '\n'
     << "origin_closed_form = " << fmt(rep.origin_closed_form) << '\n';
}

struct CheckRow {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool skipped = false;
};

// Returns true when every row passes.
bool write_identities(const TripleConvolution& model, const Settings& s, std::ostream& os) {
  const auto& p = model.params();
  std::vector<CheckRow> rows;

  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  double e1 = 0.0, e2 = 0.0, e3 = 0.0, e4 = 0.0, eperm = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto f = angular_frame(angle(rng));
    e1 = std::max(e1, std::abs(f.power_sum(1)));
    e2 = std::max(e2, std::abs(f.power_sum(2) - 1.0));
    e3 = std::max(e3, std::abs(f.power_sum(3) + std::sin(3.0 * f.theta) / kSqrt6));
    e4 = std::max(e4, std::abs(f.power_sum(4) - 0.5));
    auto a = f.coefficients();
    auto b = angular_frame(f.theta + kTwoPi / 3.0).coefficients();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    for (std::size_t k = 0; k < 3; ++k) eperm = std::max(eperm, std::abs(a[k] - b[k]));
  }
  rows.push_back({"frame_sum", e1, 1e-12});
  rows.push_back({"frame_squares", e2, 1e-12});
  rows.push_back({"frame_cubes", e3, 1e-12});
  rows.push_back({"frame_quartics", e4, 1e-12});
  rows.push_back({"frame_permutation", eperm, 1e-12});

  // At xi = 0 with phi = 0 the phase is lambda rho^2/2 + a rho^4/2.
  const bool closed = p.phi.empty();
  double erho = 0.0, eslope = 0.0;
  if (closed) {
    const double rc = model.rho_cap();
    const double vmax = std::sqrt(0.5 * p.lambda * rc * rc + 0.5 * p.a * rc * rc * rc * rc);
    for (std::size_t i = 0; i < 100; ++i) {
      const double v = vmax * std::pow(10.0, -6.0 + 6.0 * static_cast<double>(i) / 99.0) * 0.999;
      const double disc = std::sqrt(p.lambda * p.lambda + 8.0 * p.a * v * v);
      const double rho = std::sqrt(4.0 * v * v / (p.lambda + disc));
      const auto sol = model.solve_rho(0.0, 0.3, v);
      erho = std::max(erho, rel_diff(sol.rho, rho));
      eslope = std::max(eslope, rel_diff(sol.rho_over_dpsi, 1.0 / disc));
    }
  }
  rows.push_back({"rho_closed_form", erho, 1e-10, !closed});
  rows.push_back({"rho_over_dpsi", eslope, 1e-10, !closed});

  const double origin = model.density({0.0, 0.0}, s.quad_nodes);
  rows.push_back({"origin_value", rel_diff(origin, kTwoPi / (kSqrt3 * p.lambda)), 1e-10});

  double eboundary = 0.0;
  for (double xi : linspace(-p.r, p.r, 50)) {
    const double f = model.density({xi, 0.0}, s.quad_nodes);
    eboundary = std::max(eboundary, rel_diff(f, kTwoPi / kSqrt3 / model.curve().curvature(xi / 3.0)));
  }
  rows.push_back({"boundary_density", eboundary, 1e-9});

  bool ok = true;
  os << "check,max_error,tolerance,status\n";
  for (const auto& row : rows) {
    const char* status = row.skipped ? "SKIP" : (row.error <= row.tolerance ? "PASS" : "FAIL");
    if (!row.skipped && row.error > row.tolerance) ok = false;
    os << row.name << ',' << fmt(row.error) << ',' << fmt(row.tolerance) << ',' << status << '\n';
  }
  return ok;
}

}  // namespace

std::string_view to_string(Command command) { return kCommandNames[static_cast<int>(command)]; }

std::optional<Command> parse_command(std::string_view name) {
  for (int i = 0; i < 7; ++i) {
    if (kCommandNames[i] == name) return static_cast<Command>(i);
  }
  return std::nullopt;
}

std::optional<std::pair<std::string, std::string>> split_override(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) return std::nullopt;
  return std::pair{std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
}

const std::vector<std::string>& override_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

int run(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  std::ostringstream buffer;
  int status = kOk;
  const char* hint = "";
  try {
    const Settings settings = apply_overrides(spec.overrides);
    set_worker_count(settings.threads);
    if (!std::ifstream(spec.params_path)) {
      err << "triconv: io: cannot open parameter file '" << spec.params_path.string() << "'\n";
      return kIo;
    }
    const CurveParams params = load_curve_params(spec.params_path);

    if (spec.command == Command::check_regime) {
      write_check_regime(params, buffer);
    } else {
      const TripleConvolution model(params);
      switch (spec.command) {
        case Command::surface:
          hint = "grid.nx/grid.ne/quad.nodes: ";
          write_surface(model, settings, buffer);
          break;
        case Command::hessian:
          hint = "fd.step: ";
          write_hessian(model, settings, buffer);
          break;
        case Command::oracle_compare:
          hint = "oracle.width/oracle.grid_n: ";
          write_oracle_compare(model, settings, buffer, err);
          break;
        case Command::ratio_sweep:
          hint = "ext.nx/ext.ne/sweep.deltas: ";
          write_ratio_sweep(model, settings, buffer);
          break;
        case Command::constants:
          hint = "grid.nx/grid.ne/quad.nodes: ";
          write_constants(model, settings, buffer);
          break;
        case Command::identities:
          if (!write_identities(model, settings, buffer)) status = kCheckFailed;
          break;
        case Command::check_regime:
          break;
      }
    }
  } catch (const ConfigError& e) {
    err << "triconv: config: " << e.what() << '\n';
    return kBadInput;
  } catch (const MonotonicityViolated& e) {
    err << "triconv: monotonicity violated: " << e.what() << '\n';
    return kMonotonicity;
  } catch (const NoConvergence& e) {
    err << "triconv: no convergence: " << hint << e.what() << '\n';
    return kNoConvergence;
  } catch (const GridUnresolved& e) {
    err << "triconv: grid unresolved: " << hint << e.what() << '\n';
    return kGridUnresolved;
  } catch (const std::invalid_argument& e) {
    err << "triconv: invalid argument: " << hint << e.what() << '\n';
    return kBadInput;
  }

  const std::string text = buffer.str();
  if (spec.output_path) {
    std::ofstream file(*spec.output_path, std::ios::binary | std::ios::trunc);
    file << text;
    file.close();
    if (!file) {
      err << "triconv: io: cannot write '" << spec.output_path->string() << "'\n";
      return kIo;
    }
  } else {
    out << text;
    out.flush();
  }
  if (status == kCheckFailed) err << "triconv: identities: at least one check failed\n";
  return status;
}

}  // namespace triconv::cli
