#include "entroflow/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "entroflow/dde_kernel.hpp"
#include "entroflow/entropy_curve.hpp"
#include "entroflow/format.hpp"
#include "entroflow/ou_process.hpp"
#include "entroflow/sdde_gaussian.hpp"
#include "entroflow/verify.hpp"

namespace entroflow {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

const CLI::Validator kReal(
    [](std::string& s) -> std::string {
      try {
        parse_real(s);
        return {};
      } catch (const std::invalid_argument& e) {
        return e.what();
      }
    },
    "REAL");

// Flat key=value file; a key is the long flag name without dashes.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(path + ":" + std::to_string(number) + ": expected key=value");
    }
    entries.emplace_back(std::string(trim(body.substr(0, eq))),
                         std::string(trim(body.substr(eq + 1))));
  }
  return entries;
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Removes --config PATH and appends every config entry whose flag is absent
// from the command line.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config requires a path");
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!path) return args;
  std::vector<std::string> extra;
  for (const auto& [key, value] : read_config(*path)) {
    const std::string flag = "--" + key;
    if (has_flag(args, flag) || has_flag(extra, flag)) continue;
    extra.push_back(flag);
    extra.push_back(value);
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

int env_threads() {
  const char* raw = std::getenv("ENTROFLOW_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  int value = -1;
  const std::string_view s(raw);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || value < 0) {
    throw UsageError("ENTROFLOW_THREADS must be a non-negative integer, got '" +
                     std::string(s) + "'");
  }
  return value;
}

TabulatedHistory read_phi_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read phi file '" + path + "'");
  std::vector<double> knots;
  std::vector<double> values;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto sep = body.find_first_of(", \t");
    const auto s = parse_number(trim(body.substr(0, std::min(sep, body.size()))));
    const auto v = sep == std::string_view::npos
                       ? std::nullopt
                       : parse_number(trim(body.substr(sep + 1)));
    if (!s || !v) {
      if (knots.empty() && values.empty() && number == 1) continue;  // header
      throw UsageError(path + ":" + std::to_string(number) + ": expected 's,phi'");
    }
    knots.push_back(*s);
    values.push_back(*v);
  }
  return TabulatedHistory(std::move(knots), std::move(values));
}

std::string csv(const std::vector<std::string>& header,
                const std::vector<const std::vector<double>*>& columns) {
  std::string text;
  for (std::size_t j = 0; j < header.size(); ++j) {
    text += (j ? "," : "") + header[j];
  }
  text += '\n';
  const std::size_t rows = columns.front()->size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) text += ',';
      text += format_double((*columns[j])[i]);
    }
    text += '\n';
  }
  return text;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  file << text;
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
}

struct Run {
  std::string subcommand;
  std::vector<std::string> argv;
  // Resolved flag values; replaying them as --key value reproduces the output.
  Json params = Json::object();
  std::optional<std::uint64_t> seed;
  std::string out;
  Json results = Json::object();

  void param(const std::string& key, double value) { params[key] = format_double(value); }
  void param(const std::string& key, const std::string& value) { params[key] = value; }

  void emit(std::ostream& stream, const std::string& text) const {
    if (out.empty()) {
      stream << text;
      return;
    }
    write_file(out, text);
    Json manifest;
    manifest["subcommand"] = subcommand;
    manifest["version"] = std::string(kVersion);
    manifest["argv"] = argv;
    manifest["params"] = params;
    Json command = Json::array({subcommand});
    for (const auto& [key, value] : params.items()) {
      command.push_back("--" + key);
      command.push_back(value);
    }
    manifest["command"] = command;
    manifest["seed"] = seed ? Json(*seed) : Json(nullptr);
    manifest["outputs"] = Json::array({out});
    manifest["results"] = results;
    write_file(out + ".manifest.json", manifest.dump(2) + "\n");
  }
};

Json non_monotone(const EntropyCurve& c) {
  Json j;
  j["H_G"] = has_strict_local_extremum(c.gibbs);
  j["H_c"] = c.has_conditional() && has_strict_local_extremum(c.conditional);
  return j;
}

std::string hayes_text(const HayesReport& r) {
  std::ostringstream os;
  os << to_string(r.verdict) << "\n"
     << "a*tau < 1: margin " << format_double(r.margin_a) << "\n"
     << "(a+b)*tau < 0: margin " << format_double(r.margin_sum) << "\n"
     << "b*tau + a*tau*cos(kappa) + kappa*sin(kappa) > 0: margin "
     << format_double(r.margin_third) << "\n"
     << "kappa " << format_double(r.kappa) << "\n";
  return os.str();
}

struct OuFlags {
  std::string a, sigma, init_mean = "0", init_var, t_max = "5";
  std::size_t points = 500;
  std::string out;
};

struct DdeFlags {
  std::string a = "0", b, tau, phi_const, phi_file, t_max;
  std::size_t points = 2000;
  std::string out;
};

struct EntropyFlags {
  std::string a = "0", b, tau, sigma, phi_const, phi_file, brownian, t_max;
  std::size_t points = 2000;
  std::string out;
};

struct StabilityFlags {
  std::string a, b, tau;
};

struct VerifyFlags {
  std::string suite, out;
  std::uint64_t seed = 42;
  std::optional<int> threads;
};

double positive(const std::string& flag, const std::string& raw) {
  const double v = parse_real(raw);
  if (!(v > 0.0)) throw UsageError("--" + flag + " must be > 0");
  return v;
}

int cmd_ou(const OuFlags& f, Run& run, std::ostream& out) {
  const OUParams p{parse_real(f.a), parse_real(f.sigma)};
  const double mean = parse_real(f.init_mean);
  const double var = parse_real(f.init_var);
  const double t_max = positive("t-max", f.t_max);
  run.param("a", p.a);
  run.param("sigma", p.sigma);
  run.param("init-mean", mean);
  run.param("init-var", var);
  run.param("t-max", t_max);
  run.param("points", std::to_string(f.points));

  validate(p);
  const Gaussian1D fstar = ou_stationary(p);
  const auto grid = uniform_grid_open(t_max, f.points);
  const EntropyCurve c = var == 0.0 ? ou_entropy_curve_point(p, mean, grid)
                                    : ou_entropy_curve(p, Gaussian1D{mean, var}, grid);
  run.results["stationary_variance"] = fstar.variance;
  run.results["non_monotone"] = non_monotone(c);
  run.emit(out, csv({"t", "mean", "variance", "H_G", "H_c"},
                    {&c.time, &c.mean, &c.variance, &c.gibbs, &c.conditional}));
  return 0;
}

InitialCondition history_from(const std::string& phi_const, const std::string& phi_file,
                              Run& run) {
  if (!phi_const.empty()) {
    const double c = parse_real(phi_const);
    run.param("phi-const", c);
    return PointHistory{c};
  }
  run.param("phi-file", phi_file);
  return read_phi_file(phi_file);
}

int cmd_dde(const DdeFlags& f, Run& run, std::ostream& out) {
  if (f.phi_const.empty() == f.phi_file.empty()) {
    throw UsageError("give exactly one of --phi-const and --phi-file");
  }
  const DelayParams p{parse_real(f.a), parse_real(f.b), positive("tau", f.tau), 0.0};
  const double t_max = f.t_max.empty() ? 6.0 * p.tau : positive("t-max", f.t_max);
  run.param("a", p.a);
  run.param("b", p.b);
  run.param("tau", p.tau);
  const InitialCondition phi = history_from(f.phi_const, f.phi_file, run);
  run.param("t-max", t_max);
  run.param("points", std::to_string(f.points));

  validate(p);
  validate_history(phi, p.tau);
  const FundamentalSolution fs(p, t_max);
  const auto grid = uniform_grid_closed(t_max, f.points);
  std::vector<double> x(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) x[i] = solution_map(fs, phi, grid[i]);
  run.emit(out, csv({"t", "x"}, {&grid, &x}));
  return 0;
}

int cmd_entropy(const EntropyFlags& f, Run& run, std::ostream& out, std::ostream& err) {
  const int sources = !f.phi_const.empty() + !f.phi_file.empty() + !f.brownian.empty();
  if (sources != 1) {
    throw UsageError("give exactly one of --phi-const, --phi-file and --brownian");
  }
  const DelayParams p{parse_real(f.a), parse_real(f.b), positive("tau", f.tau),
                      parse_real(f.sigma)};
  const double t_max = f.t_max.empty() ? 6.0 * p.tau : positive("t-max", f.t_max);
  run.param("a", p.a);
  run.param("b", p.b);
  run.param("tau", p.tau);
  run.param("sigma", p.sigma);
  std::optional<InitialCondition> phi;
  double sigma_bar = 0.0;
  if (!f.brownian.empty()) {
    sigma_bar = parse_real(f.brownian);
    run.param("brownian", sigma_bar);
  } else {
    phi = history_from(f.phi_const, f.phi_file, run);
  }
  run.param("t-max", t_max);
  run.param("points", std::to_string(f.points));

  validate(p);
  const HayesReport hayes = hayes_report(p);
  run.results["stability"] = std::string(to_string(hayes.verdict));
  if (hayes.verdict == Stability::kUnstable) {
    err << "error: no stationary solution, parameters are unstable\n" << hayes_text(hayes);
    return 1;
  }
  if (hayes.verdict == Stability::kMarginal && p.sigma != 0.0) {
    err << "error: marginal parameters are only supported with sigma = 0\n"
        << hayes_text(hayes);
    return 1;
  }
  if (hayes.verdict == Stability::kStable && p.sigma == 0.0) {
    err << "error: sigma = 0 with stable parameters has no stationary density\n";
    return 1;
  }
  const int threads = env_threads();
  const auto grid = uniform_grid_open(t_max, f.points);
  const EntropyCurve c = phi ? entropy_curve_point(p, *phi, grid, threads)
                             : entropy_curve_brownian(p, sigma_bar, grid, threads);
  if (hayes.verdict == Stability::kStable) {
    run.results["K0"] = stationary_law(p).k0;
  }
  run.results["non_monotone"] = non_monotone(c);
  run.emit(out, csv({"t", "variance", "H_G", "H_c"},
                    {&c.time, &c.variance, &c.gibbs, &c.conditional}));
  return 0;
}

int cmd_stability(const StabilityFlags& f, std::ostream& out) {
  if (f.a.empty() || f.b.empty() || f.tau.empty()) {
    throw UsageError("stability needs a, b and tau");
  }
  const DelayParams p{parse_real(f.a), parse_real(f.b), positive("tau", f.tau), 0.0};
  out << hayes_text(hayes_report(p));
  return 0;
}

int cmd_verify(const VerifyFlags& f, Run& run, std::ostream& out) {
  const int threads = f.threads ? *f.threads : env_threads();
  run.param("suite", f.suite);
  run.param("seed", std::to_string(f.seed));
  run.seed = f.seed;
  const VerifyReport report = run_verify_suite(f.suite, f.seed, threads);
  const std::string text = report.to_text();
  run.results["all_passed"] = report.all_passed();
  out << text;
  if (!run.out.empty()) run.emit(out, text);
  return report.all_passed() ? 0 : 1;
}

CLI::Option* real(CLI::App* app, const std::string& name, std::string& target,
                  const std::string& desc) {
  return app->add_option(name, target, desc)->check(kReal);
}

}  // namespace

double parse_real(std::string_view text) {
  const std::string_view s = trim(text);
  const auto fail = [&] {
    return std::invalid_argument("not a number or multiple of pi: '" + std::string(text) + "'");
  };
  const auto pos = s.find("pi");
  if (pos == std::string_view::npos) {
    if (const auto v = parse_number(s)) return *v;
    throw fail();
  }
  if (s.find("pi", pos + 2) != std::string_view::npos) throw fail();

  std::string_view prefix = s.substr(0, pos);
  if (!prefix.empty() && prefix.back() == '*') prefix.remove_suffix(1);
  double coef = 1.0;
  if (prefix == "-") {
    coef = -1.0;
  } else if (!prefix.empty() && prefix != "+") {
    const auto v = parse_number(prefix);
    if (!v || s[pos - 1] == '+' || s[pos - 1] == '-') throw fail();
    coef = *v;
  }

  const std::string_view suffix = s.substr(pos + 2);
  if (suffix.empty()) return coef * std::numbers::pi;
  const auto v = parse_number(suffix.substr(1));
  if (!v) throw fail();
  if (suffix.front() == '/' && *v != 0.0) return coef * std::numbers::pi / *v;
  if (suffix.front() == '*') return coef * std::numbers::pi * *v;
  throw fail();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + (argc > 0 ? 1 : 0), argv + argc);

  CLI::App app("Entropy evolution for linear stochastic (delay) differential equations",
               "entroflow");
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  OuFlags ou;
  auto* ou_cmd = app.add_subcommand("ou", "Ornstein-Uhlenbeck mean, variance and entropies");
  real(ou_cmd, "--a", ou.a, "Drift coefficient (must be < 0)")->required();
  real(ou_cmd, "--sigma", ou.sigma, "Noise amplitude")->required();
  real(ou_cmd, "--init-mean", ou.init_mean, "Mean of x(0)")->capture_default_str();
  real(ou_cmd, "--init-var", ou.init_var, "Variance of x(0); 0 for a point start")->required();
  real(ou_cmd, "--t-max", ou.t_max, "Final time")->capture_default_str();
  ou_cmd->add_option("--points", ou.points, "Rows on (0, t-max]")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}))
      ->capture_default_str();
  ou_cmd->add_option("--out", ou.out, "CSV path (stdout if omitted)");

  DdeFlags dde;
  auto* dde_cmd = app.add_subcommand("dde", "Deterministic solution map S_t phi(0)");
  real(dde_cmd, "--a", dde.a, "Instantaneous coefficient")->capture_default_str();
  real(dde_cmd, "--b", dde.b, "Delayed coefficient")->required();
  real(dde_cmd, "--tau", dde.tau, "Delay")->required();
  auto* dde_const = real(dde_cmd, "--phi-const", dde.phi_const, "Constant history");
  auto* dde_file = dde_cmd->add_option("--phi-file", dde.phi_file,
                                       "History as 's,phi' rows spanning [-tau, 0]");
  dde_const->excludes(dde_file);
  real(dde_cmd, "--t-max", dde.t_max, "Final time (default 6 tau)");
  dde_cmd->add_option("--points", dde.points, "Rows on [0, t-max]")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}))
      ->capture_default_str();
  dde_cmd->add_option("--out", dde.out, "CSV path (stdout if omitted)");

  EntropyFlags ent;
  auto* ent_cmd = app.add_subcommand("entropy", "Gibbs and conditional entropy of the SDDE");
  real(ent_cmd, "--a", ent.a, "Instantaneous coefficient")->capture_default_str();
  real(ent_cmd, "--b", ent.b, "Delayed coefficient")->required();
  real(ent_cmd, "--tau", ent.tau, "Delay")->required();
  real(ent_cmd, "--sigma", ent.sigma, "Noise amplitude")->required();
  auto* ent_const = real(ent_cmd, "--phi-const", ent.phi_const, "Constant history");
  auto* ent_file = ent_cmd->add_option("--phi-file", ent.phi_file,
                                       "History as 's,phi' rows spanning [-tau, 0]");
  auto* ent_brown =
      real(ent_cmd, "--brownian", ent.brownian, "Brownian history with this sigma_bar");
  ent_const->excludes(ent_file)->excludes(ent_brown);
  ent_file->excludes(ent_brown);
  real(ent_cmd, "--t-max", ent.t_max, "Final time (default 6 tau)");
  ent_cmd->add_option("--points", ent.points, "Rows on (0, t-max]")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}))
      ->capture_default_str();
  ent_cmd->add_option("--out", ent.out, "CSV path (stdout if omitted)");

  StabilityFlags st;
  auto* st_cmd = app.add_subcommand("stability", "Hayes stability verdict and margins");
  real(st_cmd, "a,--a", st.a, "Instantaneous coefficient");
  real(st_cmd, "b,--b", st.b, "Delayed coefficient");
  real(st_cmd, "tau,--tau", st.tau, "Delay");

  VerifyFlags ver;
  auto* ver_cmd = app.add_subcommand("verify", "Run a numerical verification suite");
  ver_cmd->add_option("suite,--suite", ver.suite, "identities | mc-vs-analytic | fpe-residual")
      ->required()
      ->check(CLI::IsMember(std::vector<std::string>(verify_suite_names().begin(),
                                                     verify_suite_names().end())));
  ver_cmd->add_option("--seed", ver.seed, "Master seed")->capture_default_str();
  ver_cmd->add_option("--threads", ver.threads, "Worker count (0 = auto)")
      ->check(CLI::NonNegativeNumber);
  ver_cmd->add_option("--out", ver.out, "Also write the report here");

  try {
    args = expand_config(std::move(args));
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  Run run;
  run.argv = args;
  try {
    if (ou_cmd->parsed()) {
      run.subcommand = "ou";
      run.out = ou.out;
      return cmd_ou(ou, run, out);
    }
    if (dde_cmd->parsed()) {
      run.subcommand = "dde";
      run.out = dde.out;
      return cmd_dde(dde, run, out);
    }
    if (ent_cmd->parsed()) {
      run.subcommand = "entropy";
      run.out = ent.out;
      return cmd_entropy(ent, run, out, err);
    }
    if (st_cmd->parsed()) return cmd_stability(st, out);
    run.subcommand = "verify";
    run.out = ver.out;
    return cmd_verify(ver, run, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace entroflow
