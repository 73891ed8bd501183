#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "lge/asymptotic.hpp"
#include "lge/finite_cdf.hpp"
#include "lge/monte_carlo.hpp"
#include "lge/roc.hpp"

namespace lge::cli {

namespace {

using json = nlohmann::json;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A table with an optional block of scalar metadata, rendered as CSV or JSON.
struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, double>> meta;
};

void emit(const Table& t, const std::string& format, std::ostream& out) {
  if (format == "json") {
    json j;
    j["command"] = t.command;
    j["columns"] = t.columns;
    j["rows"] = t.rows;
    json meta = json::object();
    for (const auto& [k, v] : t.meta) meta[k] = v;
    j["meta"] = meta;
    out << j.dump(2) << '\n';
    return;
  }
  for (const auto& [k, v] : t.meta) out << "# " << k << '=' << format_number(v) << '\n';
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
  out << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << format_number(r[c]);
    out << '\n';
  }
}

unsigned default_workers() {
  if (const char* env = std::getenv("LGE_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

struct Options {
  int m = 0;
  int n = 0;
  int p = 0;
  std::string snr = "0";
  std::string grid;
  std::string format = "csv";
  double pf = 0.1;
  double nu = 1.0;
  int p_max = 0;
  bool scaled = false;
  bool fixed_alpha = false;
  bool scaled_snr = false;
  bool roc = false;
  double c = 1.0;
  double theta = 0.0;
  std::size_t trials = 200000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  double tolerance = 0.005;
  std::string dump;
};

ProblemDims make_dims(const Options& o) {
  for (int v : {o.m, o.n, o.p}) {
    if (v > kMaxSampleDim) {
      throw UsageError("m, n, p must be <= " + std::to_string(kMaxSampleDim) +
                       " (numerical envelope)");
    }
  }
  try {
    return ProblemDims(o.m, o.n, o.p);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::vector<double> require_grid(const Options& o) {
  if (o.grid.empty()) throw UsageError("--grid is required for this command");
  return parse_grid(o.grid).values();
}

int cmd_cdf(const Options& o, std::ostream& out) {
  const ProblemDims d = make_dims(o);
  const SpikeParam s(parse_snr(o.snr));
  Table t{"cdf", {o.scaled ? "x" : "t", "cdf"}, {}, {}};
  for (double x : require_grid(o)) {
    t.rows.push_back({x, o.scaled ? cdf_test_statistic(d, s, x) : cdf_lambda_max(d, s, x)});
  }
  emit(t, o.format, out);
  return kOk;
}

int cmd_roc(const Options& o, std::ostream& out) {
  const ProblemDims d = make_dims(o);
  const double gamma = parse_snr(o.snr);
  const auto grid = require_grid(o);
  const RocCurve curve = roc_curve(d, gamma, grid);
  Table t{"roc", {"p_false_alarm", "p_detection", "threshold"}, {}, {}};
  for (const auto& pt : curve.points) t.rows.push_back({pt.p_false_alarm, pt.p_detection, pt.threshold});
  emit(t, o.format, out);
  return kOk;
}

int cmd_calibrate(const Options& o, std::ostream& out) {
  const ProblemDims d = make_dims(o);
  if (!(o.pf > 0.0 && o.pf < 1.0)) throw UsageError("--pf must lie in (0, 1)");
  const double mu = calibrate_threshold(d, o.pf);
  if (o.format == "json") {
    emit({"calibrate", {"p_false_alarm", "threshold"}, {{o.pf, mu}}, {}}, o.format, out);
  } else {
    out << format_number(mu) << '\n';
  }
  return kOk;
}

int cmd_slope(const Options& o, std::ostream& out) {
  const ProblemDims d = make_dims(o);
  if (!(o.pf > 0.0 && o.pf < 1.0)) throw UsageError("--pf must lie in (0, 1)");
  const double s = low_snr_slope(d, o.pf);
  if (o.format == "json") {
    emit({"slope", {"p_false_alarm", "slope"}, {{o.pf, s}}, {}}, o.format, out);
  } else {
    out << format_number(s) << '\n';
  }
  return kOk;
}

int cmd_pstar(const Options& o, std::ostream& out) {
  const double gamma = parse_snr(o.snr);
  if (!(o.nu > 0.0)) throw UsageError("--nu must be positive");
  if (!(gamma > 0.0)) throw UsageError("--snr must be positive for pstar");
  if (!(o.pf > 0.0 && o.pf < 1.0)) throw UsageError("--pf must lie in (0, 1)");
  const PstarBounds b = pstar_bounds(o.nu, gamma, o.pf);
  const int p_max = o.p_max > 0 ? o.p_max : static_cast<int>(std::ceil(4.0 * b.upper)) + 16;
  Table t{"pstar", {"p", "p_detection"}, {}, {}};
  for (int p = 1; p <= p_max; ++p) t.rows.push_back({double(p), pd_balanced_scaling(p, o.nu, gamma, o.pf)});
  t.meta = {{"lower_bound", b.lower},
            {"upper_bound", b.upper},
            {"approximation", pstar_approx(o.nu, gamma, o.pf)},
            {"continuous_optimum", pstar_continuous(o.nu, gamma, o.pf)},
            {"integer_optimum", double(pstar_integer(o.nu, gamma, o.pf))}};
  emit(t, o.format, out);
  return kOk;
}

int cmd_asymptotic(const Options& o, std::ostream& out) {
  if (o.fixed_alpha == o.scaled_snr) {
    throw UsageError("asymptotic: give exactly one of --fixed-alpha or --scaled-snr");
  }
  const auto grid = require_grid(o);
  Table t{"asymptotic", {}, {}, {}};
  if (o.fixed_alpha) {
    const ProblemDims d = make_dims(o);
    if (d.alpha() > kMaxBesselAlpha) {
      throw UsageError("alpha = n - m must be <= " + std::to_string(kMaxBesselAlpha));
    }
    const double eta = parse_snr(o.snr);
    if (o.roc) {
      t.columns = {"p_false_alarm", "finite_p_detection", "limit_p_detection"};
      const RocCurve curve = roc_curve(d, eta, grid);
      for (const auto& pt : curve.points) t.rows.push_back({pt.p_false_alarm, pt.p_detection, pt.p_false_alarm});
    } else {
      t.columns = {"x", "finite_cdf", "limit_cdf"};
      const SpikeParam s(eta);
      for (double x : grid) t.rows.push_back({x, finite_scaled_cdf(d, s, x), limit_cdf_fixed_alpha(d.alpha(), x)});
    }
  } else {
    AsymptoticRegime regime = [&] {
      try {
        return AsymptoticRegime(o.c, o.theta);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }();
    if (o.m < 1) throw UsageError("--m is required for --scaled-snr");
    const int p = static_cast<int>(std::lround(o.m / regime.c()));
    Options dims_opt = o;
    dims_opt.n = o.m;
    dims_opt.p = p;
    const ProblemDims d = make_dims(dims_opt);
    const double eta = regime.theta() * o.m;
    t.meta = {{"m", double(o.m)}, {"n", double(o.m)}, {"p", double(p)}, {"eta", eta}};
    if (o.roc) {
      t.columns = {"p_false_alarm", "finite_p_detection", "limit_p_detection"};
      for (double pf : grid) {
        t.rows.push_back({pf, roc_closed_form_alpha0(d.m(), d.p(), eta, pf),
                          asymptotic_roc_scaled(regime.theta(), pf)});
      }
    } else {
      t.columns = {"x", "finite_cdf", "limit_cdf"};
      const SpikeParam s(eta);
      for (double x : grid) t.rows.push_back({x, finite_scaled_cdf(d, s, x), limit_cdf_scaled_snr(regime, x)});
    }
  }
  emit(t, o.format, out);
  return kOk;
}

int cmd_mc_validate(const Options& o, std::ostream& out) {
  const ProblemDims d = make_dims(o);
  const SpikeParam s(parse_snr(o.snr));
  if (o.trials < 1) throw UsageError("--trials must be >= 1");
  if (o.workers < 1) throw UsageError("--workers must be >= 1");
  McConfig cfg{d, s, o.trials, o.seed, o.workers, {}};
  const EmpiricalCdf emp = sample_lambda_max(cfg);
  if (!o.dump.empty()) {
    std::ofstream f(o.dump);
    if (!f) throw UsageError("cannot open --dump-samples file " + o.dump);
    write_samples(f, emp);
  }
  const double ks = ks_distance(emp, [&](double t) { return cdf_lambda_max(d, s, t); });
  const bool pass = ks < o.tolerance;
  emit({"mc-validate", {"ks_distance", "tolerance", "trials", "seed", "pass"},
        {{ks, o.tolerance, double(o.trials), double(o.seed), pass ? 1.0 : 0.0}}, {}},
       o.format, out);
  return pass ? kOk : kValidationFailure;
}

}  // namespace

double parse_snr(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  bool db = false;
  if (s.size() > 2) {
    std::string tail = s.substr(s.size() - 2);
    std::transform(tail.begin(), tail.end(), tail.begin(), [](unsigned char c) { return std::tolower(c); });
    if (tail == "db") {
      db = true;
      s.resize(s.size() - 2);
    }
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid SNR '" + text + "' (use e.g. 5dB or 3.162)");
  }
  if (used != s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("invalid SNR '" + text + "' (use e.g. 5dB or 3.162)");
  }
  if (db) return db_to_linear(v);
  if (v < 0.0) throw std::invalid_argument("linear SNR must be >= 0, got '" + text + "'");
  return v;
}

GridSpec parse_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = text.find(':', pos);
    parts.push_back(text.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (parts.size() < 3 || parts.size() > 4) {
    throw std::invalid_argument("invalid grid '" + text + "' (want start:stop:count[:linear|log])");
  }
  GridSpec g;
  try {
    std::size_t u0 = 0, u1 = 0, u2 = 0;
    g.start = std::stod(parts[0], &u0);
    g.stop = std::stod(parts[1], &u1);
    g.count = std::stoi(parts[2], &u2);
    if (u0 != parts[0].size() || u1 != parts[1].size() || u2 != parts[2].size()) {
      throw std::invalid_argument("trailing characters");
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid grid '" + text + "' (want start:stop:count[:linear|log])");
  }
  if (parts.size() == 4) {
    if (parts[3] == "log") {
      g.log_spacing = true;
    } else if (parts[3] != "linear") {
      throw std::invalid_argument("grid spacing must be 'linear' or 'log'");
    }
  }
  if (g.count < 2) throw std::invalid_argument("grid count must be >= 2");
  if (!(g.stop > g.start)) throw std::invalid_argument("grid stop must exceed start");
  if (g.log_spacing && !(g.start > 0.0)) throw std::invalid_argument("log grid needs start > 0");
  return g;
}

std::vector<double> GridSpec::values() const {
  std::vector<double> v(count);
  for (int k = 0; k < count; ++k) {
    const double f = static_cast<double>(k) / (count - 1);
    v[k] = log_spacing ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
                       : start + f * (stop - start);
  }
  v.front() = start;
  v.back() = stop;
  return v;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (std::isfinite(v) && s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Largest generalized eigenvalue detector: exact CDFs, ROC analysis and Monte-Carlo validation", "lge"};
  app.require_subcommand(1);
  Options o;
  o.workers = default_workers();

  auto add_dims = [&](CLI::App* sc) {
    sc->add_option("--m", o.m, "system dimension m")->required();
    sc->add_option("--n", o.n, "noise-only samples n (>= m)")->required();
    sc->add_option("--p", o.p, "signal-plus-noise samples p (>= m)")->required();
  };
  auto add_format = [&](CLI::App* sc) {
    sc->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  };
  const std::string snr_help = "SNR / spike strength, linear (3.162) or decibels (5dB)";

  auto* cdf = app.add_subcommand("cdf", "exact CDF of lambda_max; CSV columns: t,cdf (x,cdf with --scaled)");
  add_dims(cdf);
  cdf->add_option("--snr", o.snr, snr_help);
  cdf->add_option("--grid", o.grid, "start:stop:count[:linear|log]")->required();
  cdf->add_flag("--scaled", o.scaled, "evaluate the sample-covariance statistic (n/p) lambda_max");
  add_format(cdf);

  auto* roc = app.add_subcommand("roc", "ROC curve; CSV columns: p_false_alarm,p_detection,threshold");
  add_dims(roc);
  roc->add_option("--snr", o.snr, snr_help)->required();
  roc->add_option("--grid", o.grid, "false-alarm grid start:stop:count[:linear|log]")->required();
  add_format(roc);

  auto* cal = app.add_subcommand("calibrate", "threshold for a false-alarm probability; prints the threshold");
  add_dims(cal);
  cal->add_option("--pf", o.pf, "false-alarm probability")->required();
  add_format(cal);

  auto* ps = app.add_subcommand(
      "pstar", "P_D vs p sweep with m = nu p, n = m; CSV columns: p,p_detection; "
               "bounds, approximation and optima as '# key=value' lines");
  ps->add_option("--nu", o.nu, "ratio m / p")->required();
  ps->add_option("--snr", o.snr, snr_help)->required();
  ps->add_option("--pf", o.pf, "false-alarm probability")->required();
  ps->add_option("--p-max", o.p_max, "largest p in the sweep");
  add_format(ps);

  auto* as = app.add_subcommand(
      "asymptotic", "finite vs limiting law; CSV columns: x,finite_cdf,limit_cdf "
                    "(p_false_alarm,finite_p_detection,limit_p_detection with --roc)");
  as->add_flag("--fixed-alpha", o.fixed_alpha, "alpha, beta, eta fixed (needs --m --n --p --snr)");
  as->add_flag("--scaled-snr", o.scaled_snr, "n = m, p = m / c, eta = theta m (needs --m --c --theta)");
  as->add_option("--m", o.m, "system dimension m");
  as->add_option("--n", o.n, "noise-only samples n");
  as->add_option("--p", o.p, "signal-plus-noise samples p");
  as->add_option("--snr", o.snr, snr_help);
  as->add_option("--c", o.c, "limit of m / p, in (0, 1]");
  as->add_option("--theta", o.theta, "limit of eta / m, >= 0");
  as->add_flag("--roc", o.roc, "emit ROC columns over a false-alarm grid");
  as->add_option("--grid", o.grid, "x (or P_F) grid start:stop:count[:linear|log]")->required();
  add_format(as);

  auto* mc = app.add_subcommand(
      "mc-validate", "Monte-Carlo KS check of the exact CDF; CSV columns: ks_distance,tolerance,trials,seed,pass");
  add_dims(mc);
  mc->add_option("--snr", o.snr, snr_help);
  mc->add_option("--trials", o.trials, "Monte-Carlo trials");
  mc->add_option("--seed", o.seed, "random seed");
  mc->add_option("--workers", o.workers, "worker threads (default $LGE_WORKERS or 1)");
  mc->add_option("--tolerance", o.tolerance, "KS distance pass threshold");
  mc->add_option("--dump-samples", o.dump, "write raw lambda_max samples, one per line");
  add_format(mc);

  auto* sl = app.add_subcommand("slope", "low-SNR first-order coefficient of P_D; prints the slope");
  add_dims(sl);
  sl->add_option("--pf", o.pf, "false-alarm probability")->required();
  add_format(sl);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    CLI::App* sc = app.get_subcommands().front();
    const std::string name = sc->get_name();
    if (name == "cdf") return cmd_cdf(o, out);
    if (name == "roc") return cmd_roc(o, out);
    if (name == "calibrate") return cmd_calibrate(o, out);
    if (name == "pstar") return cmd_pstar(o, out);
    if (name == "asymptotic") return cmd_asymptotic(o, out);
    if (name == "mc-validate") return cmd_mc_validate(o, out);
    if (name == "slope") return cmd_slope(o, out);
    err << "unknown command " << name << '\n';
    return kUsageError;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const EnvelopeError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  }
}

}  // namespace lge::cli
