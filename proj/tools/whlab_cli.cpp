// whlab: batch front end for the Wiener-Hopf laboratory.
#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "whlab/io.hpp"
#include "whlab/operator.hpp"
#include "whlab/whlab.hpp"

namespace {

using whlab::io::Json;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kInconclusive = 2;

struct Settings {
  std::optional<whlab::Index> grid_n;
  std::optional<double> half_line_length;
  std::optional<double> tol;
  std::string out;
  std::string csv;
  std::string matrix;
  bool no_numerics = false;
};

/// Inline JSON or a path to a JSON file.
Json load(const std::string& arg, const std::string& what) {
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[' || std::isdigit(static_cast<unsigned char>(arg[first])) || arg[first] == '-')) {
    return whlab::io::parse_document(arg, what);
  }
  return whlab::io::read_document(arg);
}

const Json& required(const Json& job, const std::string& key) {
  if (!job.contains(key)) throw whlab::Error(whlab::Errc::Schema, "/" + key + ": missing");
  return job[key];
}

whlab::FredholmOptions fredholm_options(const Json& job, const Settings& s) {
  whlab::FredholmOptions o;
  const Json opts = job.value("options", Json::object());
  if (opts.contains("grid_n")) o.grid.cells = opts["grid_n"].get<whlab::Index>();
  if (opts.contains("half_line_length")) o.grid.length = opts["half_line_length"].get<double>();
  if (opts.contains("tol")) o.margin_tol = opts["tol"].get<double>();
  if (opts.contains("numerics")) o.numerics = opts["numerics"].get<bool>();
  if (s.grid_n) o.grid.cells = *s.grid_n;
  if (s.half_line_length) o.grid.length = *s.half_line_length;
  if (s.tol) o.margin_tol = *s.tol;
  if (s.no_numerics) o.numerics = false;
  if (o.grid.cells < 2 || !(o.grid.length > 0.0)) throw whlab::Error(whlab::Errc::Schema, "options: grid must have n >= 2 and positive length");
  return o;
}

void emit(const Json& doc, const std::string& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw whlab::Error(whlab::Errc::Schema, out + ": cannot write");
  f << text;
}

std::ofstream open_csv(const std::string& prefix, const std::string& suffix) {
  std::ofstream f(prefix + suffix);
  if (!f) throw whlab::Error(whlab::Errc::Schema, prefix + suffix + ": cannot write");
  return f;
}

Json envelope(const std::string& action, const Json& job) {
  Json doc;
  doc["tool"] = "whlab";
  doc["version"] = WHLAB_VERSION;
  doc["action"] = action;
  doc["job"] = job;
  return doc;
}

int run_analyze(const Json& job, const Settings& s) {
  const whlab::Symbol a = whlab::io::parse_symbol(required(job, "symbol"), "/symbol");
  const whlab::FredholmOptions o = fredholm_options(job, s);
  const whlab::FredholmReport r = whlab::analyze(a, o);
  Json doc = envelope("analyze", job);
  doc["report"] = whlab::io::to_json(r);
  emit(doc, s.out);
  if (!s.csv.empty()) {
    if (r.elliptic) {
      auto f = open_csv(s.csv, "_curve.csv");
      whlab::io::write_curve_csv(whlab::trace_curve(a), f);
    }
    if (o.numerics && o.oversample >= 2) {
      auto f = open_csv(s.csv, "_sigma.csv");
      const whlab::WienerHopfOptions rect{o.oversample, 2};
      whlab::io::write_singular_csv(whlab::singular_values(whlab::wiener_hopf(a, o.grid, rect).entries), f);
    }
  }
  if (!s.matrix.empty()) {
    const bool csv = s.matrix.ends_with(".csv");
    std::ofstream f(s.matrix, csv ? std::ios::out : std::ios::out | std::ios::binary);
    if (!f) throw whlab::Error(whlab::Errc::Schema, s.matrix + ": cannot write");
    const whlab::OperatorMatrix w = whlab::wiener_hopf(a, o.grid, {o.oversample, 1});
    if (csv) {
      whlab::write_csv(w, f);
    } else {
      whlab::write_binary(w, f);
    }
  }
  return r.verdict == whlab::Verdict::Inconclusive ? kInconclusive : kOk;
}

int run_norm(const Json& job, const Settings& s) {
  const whlab::SpaceSpec space = whlab::io::parse_space(required(job, "space"), "/space");
  const whlab::GridFunction f = whlab::io::parse_function(required(job, "function"), "/function");
  Json doc = envelope("norm", job);
  Json report;
  report["norm"] = whlab::norm(f, space);
  try {
    const whlab::BoydIndices b = whlab::boyd_indices(space);
    report["boyd"] = {{"alpha", b.alpha}, {"beta", b.beta}};
  } catch (const whlab::Error& e) {
    report["boyd"] = e.what();
  }
  report["maximal_ratio"] = whlab::maximal_ratio(f, space);
  report["l1"] = whlab::lp_norm(f, 1.0);
  doc["report"] = report;
  emit(doc, s.out);
  return kOk;
}

int run_verify(const Json& job, const Settings& s) {
  const whlab::Symbol a = job.contains("symbol") ? whlab::io::parse_symbol(job["symbol"], "/symbol") : whlab::Symbol::rational(1);
  const whlab::Symbol b = job.contains("symbol_b") ? whlab::io::parse_symbol(job["symbol_b"], "/symbol_b") : whlab::Symbol::rational(-1);
  const whlab::FredholmOptions o = fredholm_options(job, s);
  Json report;

  const auto lhs = whlab::semi_commutator_embedded(a, b, o.grid);
  const auto rhs = whlab::semi_commutator_fourier(a, b, o.grid);
  const double nl = whlab::spectral_norm(lhs.entries);
  const double nr = whlab::spectral_norm(rhs.entries);
  const double diff = whlab::spectral_norm(lhs.entries - rhs.entries);
  const auto sc_sigma = whlab::singular_values(lhs.entries);
  const auto rank = whlab::count_small(sc_sigma, 1e-3);
  report["semi_commutator"] = {{"lhs_norm", nl},
                               {"rhs_norm", nr},
                               {"difference_norm", diff},
                               {"relative_difference", nl > 0.0 ? diff / nl : diff},
                               {"numerical_rank", nl > 1e-12 ? sc_sigma.sigma.size() - rank.count : 0}};

  const whlab::WienerHopfOptions sq{o.oversample, 1};
  const auto wa = whlab::wiener_hopf(a, o.grid, sq);
  const auto wac = whlab::wiener_hopf(whlab::conj(a), o.grid, sq);
  report["adjoint_max_difference"] = (whlab::adjoint(wa).entries - wac.entries).cwiseAbs().maxCoeff();

  const whlab::LineGrid line = whlab::embedding_grid(o.grid, 1);
  const auto w0a = whlab::fourier_convolution(a, line).entries;
  const auto w0b = whlab::fourier_convolution(b, line).entries;
  const auto w0ab = whlab::fourier_convolution(a * b, line).entries;
  report["w0_multiplicativity"] = (w0a * w0b - w0ab).cwiseAbs().maxCoeff();

  const auto sline = whlab::cauchy_singular_line(line).entries;
  report["s_involution"] = (sline * sline - Eigen::MatrixXcd::Identity(line.cells, line.cells)).cwiseAbs().maxCoeff();

  if (const auto n = whlab::rational_exponent(a); n && *n > 0) {
    const auto basis = whlab::kernel_basis(*n, o.grid, o.oversample, 1e-2);
    report["kernel_basis"] = whlab::io::to_json(basis);
  }

  Json doc = envelope("verify-identities", job);
  doc["report"] = report;
  emit(doc, s.out);
  if (!s.csv.empty()) {
    auto f = open_csv(s.csv, "_semicommutator_sigma.csv");
    whlab::io::write_singular_csv(sc_sigma, f);
  }
  return kOk;
}

int run_homotopy(const Json& job, const Settings& s) {
  const whlab::Symbol b = whlab::io::parse_symbol(required(job, "symbol"), "/symbol");
  const int steps = job.value("options", Json::object()).value("steps", 20);
  const double tol = s.tol.value_or(job.value("options", Json::object()).value("tol", whlab::kEllipticTolerance));
  const auto v = whlab::homotopy_verify(b, steps, tol);
  Json doc = envelope("homotopy", job);
  doc["report"] = whlab::io::to_json(v);
  emit(doc, s.out);
  if (!s.csv.empty()) {
    auto f = open_csv(s.csv, "_homotopy.csv");
    whlab::io::write_homotopy_csv(v.trace, f);
  }
  return kOk;
}

int run_perturb(const Json& job, const Settings& s) {
  const whlab::Symbol a = whlab::io::parse_symbol(required(job, "symbol"), "/symbol");
  const Json opts = job.value("options", Json::object());
  const double eps = opts.value("epsilon", 0.1);
  std::optional<whlab::Complex> v;
  if (opts.contains("direction")) {
    const Json& d = opts["direction"];
    if (d.is_number()) {
      v = whlab::Complex(d.get<double>(), 0.0);
    } else if (d.is_array() && d.size() == 2) {
      v = whlab::Complex(d[0].get<double>(), d[1].get<double>());
    } else {
      throw whlab::Error(whlab::Errc::Schema, "/options/direction: expected a number or [re, im]");
    }
  }
  const auto p = whlab::perturbation_experiment(a, v, eps, fredholm_options(job, s));
  Json doc = envelope("perturb", job);
  doc["report"] = whlab::io::to_json(p);
  emit(doc, s.out);
  const bool inconclusive = p.plus.verdict == whlab::Verdict::Inconclusive || p.minus.verdict == whlab::Verdict::Inconclusive;
  return inconclusive ? kInconclusive : kOk;
}

int dispatch(const std::string& action, const Json& job, const Settings& s) {
  if (action == "analyze") return run_analyze(job, s);
  if (action == "norm") return run_norm(job, s);
  if (action == "verify-identities") return run_verify(job, s);
  if (action == "homotopy") return run_homotopy(job, s);
  if (action == "perturb") return run_perturb(job, s);
  throw whlab::Error(whlab::Errc::Schema, "/action: unknown action \"" + action + "\"");
}

/// Runs one job and maps failures onto exit codes; diagnostics go to stderr.
int guarded(const std::function<int()>& f) {
  try {
    return f();
  } catch (const whlab::Error& e) {
    std::cerr << "whlab: " << e.what() << "\n";
    return kInputError;
  } catch (const Json::exception& e) {
    std::cerr << "whlab: Schema: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wiener-Hopf operator laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(WHLAB_VERSION));

  Settings settings;
  std::string config;
  std::string symbol;
  std::string symbol_b;
  std::string space;
  std::string function;
  int steps = 20;
  double epsilon = 0.1;
  std::vector<double> direction;
  std::string batch_file;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "Job file (JSON); flags override its options");
    sub->add_option("--grid-n", settings.grid_n, "Half-line grid cells N");
    sub->add_option("--half-line-length", settings.half_line_length, "Half-line truncation length L");
    sub->add_option("--tol", settings.tol, "Ellipticity margin tolerance");
    sub->add_option("--out", settings.out, "Report path (default stdout)");
    sub->add_option("--csv", settings.csv, "Prefix for CSV plot data");
  };

  auto* analyze = app.add_subcommand("analyze", "Fredholm verdict and index for a symbol");
  common(analyze);
  analyze->add_option("--symbol", symbol, "Symbol JSON or file");
  analyze->add_flag("--no-numerics", settings.no_numerics, "Skip the matrix estimators");
  analyze->add_option("--matrix", settings.matrix, "Write W(a) on the grid (.csv text, otherwise binary)");

  auto* norm = app.add_subcommand("norm", "Norm of a grid function in a Banach function space");
  common(norm);
  norm->add_option("--space", space, "Space JSON or file");
  norm->add_option("--function", function, "Grid function JSON or file");

  auto* verify = app.add_subcommand("verify-identities", "Semi-commutator, adjoint and kernel identities");
  common(verify);
  verify->add_option("--symbol", symbol, "Symbol a (default r_1)");
  verify->add_option("--symbol-b", symbol_b, "Symbol b (default r_-1)");

  auto* homotopy = app.add_subcommand("homotopy", "Verify the homotopy h_t from r_wind b to b");
  common(homotopy);
  homotopy->add_option("--symbol", symbol, "Symbol JSON or file");
  homotopy->add_option("--steps", steps, "Number of t steps")->check(CLI::PositiveNumber);

  auto* perturb = app.add_subcommand("perturb", "Index jump under a +- eps v");
  common(perturb);
  perturb->add_option("--symbol", symbol, "Symbol JSON or file");
  perturb->add_option("--epsilon", epsilon, "Perturbation size")->check(CLI::PositiveNumber);
  perturb->add_option("--direction", direction, "Direction v as re [im]")->expected(1, 2);
  perturb->add_flag("--no-numerics", settings.no_numerics, "Skip the matrix estimators");

  auto* batch = app.add_subcommand("batch", "Run a JSON array of jobs, each with its own \"out\"");
  batch->add_option("file", batch_file, "Batch file")->required();
  batch->add_flag("--no-numerics", settings.no_numerics, "Skip the matrix estimators");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  if (batch->parsed()) {
    return guarded([&] {
      const Json jobs = whlab::io::read_document(batch_file);
      if (!jobs.is_array()) throw whlab::Error(whlab::Errc::Schema, batch_file + ": expected an array of jobs");
      int worst = kOk;
      for (std::size_t i = 0; i < jobs.size(); ++i) {
        Settings s = settings;
        s.out = jobs[i].value("out", std::string());
        s.csv = jobs[i].value("csv", std::string());
        const std::string action = jobs[i].value("action", std::string());
        const int code = guarded([&] { return dispatch(action, jobs[i], s); });
        if (code == kInputError) std::cerr << "whlab: job " << i << " failed\n";
        if (code == kInputError || (code == kInconclusive && worst == kOk)) worst = code;
      }
      return worst;
    });
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string action = sub->get_name();
  return guarded([&] {
    Json job = config.empty() ? Json::object() : whlab::io::read_document(config);
    if (!job.is_object()) throw whlab::Error(whlab::Errc::Schema, config + ": expected a job object");
    if (job.contains("action") && job["action"] != action) {
      throw whlab::Error(whlab::Errc::Schema, "/action: job is \"" + job["action"].get<std::string>() + "\" but subcommand is " + action);
    }
    job["action"] = action;
    if (!symbol.empty()) job["symbol"] = load(symbol, "--symbol");
    if (!symbol_b.empty()) job["symbol_b"] = load(symbol_b, "--symbol-b");
    if (!space.empty()) job["space"] = load(space, "--space");
    if (!function.empty()) job["function"] = load(function, "--function");
    if (action == "homotopy" && homotopy->count("--steps")) job["options"]["steps"] = steps;
    if (action == "perturb") {
      if (perturb->count("--epsilon")) job["options"]["epsilon"] = epsilon;
      if (!direction.empty()) job["options"]["direction"] = direction.size() == 1 ? Json(direction[0]) : Json(direction);
    }
    if (settings.out.empty() && job.contains("out")) settings.out = job["out"].get<std::string>();
    if (settings.csv.empty() && job.contains("csv")) settings.csv = job["csv"].get<std::string>();
    return dispatch(action, job, settings);
  });
}
