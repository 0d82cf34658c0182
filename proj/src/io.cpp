#include "whlab/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "whlab/errors.hpp"

namespace whlab::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(Errc::Schema, (path.empty() ? std::string("/") : path) + ": " + msg);
}

const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path, "missing field \"" + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

Complex complex_value(const Json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  fail(path, "expected a number or [re, im]");
}

std::vector<double> numbers(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "/" + std::to_string(i)));
  return out;
}

std::vector<Symbol> parts(const Json& j, const std::string& path) {
  const Json& arr = field(j, "parts", path);
  if (!arr.is_array() || arr.empty()) fail(path + "/parts", "expected a nonempty array");
  std::vector<Symbol> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(parse_symbol(arr[i], path + "/parts/" + std::to_string(i)));
  return out;
}

/// Rethrows library errors raised while building a node as Schema errors at that node.
template <typename F>
auto at(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == Errc::Schema) throw;
    fail(path, e.what());
  }
}

}  // namespace

Json to_json(const Complex& c) { return Json::array({c.real(), c.imag()}); }

Symbol parse_symbol(const Json& j, const std::string& path) {
  if (j.is_number() || j.is_array()) return Symbol::constant(complex_value(j, path));
  const Json& kind_json = field(j, "kind", path);
  if (!kind_json.is_string()) fail(path + "/kind", "expected a string");
  const std::string kind = kind_json.get<std::string>();

  if (kind == "const") return Symbol::constant(complex_value(field(j, "value", path), path + "/value"));
  if (kind == "rational") return Symbol::rational(integer(field(j, "n", path), path + "/n"));
  if (kind == "sum") return Symbol::sum(parts(j, path));
  if (kind == "product") return Symbol::product(parts(j, path));
  if (kind == "power") {
    const Symbol base = parse_symbol(field(j, "base", path), path + "/base");
    const double t = number(field(j, "t", path), path + "/t");
    return at(path, [&] { return Symbol::power(base, t); });
  }
  if (kind == "scaled") {
    const Symbol s = parse_symbol(field(j, "symbol", path), path + "/symbol");
    return Symbol::scaled(s, complex_value(field(j, "factor", path), path + "/factor"));
  }
  if (kind == "reciprocal") {
    const Symbol base = parse_symbol(field(j, "base", path), path + "/base");
    return at(path, [&] { return Symbol::reciprocal(base); });
  }
  if (kind == "conj") return Symbol::conjugate(parse_symbol(field(j, "base", path), path + "/base"));
  if (kind == "pl") {
    std::vector<double> vertices = numbers(field(j, "vertices", path), path + "/vertices");
    if (j.contains("values")) {
      const Json& vals = j["values"];
      if (!vals.is_array()) fail(path + "/values", "expected an array");
      std::vector<Complex> values;
      for (std::size_t i = 0; i < vals.size(); ++i) values.push_back(complex_value(vals[i], path + "/values/" + std::to_string(i)));
      return at(path, [&] { return Symbol::piecewise_linear(PLData::interpolate(vertices, values)); });
    }
    const Complex left = complex_value(field(j, "left", path), path + "/left");
    const Complex right = complex_value(field(j, "right", path), path + "/right");
    const Json& segs = field(j, "segments", path);
    if (!segs.is_array()) fail(path + "/segments", "expected an array of [c, d] pairs");
    std::vector<std::pair<Complex, Complex>> segments;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const std::string sp = path + "/segments/" + std::to_string(i);
      if (!segs[i].is_array() || segs[i].size() != 2) fail(sp, "expected [c, d]");
      segments.emplace_back(complex_value(segs[i][0], sp + "/0"), complex_value(segs[i][1], sp + "/1"));
    }
    return at(path, [&] { return Symbol::piecewise_linear(PLData::normal_form(vertices, left, right, segments)); });
  }
  fail(path + "/kind", "unknown symbol kind \"" + kind + "\"");
}

Json symbol_to_json(const Symbol& a) {
  return std::visit(
      [&](const auto& d) -> Json {
        using T = std::decay_t<decltype(d)>;
        Json j;
        if constexpr (std::is_same_v<T, node::Constant>) {
          j["kind"] = "const";
          j["value"] = to_json(d.value);
        } else if constexpr (std::is_same_v<T, node::Rational>) {
          j["kind"] = "rational";
          j["n"] = d.n;
        } else if constexpr (std::is_same_v<T, node::PiecewiseLinear>) {
          j["kind"] = "pl";
          j["vertices"] = d.pl.vertices;
          j["left"] = to_json(d.pl.left_value);
          j["right"] = to_json(d.pl.right_value);
          Json segs = Json::array();
          for (const auto& [c, s] : d.pl.segments) segs.push_back(Json::array({to_json(c), to_json(s)}));
          j["segments"] = segs;
        } else if constexpr (std::is_same_v<T, node::Sum> || std::is_same_v<T, node::Product>) {
          j["kind"] = std::is_same_v<T, node::Sum> ? "sum" : "product";
          Json ps = Json::array();
          for (const auto& p : d.parts) ps.push_back(symbol_to_json(p));
          j["parts"] = ps;
        } else if constexpr (std::is_same_v<T, node::Power>) {
          j["kind"] = "power";
          j["base"] = symbol_to_json(d.base);
          j["t"] = d.t;
        } else if constexpr (std::is_same_v<T, node::Scaled>) {
          j["kind"] = "scaled";
          j["symbol"] = symbol_to_json(d.s);
          j["factor"] = to_json(d.factor);
        } else if constexpr (std::is_same_v<T, node::Reciprocal>) {
          j["kind"] = "reciprocal";
          j["base"] = symbol_to_json(d.base);
        } else {
          j["kind"] = "conj";
          j["base"] = symbol_to_json(d.base);
        }
        return j;
      },
      a.node().data);
}

SpaceSpec parse_space(const Json& j, const std::string& path) {
  const Json& kind_json = field(j, "space", path);
  if (!kind_json.is_string()) fail(path + "/space", "expected a string");
  const std::string kind = kind_json.get<std::string>();
  if (kind == "lorentz") {
    const double p = number(field(j, "p", path), path + "/p");
    const double q = number(field(j, "q", path), path + "/q");
    if (!(p > 1.0) || !(q > 1.0)) fail(path, "Lorentz parameters must satisfy 1 < p, q < inf");
    return Lorentz{p, q};
  }
  if (kind == "orlicz") {
    const Json& phi = field(j, "phi", path);
    if (phi.contains("power")) {
      const double p = number(phi["power"], path + "/phi/power");
      const double scale = phi.contains("scale") ? number(phi["scale"], path + "/phi/scale") : 1.0;
      return at(path + "/phi", [&] { return SpaceSpec{Orlicz{YoungFunction::power(p, scale)}}; });
    }
    const auto bp = numbers(field(phi, "breakpoints", path + "/phi"), path + "/phi/breakpoints");
    const auto dens = numbers(field(phi, "density", path + "/phi"), path + "/phi/density");
    return at(path + "/phi", [&] { return SpaceSpec{Orlicz{YoungFunction::tabulated(bp, dens)}}; });
  }
  if (kind == "variable") {
    const Json& e = field(j, "exponent", path);
    if (e.is_number()) {
      const double p = e.get<double>();
      return at(path + "/exponent", [&] { return SpaceSpec{VariableLebesgue{VariableExponent::constant(p)}}; });
    }
    const auto bp = numbers(field(e, "breakpoints", path + "/exponent"), path + "/exponent/breakpoints");
    const auto vals = numbers(field(e, "values", path + "/exponent"), path + "/exponent/values");
    return at(path + "/exponent", [&] { return SpaceSpec{VariableLebesgue{VariableExponent::piecewise(bp, vals)}}; });
  }
  fail(path + "/space", "unknown space \"" + kind + "\"");
}

Json space_to_json(const SpaceSpec& s) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        Json j;
        if constexpr (std::is_same_v<T, Lorentz>) {
          j["space"] = "lorentz";
          j["p"] = v.p;
          j["q"] = v.q;
        } else if constexpr (std::is_same_v<T, Orlicz>) {
          j["space"] = "orlicz";
          if (v.phi.is_power()) {
            j["phi"] = {{"power", v.phi.exponent()}, {"scale", v.phi.scale()}};
          } else {
            j["phi"] = {{"breakpoints", v.phi.breakpoints()}, {"density", v.phi.values()}};
          }
        } else {
          j["space"] = "variable";
          j["exponent"] = {{"breakpoints", v.exponent.breakpoints}, {"values", v.exponent.values}};
        }
        return j;
      },
      s);
}

GridFunction parse_function(const Json& j, const std::string& path) {
  const Json& d = field(j, "domain", path);
  const Json& type = field(d, "type", path + "/domain");
  const Index cells = integer(field(d, "cells", path + "/domain"), path + "/domain/cells");
  if (cells < 2) fail(path + "/domain/cells", "need at least two cells");
  Domain domain;
  if (type == "halfline") {
    const double length = number(field(d, "length", path + "/domain"), path + "/domain/length");
    if (!(length > 0.0)) fail(path + "/domain/length", "must be positive");
    domain = HalfLineGrid{length, cells};
  } else if (type == "line") {
    const double hw = number(field(d, "half_width", path + "/domain"), path + "/domain/half_width");
    if (!(hw > 0.0)) fail(path + "/domain/half_width", "must be positive");
    domain = LineGrid{hw, cells};
  } else {
    fail(path + "/domain/type", "expected \"halfline\" or \"line\"");
  }
  const Eigen::VectorXd x = std::visit([](const auto& g) { return g.nodes(); }, domain);
  Eigen::VectorXcd samples = Eigen::VectorXcd::Zero(cells);
  if (j.contains("samples")) {
    const Json& s = j["samples"];
    if (!s.is_array() || static_cast<Index>(s.size()) != cells) fail(path + "/samples", "expected one sample per cell");
    for (Index i = 0; i < cells; ++i) samples(i) = complex_value(s[static_cast<std::size_t>(i)], path + "/samples/" + std::to_string(i));
  } else {
    const Json& pieces = field(j, "pieces", path);
    if (!pieces.is_array()) fail(path + "/pieces", "expected an array");
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const std::string pp = path + "/pieces/" + std::to_string(k);
      const double from = number(field(pieces[k], "from", pp), pp + "/from");
      const double to = number(field(pieces[k], "to", pp), pp + "/to");
      const Complex value = complex_value(field(pieces[k], "value", pp), pp + "/value");
      for (Index i = 0; i < cells; ++i) {
        if (x(i) > from && x(i) <= to) samples(i) += value;
      }
    }
  }
  return GridFunction(domain, samples);
}

namespace {

Json options_json(const FredholmOptions& o) {
  return Json{{"half_line_length", o.grid.length},
              {"grid_n", o.grid.cells},
              {"oversample", o.oversample},
              {"margin_tol", o.margin_tol},
              {"numerics", o.numerics},
              {"zero_rel", o.zero_rel},
              {"min_gap", o.min_gap},
              {"residual_tol", o.residual_tol},
              {"max_explicit", o.max_explicit},
              {"toeplitz_size", o.toeplitz_size > 0 ? o.toeplitz_size : o.grid.cells}};
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json to_json(const FredholmReport& r) {
  Json j;
  j["symbol"] = r.symbol;
  j["elliptic"] = r.elliptic;
  j["margin"] = r.margin;
  j["margin_location_xi"] = xi_of_theta(r.margin_location);
  j["winding"] = optional_json(r.winding);
  j["predicted_index"] = optional_json(r.predicted_index);
  j["numerical_kernel_dim"] = optional_json(r.numerical_kernel_dim);
  j["numerical_cokernel_dim"] = optional_json(r.numerical_cokernel_dim);
  j["verdict"] = to_string(r.verdict);
  j["index"] = optional_json(r.index);
  Json est = Json::array();
  for (const auto& e : r.estimators) {
    est.push_back(Json{{"name", e.name},
                       {"ran", e.ran},
                       {"confident", e.confident},
                       {"kernel", e.kernel},
                       {"cokernel", e.cokernel},
                       {"index", optional_json(e.index)},
                       {"note", e.note}});
  }
  j["estimators"] = est;
  j["agreement"] = r.agreement;
  Json res = Json::object();
  for (const auto& [k, v] : r.residuals) res[k] = v;
  j["residuals"] = res;
  j["provenance"] = options_json(r.options);
  j["notes"] = r.notes;
  return j;
}

Json to_json(const HomotopyVerification& h) {
  const auto& t = h.trace;
  Json j;
  j["kappa"] = t.kappa;
  j["t0"] = t.t0;
  j["t"] = t.t_samples;
  j["margin"] = t.margin;
  j["sup_distance"] = t.sup_distance;
  j["bv_distance"] = t.bv_distance;
  j["power_variation"] = t.power_variation;
  j["power_variation_bound"] = t.power_variation_bound;
  j["variation_bound_ok"] = h.variation_bound_ok;
  j["predicted_index"] = h.predicted_index;
  j["endpoint_start_error"] = h.endpoint_start_error;
  j["endpoint_end_error"] = h.endpoint_end_error;
  j["convergence"] = Json{{"t0", 0.5},
                          {"step", h.convergence_steps},
                          {"distance", h.convergence_distance},
                          {"bound", h.convergence_bound},
                          {"monotone", h.convergence_monotone},
                          {"bound_ok", h.lipschitz_ok}};
  j["elliptic_everywhere"] = h.elliptic_everywhere;
  j["index_constant"] = h.index_constant;
  j["passed"] = h.passed;
  return j;
}

Json to_json(const PerturbationReport& p) {
  Json j;
  j["xi0"] = p.xi0;
  j["min_modulus"] = p.min_modulus;
  j["direction"] = to_json(p.direction);
  j["epsilon"] = p.epsilon;
  j["wind_plus"] = p.wind_plus;
  j["wind_minus"] = p.wind_minus;
  j["index_jump"] = p.index_jump;
  j["operator_gap"] = p.operator_gap;
  j["expected_gap"] = p.expected_gap;
  j["plus"] = to_json(p.plus);
  j["minus"] = to_json(p.minus);
  return j;
}

Json to_json(const KernelBasis& k) {
  return Json{{"n", k.n},
              {"half_line_length", k.grid.length},
              {"grid_n", k.grid.cells},
              {"cross_validation", k.cross_validation},
              {"residuals", k.residuals},
              {"gram_condition", k.gram_condition}};
}

Json parse_document(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(Errc::Schema, source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

Json read_document(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw Error(Errc::Schema, file + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str(), file);
}

void write_curve_csv(const CurveTrace& trace, std::ostream& out) {
  out << "theta,xi,re,im,arg\n";
  out.precision(17);
  for (std::size_t j = 0; j < trace.theta.size(); ++j) {
    out << trace.theta[j] << ',' << xi_of_theta(trace.theta[j]) << ',' << trace.value[j].real() << ','
        << trace.value[j].imag() << ',' << trace.arg[j] << '\n';
  }
}

void write_singular_csv(const SingularValueProfile& p, std::ostream& out) {
  out << "k,sigma\n";
  out.precision(17);
  for (Index k = 0; k < p.sigma.size(); ++k) out << k << ',' << p.sigma(k) << '\n';
}

void write_homotopy_csv(const HomotopyTrace& t, std::ostream& out) {
  out << "t,margin,sup_distance,bv_distance,power_variation,power_variation_bound\n";
  out.precision(17);
  for (std::size_t s = 0; s < t.t_samples.size(); ++s) {
    out << t.t_samples[s] << ',' << t.margin[s] << ',' << t.sup_distance[s] << ',' << t.bv_distance[s] << ','
        << t.power_variation[s] << ',' << t.power_variation_bound[s] << '\n';
  }
}

}  // namespace whlab::io
