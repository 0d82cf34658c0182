#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "whlab/fredholm.hpp"
#include "whlab/singular_values.hpp"
#include "whlab/spaces.hpp"
#include "whlab/symbol.hpp"
#include "whlab/symbol_analysis.hpp"

namespace whlab::io {

using Json = nlohmann::ordered_json;

/// Symbol tree: {"kind": "const"|"rational"|"pl"|"sum"|"product"|"power"|"scaled"|"reciprocal"|"conj", ...}.
/// Complex numbers are [re, im] or plain numbers. Errors are Schema with a JSON-pointer path.
Symbol parse_symbol(const Json& j, const std::string& path = "");
Json symbol_to_json(const Symbol& a);

/// {"space": "lorentz", "p", "q"} | {"space": "orlicz", "phi": {"power": p[, "scale": s]} or
/// {"breakpoints", "density"}} | {"space": "variable", "exponent": p or {"breakpoints", "values"}}.
SpaceSpec parse_space(const Json& j, const std::string& path = "");
Json space_to_json(const SpaceSpec& s);

/// {"domain": {"type": "halfline", "length", "cells"} or {"type": "line", "half_width", "cells"},
///  "samples": [...] or "pieces": [{"from", "to", "value"}]}. Pieces are sampled at cell midpoints
/// with half-open intervals (from, to].
GridFunction parse_function(const Json& j, const std::string& path = "");

Json to_json(const FredholmReport& r);
Json to_json(const HomotopyVerification& h);
Json to_json(const PerturbationReport& p);
Json to_json(const KernelBasis& k);
Json to_json(const Complex& c);

/// Parses a document, turning syntax errors into Schema errors with line and column.
Json parse_document(const std::string& text, const std::string& source);
Json read_document(const std::string& file);

/// CSV plot data with a header line.
void write_curve_csv(const CurveTrace& trace, std::ostream& out);          // theta,xi,re,im,arg
void write_singular_csv(const SingularValueProfile& p, std::ostream& out);  // k,sigma
void write_homotopy_csv(const HomotopyTrace& t, std::ostream& out);         // t,margin,sup_distance,...

}  // namespace whlab::io
