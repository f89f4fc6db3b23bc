#pragma once

#include "json.hpp"

#include "freeconv/characterize.hpp"
#include "freeconv/convolution.hpp"
#include "freeconv/matrix_lab.hpp"
#include "freeconv/measures.hpp"
#include "freeconv/sequences.hpp"
#include "freeconv/transforms.hpp"

namespace freeconv {

using Json = nlohmann::ordered_json;

/// Parses JSON text; syntax errors become ParseError.
Json parse_json(std::string_view text);

/// {"kind":"atomic","atoms":[["0","1/2"],["1","1/2"]]},
/// {"kind":"semicircle","center":0.0,"radius":2.0} or {"kind":"grid","x":[...],"f":[...]}.
Measure measure_from_json(const Json& j);
Json to_json(const Measure& mu);

/// {"moments":["0","1","0","2"]}; rationals may be "p/q" strings or JSON numbers.
MomentSequence sequence_from_json(const Json& j);

/// {"n":2,"A":[["1/4","-1/4"],["-1/4","1/4"]],"b":["1/2","1/2"]}; "n" is optional.
QuadraticFormSpec qform_from_json(const Json& j);
Json to_json(const QuadraticFormSpec& spec);

Rational rational_from_json(const Json& j);
Json to_json(const std::vector<Rational>& values);
Json to_json(Complex z);

Json to_json(const ValidityReport& r);
Json to_json(const DichotomyReport& r);
Json to_json(const SubordinationSolution& s);
Json to_json(const DiagnosticsReport& r);
Json to_json(const ClosureReport& r);
Json to_json(const KreinExpansionReport& r);
Json to_json(const NumericMoments& n);
Json to_json(const TraceEstimate& t);
Json to_json(const InequalitySweepReport& r);

}  // namespace freeconv
