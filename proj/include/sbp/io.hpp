#pragma once

// JSON mapping for every value that crosses a file boundary. Rationals travel
// as strings ("p/q" or "p"), vectors as arrays of strings, matrices as
// row-major arrays of rows, and support sets as ascending 1-based atom lists.

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

#include "sbp/interval_lattice.hpp"
#include "sbp/norm.hpp"
#include "sbp/operator.hpp"
#include "sbp/wce.hpp"

namespace sbp::io {

/// Insertion-ordered so that dumps are stable and follow the schema layout.
using Json = nlohmann::ordered_json;

/// Malformed or inconsistent input. The message names the offending location.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json to_json(const Rational& x);
Rational rational_from_json(const Json& j, const std::string& where);

Json to_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& where);

/// Row-major. Parse errors name the 1-based row and column.
Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& where);

Json to_json(SupportSet s);
SupportSet support_from_json(const Json& j, Eigen::Index n, const std::string& where);

/// {"p": "1"|"2"|"inf"|"p/q", "weights": [...]}. Missing weights mean 1.
Json to_json(const NormSpec& norm);
NormSpec norm_from_json(const Json& j, Eigen::Index n, const std::string& where);

/// {"squared", "lower", "upper"}; "exact" and "text" are derived.
Json to_json(const NormValue& v);
NormValue norm_value_from_json(const Json& j, const std::string& where);

Json to_json(const Witness& w);
Witness witness_from_json(const Json& j, Eigen::Index n, const std::string& where);

Json to_json(const Verdict& v);
Verdict verdict_from_json(const Json& j, Eigen::Index n, const std::string& where);

Json to_json(const WceForm& form);
WceForm wce_from_json(const Json& j, Eigen::Index n, const std::string& where);

Json to_json(const PiecewisePoly& f);
PiecewisePoly piecewise_from_json(const Json& j, const std::string& where);

/// [["a", "b"], ...], one pair per maximal interval.
Json to_json(const IntervalRegion& region);
IntervalRegion region_from_json(const Json& j, const std::string& where);

/// {"terms": [{"kernel": ..., "image": ...}, ...]}.
Json to_json(const FiniteRankOp& t);
FiniteRankOp frop_from_json(const Json& j, const std::string& where);

Json to_json(const ProbeFinding& finding);
ProbeFinding finding_from_json(const Json& j, const std::string& where);

/// Thread count is an execution detail and is not written.
Json to_json(const ProbeReport& report);
ProbeReport probe_report_from_json(const Json& j);

/// Operator input file: {"norm": {...}, "matrix": [[...], ...]}. The norm is
/// optional and defaults to the unweighted 2-norm.
struct OperatorInput {
  NormSpec norm;
  Operator op;

  friend bool operator==(const OperatorInput&, const OperatorInput&) = default;
};

Json to_json(const OperatorInput& input);
/// Throws InputError, or BudgetExceeded when the matrix has more than
/// `max_atoms` rows.
OperatorInput operator_input_from_json(const Json& j, Eigen::Index max_atoms);

Json read_json_file(const std::filesystem::path& path);
/// Two-space indentation and a trailing newline.
std::string dump(const Json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Required member of an object, or InputError naming `where`.
const Json& member(const Json& j, const char* key, const std::string& where);

}  // namespace sbp::io
