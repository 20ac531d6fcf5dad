#include "sbp/io.hpp"

#include <fstream>

namespace sbp::io {

namespace {

std::string at(const std::string& where, std::size_t index) { return where + "[" + std::to_string(index) + "]"; }

const Json& array_at(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  return j;
}

bool bool_from_json(const Json& j, const std::string& where) {
  if (!j.is_boolean()) throw InputError(where + ": expected true or false");
  return j.get<bool>();
}

std::string string_from_json(const Json& j, const std::string& where) {
  if (!j.is_string()) throw InputError(where + ": expected a string");
  return j.get<std::string>();
}

std::uint64_t unsigned_from_json(const Json& j, const std::string& where) {
  // Parsed text yields unsigned numbers, values built in memory signed ones.
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  throw InputError(where + ": expected a nonnegative integer");
}

template <typename T, typename Fn>
std::vector<T> list_from_json(const Json& j, const std::string& where, Fn&& parse) {
  std::vector<T> out;
  const Json& a = array_at(j, where);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(parse(a[i], at(where, i)));
  return out;
}

template <typename T, typename Fn>
Json optional_json(const std::optional<T>& value, Fn&& convert) {
  return value ? convert(*value) : Json(nullptr);
}

}  // namespace

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw InputError(where + ": missing \"" + key + "\"");
  return *it;
}

Json to_json(const Rational& x) { return to_string(x); }

Rational rational_from_json(const Json& j, const std::string& where) {
  if (!j.is_string()) throw InputError(where + ": expected a rational string such as \"3/4\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const ParseError& e) {
    throw InputError(where + ": " + e.what());
  }
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

Vector vector_from_json(const Json& j, const std::string& where) {
  const auto entries = list_from_json<Rational>(j, where, rational_from_json);
  Vector v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = entries[i];
  return v;
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vector(m.row(r).transpose())));
  return out;
}

Matrix matrix_from_json(const Json& j, const std::string& where) {
  const Json& rows = array_at(j, where);
  if (rows.empty()) throw InputError(where + ": matrix has no rows");
  const std::size_t cols = array_at(rows[0], where + " row 1").size();
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string row_where = where + " row " + std::to_string(r + 1);
    const Json& row = array_at(rows[r], row_where);
    if (row.size() != cols) {
      throw InputError(row_where + ": has " + std::to_string(row.size()) + " entries, expected " +
                       std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rational_from_json(row[c], row_where + " column " + std::to_string(c + 1));
    }
  }
  return m;
}

Json to_json(SupportSet s) {
  Json out = Json::array();
  for (int a : s.atoms()) out.push_back(a);
  return out;
}

SupportSet support_from_json(const Json& j, Eigen::Index n, const std::string& where) {
  SupportSet s;
  const Json& a = array_at(j, where);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto atom = unsigned_from_json(a[i], at(where, i));
    if (atom < 1 || atom > static_cast<std::uint64_t>(n)) {
      throw InputError(at(where, i) + ": atom " + std::to_string(atom) + " outside 1.." + std::to_string(n));
    }
    s.set(static_cast<int>(atom - 1));
  }
  return s;
}

Json to_json(const NormSpec& norm) {
  Json out;
  out["p"] = norm.exponent_string();
  out["weights"] = to_json(norm.weights());
  return out;
}

NormSpec norm_from_json(const Json& j, Eigen::Index n, const std::string& where) {
  const std::string p = string_from_json(member(j, "p", where), where + ".p");
  Vector weights = Vector::Ones(n);
  if (j.contains("weights")) {
    weights = vector_from_json(j["weights"], where + ".weights");
    if (weights.size() != n) {
      throw InputError(where + ".weights: has " + std::to_string(weights.size()) + " entries, expected " +
                       std::to_string(n));
    }
  }
  try {
    return NormSpec::parse(p, weights);
  } catch (const std::logic_error& e) {
    throw InputError(where + ": " + e.what());
  } catch (const ParseError& e) {
    throw InputError(where + ": " + e.what());
  }
}

Json to_json(const NormValue& v) {
  Json out;
  out["squared"] = v.squared();
  out["lower"] = to_json(v.lower());
  out["upper"] = to_json(v.upper());
  out["exact"] = v.is_exact();
  out["text"] = v.to_string();
  return out;
}

NormValue norm_value_from_json(const Json& j, const std::string& where) {
  const bool squared = bool_from_json(member(j, "squared", where), where + ".squared");
  const Rational lower = rational_from_json(member(j, "lower", where), where + ".lower");
  const Rational upper = rational_from_json(member(j, "upper", where), where + ".upper");
  if (lower > upper) throw InputError(where + ": lower bound exceeds upper bound");
  return squared ? NormValue::square_bounds(lower, upper) : NormValue::bounds(lower, upper);
}

Json to_json(const Witness& w) {
  Json out;
  out["kind"] = to_string(w.kind);
  out["f"] = to_json(w.f);
  out["g"] = to_json(w.g);
  out["note"] = w.note;
  return out;
}

Witness witness_from_json(const Json& j, Eigen::Index n, const std::string& where) {
  Witness w;
  try {
    w.kind = witness_kind_from_string(string_from_json(member(j, "kind", where), where + ".kind"));
  } catch (const ParseError& e) {
    throw InputError(where + ".kind: " + e.what());
  }
  w.f = vector_from_json(member(j, "f", where), where + ".f");
  w.g = vector_from_json(member(j, "g", where), where + ".g");
  if (w.f.size() != n || w.g.size() != n) throw InputError(where + ": witness dimension mismatch");
  w.note = string_from_json(member(j, "note", where), where + ".note");
  return w;
}

Json to_json(const Verdict& v) {
  Json out;
  out["holds"] = v.holds;
  out["witness"] = optional_json(v.witness, [](const Witness& w) { return to_json(w); });
  return out;
}

Verdict verdict_from_json(const Json& j, Eigen::Index n, const std::string& where) {
  Verdict v;
  v.holds = bool_from_json(member(j, "holds", where), where + ".holds");
  const Json& w = member(j, "witness", where);
  if (!w.is_null()) v.witness = witness_from_json(w, n, where + ".witness");
  if (v.holds == v.witness.has_value()) throw InputError(where + ": a witness must be present exactly when false");
  return v;
}

Json to_json(const WceForm& form) {
  Json out;
  Json blocks = Json::array(), u = Json::array(), psi = Json::array();
  for (std::size_t j = 0; j < form.size(); ++j) {
    blocks.push_back(to_json(form.blocks[j]));
    u.push_back(to_json(form.u[j]));
    psi.push_back(to_json(form.psi[j]));
  }
  out["blocks"] = std::move(blocks);
  out["u"] = std::move(u);
  out["psi"] = std::move(psi);
  return out;
}

WceForm wce_from_json(const Json& j, Eigen::Index n, const std::string& where) {
  auto blocks = list_from_json<SupportSet>(member(j, "blocks", where), where + ".blocks",
                                           [n](const Json& x, const std::string& w) { return support_from_json(x, n, w); });
  auto u = list_from_json<Vector>(member(j, "u", where), where + ".u", vector_from_json);
  auto psi = list_from_json<Vector>(member(j, "psi", where), where + ".psi", vector_from_json);
  try {
    return make_wce(n, std::move(blocks), std::move(u), std::move(psi));
  } catch (const std::invalid_argument& e) {
    throw InputError(where + ": " + e.what());
  }
}

Json to_json(const PiecewisePoly& f) {
  Json pieces = Json::array();
  for (const Piece& p : f.pieces()) {
    Json piece;
    piece["from"] = to_json(p.from);
    piece["to"] = to_json(p.to);
    Json coeffs = Json::array();
    for (const Rational& c : p.coeffs) coeffs.push_back(to_json(c));
    piece["coeffs"] = std::move(coeffs);
    pieces.push_back(std::move(piece));
  }
  Json out;
  out["pieces"] = std::move(pieces);
  return out;
}

PiecewisePoly piecewise_from_json(const Json& j, const std::string& where) {
  const auto pieces =
      list_from_json<Piece>(member(j, "pieces", where), where + ".pieces", [](const Json& x, const std::string& w) {
        Piece p;
        p.from = rational_from_json(member(x, "from", w), w + ".from");
        p.to = rational_from_json(member(x, "to", w), w + ".to");
        p.coeffs = list_from_json<Rational>(member(x, "coeffs", w), w + ".coeffs", rational_from_json);
        return p;
      });
  try {
    return PiecewisePoly(pieces);
  } catch (const IntervalError& e) {
    throw InputError(where + ": " + e.what());
  }
}

Json to_json(const IntervalRegion& region) {
  Json out = Json::array();
  for (const auto& [a, b] : region.intervals()) out.push_back(Json::array({to_json(a), to_json(b)}));
  return out;
}

IntervalRegion region_from_json(const Json& j, const std::string& where) {
  auto intervals = list_from_json<std::pair<Rational, Rational>>(j, where, [](const Json& x, const std::string& w) {
    if (!x.is_array() || x.size() != 2) throw InputError(w + ": expected [from, to]");
    return std::pair{rational_from_json(x[0], w + "[0]"), rational_from_json(x[1], w + "[1]")};
  });
  try {
    return IntervalRegion(std::move(intervals));
  } catch (const IntervalError& e) {
    throw InputError(where + ": " + e.what());
  }
}

Json to_json(const FiniteRankOp& t) {
  Json terms = Json::array();
  for (const Term& term : t.terms()) {
    Json entry;
    entry["kernel"] = to_json(term.kernel);
    entry["image"] = to_json(term.image);
    terms.push_back(std::move(entry));
  }
  Json out;
  out["terms"] = std::move(terms);
  return out;
}

FiniteRankOp frop_from_json(const Json& j, const std::string& where) {
  auto terms = list_from_json<Term>(member(j, "terms", where), where + ".terms", [](const Json& x, const std::string& w) {
    return Term{piecewise_from_json(member(x, "kernel", w), w + ".kernel"),
                piecewise_from_json(member(x, "image", w), w + ".image")};
  });
  return FiniteRankOp(std::move(terms));
}

Json to_json(const ProbeFinding& finding) {
  Json out;
  out["family"] = finding.family;
  out["norm"] = to_json(finding.norm);
  out["matrix"] = to_json(finding.op.matrix());
  Json checks = Json::array();
  for (const FactCheck& c : finding.checks) {
    Json check;
    check["name"] = c.name;
    check["holds"] = c.holds;
    check["evidence"] = c.evidence;
    checks.push_back(std::move(check));
  }
  out["checks"] = std::move(checks);
  return out;
}

ProbeFinding finding_from_json(const Json& j, const std::string& where) {
  const Matrix m = matrix_from_json(member(j, "matrix", where), where + ".matrix");
  if (m.rows() != m.cols()) throw InputError(where + ".matrix: not square");
  ProbeFinding f{string_from_json(member(j, "family", where), where + ".family"),
                 norm_from_json(member(j, "norm", where), m.rows(), where + ".norm"),
                 Operator(m),
                 {}};
  f.checks = list_from_json<FactCheck>(member(j, "checks", where), where + ".checks", [](const Json& x, const std::string& w) {
    return FactCheck{string_from_json(member(x, "name", w), w + ".name"),
                     bool_from_json(member(x, "holds", w), w + ".holds"),
                     string_from_json(member(x, "evidence", w), w + ".evidence")};
  });
  return f;
}

Json to_json(const ProbeReport& report) {
  Json out;
  out["schema"] = 1;
  out["command"] = "probe";
  Json options;
  options["p"] = report.options.exponent;
  options["dims"] = Json::array({report.options.min_dim, report.options.max_dim});
  options["budget"] = report.options.budget;
  options["seed"] = report.options.seed;
  out["options"] = std::move(options);
  out["examined"] = report.examined;
  out["indeterminate"] = report.indeterminate;
  Json findings = Json::array();
  for (const ProbeFinding& f : report.findings) findings.push_back(to_json(f));
  out["findings"] = std::move(findings);
  return out;
}

ProbeReport probe_report_from_json(const Json& j) {
  const std::string where = "report";
  if (member(j, "schema", where) != 1) throw InputError("report.schema: unsupported version");
  ProbeReport r;
  const Json& options = member(j, "options", where);
  r.options.exponent = string_from_json(member(options, "p", "options"), "options.p");
  const Json& dims = member(options, "dims", "options");
  if (!dims.is_array() || dims.size() != 2) throw InputError("options.dims: expected [min, max]");
  r.options.min_dim = static_cast<Eigen::Index>(unsigned_from_json(dims[0], "options.dims[0]"));
  r.options.max_dim = static_cast<Eigen::Index>(unsigned_from_json(dims[1], "options.dims[1]"));
  r.options.budget = unsigned_from_json(member(options, "budget", "options"), "options.budget");
  r.options.seed = unsigned_from_json(member(options, "seed", "options"), "options.seed");
  r.examined = unsigned_from_json(member(j, "examined", where), "report.examined");
  r.indeterminate = unsigned_from_json(member(j, "indeterminate", where), "report.indeterminate");
  r.findings = list_from_json<ProbeFinding>(member(j, "findings", where), "report.findings", finding_from_json);
  return r;
}

Json to_json(const OperatorInput& input) {
  Json out;
  out["norm"] = to_json(input.norm);
  out["matrix"] = to_json(input.op.matrix());
  return out;
}

OperatorInput operator_input_from_json(const Json& j, Eigen::Index max_atoms) {
  const std::string where = "input";
  const Matrix m = matrix_from_json(member(j, "matrix", where), "matrix");
  if (m.rows() != m.cols()) {
    throw InputError("matrix: dimension mismatch, " + std::to_string(m.rows()) + " rows but " +
                     std::to_string(m.cols()) + " columns");
  }
  if (m.rows() > max_atoms) {
    throw BudgetExceeded("matrix has " + std::to_string(m.rows()) + " atoms, more than --max-atoms " +
                         std::to_string(max_atoms));
  }
  NormSpec norm = NormSpec::unweighted("2", m.rows());
  if (j.contains("norm")) norm = norm_from_json(j["norm"], m.rows(), "norm");
  return {std::move(norm), Operator(m)};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path.string() + ": invalid JSON (" + e.what() + ")");
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path.string() + ": cannot write");
  out << text;
  if (!out) throw InputError(path.string() + ": write failed");
}

}  // namespace sbp::io
