#include "sbp/report.hpp"

#include "sbp/operator_norm.hpp"

namespace sbp {

using io::InputError;
using io::Json;
using io::member;

std::string AnalysisReport::classification() const {
  return sbp.holds ? "weighted conditional expectation operator" : "not a weighted conditional expectation operator";
}

AnalysisReport analyze(const io::OperatorInput& input, unsigned threads) {
  const Operator& t = input.op;
  SigmaTable sigma = enumerate_sigma(t, threads);
  Verdict sbp = is_sbp(t, sigma);
  std::optional<WceForm> decomposition;
  if (sbp.holds) decomposition = std::get<WceForm>(decompose_wce(t, sigma));
  std::optional<ClosureReport> closures;
  if (sigma.supports.size() <= kClosureCheckLimit) closures = verify_sigma_closures(t, sigma);
  auto minimal = minimal_supports(sigma);
  Verdict scp = is_scp(t, sigma);
  return AnalysisReport{input,
                        is_band_preserving(t),
                        is_disjointness_preserving(t),
                        is_beta(t),
                        std::move(sbp),
                        std::move(scp),
                        std::move(sigma),
                        std::move(minimal),
                        std::move(closures),
                        is_projection(t),
                        operator_norm(AtomicSpace(input.norm), t),
                        std::move(decomposition)};
}

namespace {

Json supports_json(const std::vector<SupportSet>& sets) {
  Json out = Json::array();
  for (SupportSet s : sets) out.push_back(io::to_json(s));
  return out;
}

std::vector<SupportSet> supports_from_json(const Json& j, Eigen::Index n, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  std::vector<SupportSet> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(io::support_from_json(j[i], n, where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

Json to_json(const AnalysisReport& r) {
  Json out;
  out["schema"] = 1;
  out["command"] = "analyze";
  out["input"] = io::to_json(r.input);
  out["classification"] = r.classification();
  Json predicates;
  predicates["BP"] = io::to_json(r.band_preserving);
  predicates["DP"] = io::to_json(r.disjointness_preserving);
  predicates["beta"] = io::to_json(r.beta);
  predicates["SBP"] = io::to_json(r.sbp);
  predicates["SCP"] = io::to_json(r.scp);
  out["predicates"] = std::move(predicates);
  Json sigma;
  sigma["supports"] = supports_json(r.sigma.supports);
  sigma["s_t"] = io::to_json(r.sigma.s_t);
  out["sigma"] = std::move(sigma);
  out["minimal_supports"] = supports_json(r.minimal_supports);
  if (r.closures) {
    Json closures;
    closures["union"] = r.closures->union_closed;
    closures["intersection"] = r.closures->intersection_closed;
    closures["complement"] = r.closures->complement_closed;
    closures["witness"] = r.closures->witness ? io::to_json(*r.closures->witness) : Json(nullptr);
    out["closures"] = std::move(closures);
  } else {
    out["closures"] = nullptr;
  }
  out["projection"] = r.projection;
  out["operator_norm"] = io::to_json(r.operator_norm);
  out["decomposition"] = r.decomposition ? io::to_json(*r.decomposition) : Json(nullptr);
  return out;
}

AnalysisReport analysis_report_from_json(const Json& j) {
  const std::string where = "report";
  if (member(j, "schema", where) != 1) throw InputError("report.schema: unsupported version");
  const io::OperatorInput input =
      io::operator_input_from_json(member(j, "input", where), Operator::kMaxAtoms);
  const Eigen::Index n = input.op.n();
  const Json& predicates = member(j, "predicates", where);
  const auto verdict = [&](const char* key) {
    return io::verdict_from_json(member(predicates, key, "predicates"), n, std::string("predicates.") + key);
  };
  const Json& sigma_json = member(j, "sigma", where);
  SigmaTable sigma;
  sigma.n = n;
  sigma.supports = supports_from_json(member(sigma_json, "supports", "sigma"), n, "sigma.supports");
  sigma.s_t = io::support_from_json(member(sigma_json, "s_t", "sigma"), n, "sigma.s_t");
  std::optional<ClosureReport> closures;
  if (const Json& c = member(j, "closures", where); !c.is_null()) {
    ClosureReport report;
    const auto flag = [&](const char* key) {
      const Json& v = member(c, key, "closures");
      if (!v.is_boolean()) throw InputError(std::string("closures.") + key + ": expected true or false");
      return v.get<bool>();
    };
    report.union_closed = flag("union");
    report.intersection_closed = flag("intersection");
    report.complement_closed = flag("complement");
    if (const Json& w = member(c, "witness", "closures"); !w.is_null()) {
      report.witness = io::witness_from_json(w, n, "closures.witness");
    }
    closures = std::move(report);
  }
  const Json& projection = member(j, "projection", where);
  if (!projection.is_boolean()) throw InputError("report.projection: expected true or false");
  std::optional<WceForm> decomposition;
  if (const Json& d = member(j, "decomposition", where); !d.is_null()) {
    decomposition = io::wce_from_json(d, n, "decomposition");
  }
  AnalysisReport r{input,
                   verdict("BP"),
                   verdict("DP"),
                   verdict("beta"),
                   verdict("SBP"),
                   verdict("SCP"),
                   std::move(sigma),
                   supports_from_json(member(j, "minimal_supports", where), n, "minimal_supports"),
                   std::move(closures),
                   projection.get<bool>(),
                   io::norm_value_from_json(member(j, "operator_norm", where), "operator_norm"),
                   std::move(decomposition)};
  if (r.sbp.holds != r.decomposition.has_value()) {
    throw InputError("report: decomposition must be present exactly when SBP holds");
  }
  if (member(j, "classification", where) != r.classification()) {
    throw InputError("report.classification: inconsistent with the SBP verdict");
  }
  return r;
}

IntervalReport analyze_interval(const FiniteRankOp& t) {
  return IntervalReport{t, frop_range_supports(t), frop_is_sbp(t), frop_is_scp(t)};
}

namespace {

Json interval_witness_json(const FiniteRankOp& t, const IntervalWitness& w) {
  Json out;
  out["kind"] = to_string(w.kind);
  out["f"] = io::to_json(w.f);
  out["g"] = io::to_json(w.g);
  out["note"] = w.note;
  out["psi_f"] = io::to_json(frop_coefficients(t, w.f));
  out["psi_g"] = io::to_json(frop_coefficients(t, w.g));
  return out;
}

Json interval_verdict_json(const FiniteRankOp& t, const IntervalVerdict& v) {
  Json out;
  out["holds"] = v.holds;
  out["witness"] = v.witness ? interval_witness_json(t, *v.witness) : Json(nullptr);
  return out;
}

IntervalVerdict interval_verdict_from_json(const Json& j, const std::string& where) {
  IntervalVerdict v;
  const Json& holds = member(j, "holds", where);
  if (!holds.is_boolean()) throw InputError(where + ".holds: expected true or false");
  v.holds = holds.get<bool>();
  if (const Json& w = member(j, "witness", where); !w.is_null()) {
    const std::string ww = where + ".witness";
    const Json& kind = member(w, "kind", ww);
    const Json& note = member(w, "note", ww);
    if (!kind.is_string() || !note.is_string()) throw InputError(ww + ": kind and note must be strings");
    try {
      v.witness = IntervalWitness{witness_kind_from_string(kind.get<std::string>()),
                                  io::piecewise_from_json(member(w, "f", ww), ww + ".f"),
                                  io::piecewise_from_json(member(w, "g", ww), ww + ".g"), note.get<std::string>()};
    } catch (const ParseError& e) {
      throw InputError(ww + ".kind: " + e.what());
    }
  }
  if (v.holds == v.witness.has_value()) throw InputError(where + ": a witness must be present exactly when false");
  return v;
}

}  // namespace

Json to_json(const IntervalReport& r) {
  Json out;
  out["schema"] = 1;
  out["command"] = "interval";
  out["input"] = io::to_json(r.op);
  out["rank_bound"] = r.op.rank_bound();
  Json supports = Json::array();
  for (const IntervalRegion& s : r.range_supports) supports.push_back(io::to_json(s));
  out["range_supports"] = std::move(supports);
  out["SBP"] = interval_verdict_json(r.op, r.sbp);
  out["SCP"] = interval_verdict_json(r.op, r.scp);
  return out;
}

IntervalReport interval_report_from_json(const Json& j) {
  const std::string where = "report";
  if (member(j, "schema", where) != 1) throw InputError("report.schema: unsupported version");
  IntervalReport r{io::frop_from_json(member(j, "input", where), "input"), {}, {}, {}};
  const Json& supports = member(j, "range_supports", where);
  if (!supports.is_array()) throw InputError("range_supports: expected an array");
  for (std::size_t i = 0; i < supports.size(); ++i) {
    r.range_supports.push_back(io::region_from_json(supports[i], "range_supports[" + std::to_string(i) + "]"));
  }
  r.sbp = interval_verdict_from_json(member(j, "SBP", where), "SBP");
  r.scp = interval_verdict_from_json(member(j, "SCP", where), "SCP");
  return r;
}

}  // namespace sbp
