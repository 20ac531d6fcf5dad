#include "sbp/commands.hpp"

#include <charconv>
#include <cstdlib>
#include <ostream>
#include <thread>

#include "sbp/campaign.hpp"
#include "sbp/report.hpp"

namespace sbp::cli {

unsigned threads_from_env() {
  if (const char* text = std::getenv("SBP_THREADS"); text != nullptr && *text != '\0') {
    unsigned value = 0;
    const char* end = text + std::char_traits<char>::length(text);
    if (auto [ptr, ec] = std::from_chars(text, end, value); ec == std::errc() && ptr == end && value > 0) {
      return value;
    }
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

namespace {

/// Maps the library's exception families onto exit codes.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const BudgetExceeded& e) {
    err << "error: budget exceeded: " << e.what() << "\n";
    return kBudgetExceeded;
  } catch (const io::InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ProbeHypothesisError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

void emit(const io::Json& report, const std::optional<std::filesystem::path>& path, const std::string& summary,
          std::ostream& out) {
  if (path) {
    io::write_text_file(*path, io::dump(report));
    out << summary << "\n";
  } else {
    out << io::dump(report);
  }
}

std::string verdict_text(bool holds) { return holds ? "true" : "false"; }

Eigen::Index parse_dim(const std::string& text, const std::string& whole) {
  Eigen::Index value = 0;
  const char* end = text.data() + text.size();
  if (auto [ptr, ec] = std::from_chars(text.data(), end, value); ec != std::errc() || ptr != end || value < 1) {
    throw io::InputError("--dims: expected A..B with 1 <= A <= B, got \"" + whole + "\"");
  }
  return value;
}

}  // namespace

int cmd_analyze(const AnalyzeConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (config.max_atoms < 1 || config.max_atoms > Operator::kMaxAtoms) {
      throw io::InputError("--max-atoms must lie in [1, " + std::to_string(Operator::kMaxAtoms) + "]");
    }
    const io::OperatorInput input =
        io::operator_input_from_json(io::read_json_file(config.input), config.max_atoms);
    const AnalysisReport report = analyze(input, config.threads);
    emit(to_json(report), config.report,
         report.classification() + "; SBP " + verdict_text(report.sbp.holds) + ", SCP " +
             verdict_text(report.scp.holds),
         out);
    return kSuccess;
  });
}

int cmd_interval(const IntervalConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const FiniteRankOp op = io::frop_from_json(io::read_json_file(config.input), "input");
    const IntervalReport report = analyze_interval(op);
    emit(to_json(report), config.report,
         "SBP " + verdict_text(report.sbp.holds) + ", SCP " + verdict_text(report.scp.holds) + ", " +
             std::to_string(report.range_supports.size()) + " range supports",
         out);
    return kSuccess;
  });
}

int cmd_probe(const ProbeConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto dots = config.dims.find("..");
    if (dots == std::string::npos) {
      throw io::InputError("--dims: expected A..B, got \"" + config.dims + "\"");
    }
    ProbeOptions options;
    options.exponent = config.p;
    options.min_dim = parse_dim(config.dims.substr(0, dots), config.dims);
    options.max_dim = parse_dim(config.dims.substr(dots + 2), config.dims);
    if (options.min_dim > options.max_dim) {
      throw io::InputError("--dims: expected A..B with 1 <= A <= B, got \"" + config.dims + "\"");
    }
    options.budget = config.budget;
    options.seed = config.seed;
    options.threads = config.threads;
    const ProbeReport report = probe_charscp(options);
    io::write_text_file(config.out, io::dump(io::to_json(report)));
    out << report.examined << " candidates examined, " << report.findings.size() << " findings\n";
    return kSuccess;
  });
}

int cmd_selftest(std::uint64_t seed, unsigned threads, std::ostream& out, std::ostream& err) {
  const CampaignReport report = run_campaign(seed, threads);
  out << report.text();
  if (!report.passed()) {
    for (const CriterionResult& c : report.criteria) {
      if (!c.passed) err << "selftest failed: " << c.name << "\n";
    }
    return kSelfTestFailure;
  }
  return kSuccess;
}

}  // namespace sbp::cli
