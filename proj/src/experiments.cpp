#include "regretlab/experiments.hpp"

#include <algorithm>
#include <bit>
#include <exception>
#include <cmath>
#include <cstdio>
#include <map>
#include <thread>

#include "json.hpp"
#include "regretlab/ldim.hpp"
#include "regretlab/random.hpp"

namespace regretlab {

namespace {

struct PermutationResult {
  double expected = 0.0;
  std::uint64_t realized_max = 0;
  double sampled_mean = 0.0;
};

std::string fixed(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

double regret_term(std::size_t d, double horizon) {
  return std::sqrt(0.5 * std::log(static_cast<double>(d)) * std::max(0.0, horizon));
}

int class_ldim(const HypothesisClass& cls) {
  LdimSolver solver(cls);
  return solver.value(VersionSpace::full(cls.size()));
}

}  // namespace

BoundVerdict make_verdict(std::string name, double bound, double observed) {
  return {std::move(name), bound, observed, observed <= bound + kBoundTolerance};
}

PermutationReport evaluate(const LearnerConfig& learner, const ExperimentCase& experiment,
                           const HypothesisClass& cls, const PermutationStream& stream,
                           const EvaluateOptions& options) {
  const std::size_t count = stream.size();
  std::vector<PermutationResult> results(count);
  // The prediction stream is keyed by learner so two learners on the same
  // permutation draw independently.
  const std::uint64_t learner_seed =
      derive_seed(options.seed, SeedStream::kPrediction, static_cast<std::uint64_t>(learner.kind));

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const Sequence seq = stream.at(k);
      RunOptions run_options;
      run_options.record_rounds = false;
      run_options.mode = RunMode::sampled(derive_seed(learner_seed, SeedStream::kPrediction, k), options.trials);
      const RunTrace trace = run(learner, cls, seq, run_options);
      results[k].expected = trace.expected_mistakes;
      results[k].realized_max = trace.sampled->max();
      results[k].sampled_mean = trace.sampled->mean();
    }
  };

  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(count, 1));
  if (jobs == 1) {
    work(0, count);
  } else {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> failures(jobs);
    const std::size_t chunk = (count + jobs - 1) / jobs;
    for (std::size_t w = 0; w < jobs; ++w) {
      const std::size_t begin = std::min(count, w * chunk);
      const std::size_t end = std::min(count, begin + chunk);
      workers.emplace_back([&, w, begin, end] {
        try {
          work(begin, end);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    for (auto& t : workers) t.join();
    for (const auto& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }
  }

  PermutationReport report;
  report.learner = learner;
  report.experiment = experiment;
  report.permutations = count;
  report.best_mistakes = best_mistakes(mistake_profile(cls, stream.base())).count;

  double total = 0.0;
  double sampled_total = 0.0;
  for (const auto& r : results) {
    total += r.expected;
    sampled_total += r.sampled_mean;
    report.max_mistakes = std::max(report.max_mistakes, r.expected);
    report.max_realized_mistakes = std::max(report.max_realized_mistakes, r.realized_max);
  }
  if (count > 0) {
    report.expected_mistakes = total / static_cast<double>(count);
    if (options.report_sampled_mean) report.sampled_mean_mistakes = sampled_total / static_cast<double>(count);
  }
  report.expected_regret = report.expected_mistakes - static_cast<double>(report.best_mistakes);
  report.verdicts = check_bounds(report, cls);
  return report;
}

PermutationReport evaluate(const LearnerConfig& learner, const ExperimentCase& experiment,
                           const PermutationStream& stream, const EvaluateOptions& options) {
  experiment.validate();
  const auto cls = make_threshold_class(experiment.hypotheses, make_domain(experiment.horizon));
  return evaluate(learner, experiment, cls, stream, options);
}

std::optional<double> realizable_mistake_bound(LearnerKind kind, const HypothesisClass& cls, std::size_t horizon) {
  const std::size_t d = cls.size();
  switch (kind) {
    case LearnerKind::kConsistent:
    case LearnerKind::kWmConsistent:
      return static_cast<double>(d - 1);
    case LearnerKind::kHalving:
    case LearnerKind::kWmHalving:
      return static_cast<double>(std::bit_width(d) - 1);
    case LearnerKind::kSoa:
    case LearnerKind::kWmSoa:
      return static_cast<double>(class_ldim(cls));
    case LearnerKind::kWm:
      (void)horizon;
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<double> agnostic_regret_bound(LearnerKind kind, const HypothesisClass& cls, std::size_t horizon) {
  const std::size_t d = cls.size();
  const double t = static_cast<double>(horizon);
  double offset = 0.0;
  switch (kind) {
    case LearnerKind::kWm:
      return regret_term(d, t);
    case LearnerKind::kWmConsistent:
      offset = static_cast<double>(d);
      break;
    case LearnerKind::kWmHalving:
      offset = std::log2(static_cast<double>(d));
      break;
    case LearnerKind::kWmSoa:
      offset = static_cast<double>(class_ldim(cls));
      break;
    default:
      return std::nullopt;
  }
  return offset + regret_term(d, t - offset);
}

std::vector<BoundVerdict> check_bounds(const PermutationReport& report, const HypothesisClass& cls) {
  std::vector<BoundVerdict> verdicts;
  const auto kind = report.learner.kind;
  const std::size_t horizon = report.experiment.horizon;
  const double best = static_cast<double>(report.best_mistakes);

  if (report.experiment.kind == CaseKind::kRealizable) {
    if (auto bound = realizable_mistake_bound(kind, cls, horizon)) {
      verdicts.push_back(make_verdict("mistake_bound", *bound, report.max_mistakes));
      // Any tie-breaking keeps the version-space argument intact, so the
      // realized draws obey the same bound.
      verdicts.push_back(
          make_verdict("realized_mistake_bound", *bound, static_cast<double>(report.max_realized_mistakes)));
    } else if (auto regret = agnostic_regret_bound(kind, cls, horizon)) {
      verdicts.push_back(make_verdict("expected_mistake_bound", *regret, report.expected_mistakes - best));
      verdicts.push_back(make_verdict("permutation_mistake_bound", *regret, report.max_mistakes - best));
    }
  } else if (auto regret = agnostic_regret_bound(kind, cls, horizon)) {
    verdicts.push_back(make_verdict("expected_regret_bound", *regret, report.expected_regret));
    verdicts.push_back(make_verdict("permutation_regret_bound", *regret, report.max_mistakes - best));
  }
  return verdicts;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  if (name == "markdown") return ReportFormat::kMarkdown;
  throw UnsupportedFormat("unsupported report format '" + std::string(name) + "'");
}

namespace {

std::string verdicts_cell(const std::vector<BoundVerdict>& verdicts) {
  std::string out;
  for (const auto& v : verdicts) {
    if (!out.empty()) out += ';';
    out += v.name + ':' + fixed(v.observed) + "<=" + fixed(v.bound) + ':' + (v.pass ? "pass" : "FAIL");
  }
  return out.empty() ? "none" : out;
}

std::string emit_csv(const std::vector<PermutationReport>& reports) {
  std::string out =
      "case,learner,eta,ties,T,permutations,H,M_best,expected_mistakes,max_mistakes,max_realized_mistakes,"
      "sampled_mean_mistakes,expected_regret,bounds\n";
  for (const auto& r : reports) {
    out += std::string(to_string(r.experiment.kind)) + ',' + std::string(to_string(r.learner.kind)) + ',' +
           std::string(to_string(r.learner.eta)) + ',' + std::string(to_string(r.learner.ties)) + ',' +
           std::to_string(r.experiment.horizon) + ',' + std::to_string(r.permutations) + ',' +
           std::to_string(r.experiment.hypotheses) + ',' + std::to_string(r.best_mistakes) + ',' +
           fixed(r.expected_mistakes) + ',' + fixed(r.max_mistakes) + ',' + std::to_string(r.max_realized_mistakes) +
           ',' + (r.sampled_mean_mistakes ? fixed(*r.sampled_mean_mistakes) : std::string("na")) + ',' +
           fixed(r.expected_regret) + ',' + verdicts_cell(r.verdicts) + '\n';
  }
  return out;
}

nlohmann::json report_to_json(const PermutationReport& r) {
  nlohmann::json j;
  j["learner"] = to_string(r.learner.kind);
  j["eta"] = to_string(r.learner.eta);
  j["ties"] = to_string(r.learner.ties);
  j["case"] = to_string(r.experiment.kind);
  j["T"] = r.experiment.horizon;
  j["d"] = r.experiment.hypotheses;
  j["permutations"] = r.permutations;
  j["expected_mistakes"] = r.expected_mistakes;
  j["max_mistakes"] = r.max_mistakes;
  j["max_realized_mistakes"] = r.max_realized_mistakes;
  j["sampled_mean_mistakes"] = r.sampled_mean_mistakes ? nlohmann::json(*r.sampled_mean_mistakes) : nlohmann::json();
  j["best_mistakes"] = r.best_mistakes;
  j["expected_regret"] = r.expected_regret;
  j["bounds"] = nlohmann::json::array();
  for (const auto& v : r.verdicts) {
    j["bounds"].push_back({{"name", v.name}, {"bound", v.bound}, {"observed", v.observed}, {"pass", v.pass}});
  }
  return j;
}

// Rows grouped by case in the order first seen; each learner contributes an
// expected and a max column, plus a Diff column for learner pairs.
std::string emit_markdown(const std::vector<PermutationReport>& reports) {
  std::vector<std::pair<std::string, std::vector<const PermutationReport*>>> groups;
  for (const auto& r : reports) {
    const std::string key = std::string(to_string(r.experiment.kind)) + '/' + std::to_string(r.experiment.horizon) +
                            '/' + std::to_string(r.experiment.hypotheses) + '/' + std::to_string(r.permutations);
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == key; });
    if (it == groups.end()) {
      groups.push_back({key, {}});
      it = std::prev(groups.end());
    }
    it->second.push_back(&r);
  }

  std::string out;
  for (const auto& [key, rows] : groups) {
    const bool realizable = rows.front()->experiment.kind == CaseKind::kRealizable;
    const bool diff = rows.size() == 2;
    std::string header = "| T | Permutations | \\|H\\| | M(h*) |";
    std::string rule = "|---|---|---|---|";
    std::string line;
    const auto& first = *rows.front();
    line += "| " + std::to_string(first.experiment.horizon) + " | " + std::to_string(first.permutations) + " | " +
            std::to_string(first.experiment.hypotheses) + " | " + std::to_string(first.best_mistakes) + " |";
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto& r = *rows[k];
      const std::string name(to_string(r.learner.kind));
      const std::string tag = diff ? " (" + std::to_string(k + 1) + ")" : "";
      if (realizable) {
        header += " " + name + " expected mistakes | " + name + " max mistakes" + tag + " | " + name +
                  " max expected |";
        rule += "---|---|---|";
        line += " " + fixed(r.expected_mistakes, 2) + " | " + std::to_string(r.max_realized_mistakes) + " | " +
                fixed(r.max_mistakes, 2) + " |";
      } else {
        header += " " + name + " expected regret" + tag + " |";
        rule += "---|";
        line += " " + fixed(r.expected_regret, 2) + " |";
      }
    }
    if (diff) {
      header += " Diff (1) - (2) |";
      rule += "---|";
      if (realizable) {
        line += " " +
                std::to_string(static_cast<std::int64_t>(rows[0]->max_realized_mistakes) -
                               static_cast<std::int64_t>(rows[1]->max_realized_mistakes)) +
                " |";
      } else {
        line += " " + fixed(rows[0]->expected_regret - rows[1]->expected_regret, 2) + " |";
      }
    }
    out += "**" + std::string(realizable ? "Realizable" : "Unrealizable") + " case**\n\n";
    out += header + '\n' + rule + '\n' + line + "\n\n";
  }
  return out;
}

}  // namespace

std::string emit_report(const std::vector<PermutationReport>& reports, ReportFormat format) {
  if (reports.empty()) throw ConfigError("no reports to emit");
  switch (format) {
    case ReportFormat::kCsv:
      return emit_csv(reports);
    case ReportFormat::kJson: {
      nlohmann::json doc;
      doc["schema"] = 1;
      doc["reports"] = nlohmann::json::array();
      for (const auto& r : reports) doc["reports"].push_back(report_to_json(r));
      return doc.dump(2) + '\n';
    }
    case ReportFormat::kMarkdown:
      return emit_markdown(reports);
  }
  throw UnsupportedFormat("unsupported report format");
}

std::string emit_report(const std::vector<PermutationReport>& reports, std::string_view format) {
  return emit_report(reports, parse_report_format(format));
}

std::vector<PermutationReport> reports_from_json(const std::string& text) {
  std::vector<PermutationReport> out;
  try {
    const auto doc = nlohmann::json::parse(text);
    if (doc.at("schema").get<int>() != 1) throw UnsupportedFormat("unsupported report schema");
    for (const auto& j : doc.at("reports")) {
      PermutationReport r;
      r.learner.kind = parse_learner_kind(j.at("learner").get<std::string>());
      r.learner.eta = parse_eta_variant(j.at("eta").get<std::string>());
      r.learner.ties = parse_tie_policy(j.at("ties").get<std::string>());
      r.experiment.kind = parse_case_kind(j.at("case").get<std::string>());
      r.experiment.horizon = j.at("T").get<std::size_t>();
      r.experiment.hypotheses = j.at("d").get<std::size_t>();
      r.permutations = j.at("permutations").get<std::size_t>();
      r.expected_mistakes = j.at("expected_mistakes").get<double>();
      r.max_mistakes = j.at("max_mistakes").get<double>();
      r.max_realized_mistakes = j.at("max_realized_mistakes").get<std::uint64_t>();
      if (!j.at("sampled_mean_mistakes").is_null()) {
        r.sampled_mean_mistakes = j.at("sampled_mean_mistakes").get<double>();
      }
      r.best_mistakes = j.at("best_mistakes").get<std::uint64_t>();
      r.expected_regret = j.at("expected_regret").get<double>();
      for (const auto& v : j.at("bounds")) {
        r.verdicts.push_back({v.at("name").get<std::string>(), v.at("bound").get<double>(),
                              v.at("observed").get<double>(), v.at("pass").get<bool>()});
      }
      out.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw UnsupportedFormat(std::string("malformed report JSON: ") + e.what());
  }
  return out;
}

}  // namespace regretlab
