#include "regretlab/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

namespace regretlab {

namespace {

std::size_t parse_count(const std::string& text, const std::string& what) {
  std::size_t pos = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &pos);
  } catch (const std::logic_error&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size() || text.front() == '-') {
    throw ConfigError("invalid " + what + " count '" + text + "'");
  }
  return static_cast<std::size_t>(value);
}

std::string report_format_name(ReportFormat f) {
  switch (f) {
    case ReportFormat::kCsv:
      return "csv";
    case ReportFormat::kJson:
      return "json";
    case ReportFormat::kMarkdown:
      return "markdown";
  }
  return "csv";
}

std::vector<LearnerKind> parse_learner_list(const std::string& text) {
  std::vector<LearnerKind> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(parse_learner_kind(item));
  }
  if (out.empty()) throw ConfigError("at least one learner is required");
  return out;
}

std::uint64_t parse_seed(const std::string& text) {
  std::size_t pos = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &pos, 0);
  } catch (const std::logic_error&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size() || text.find('-') != std::string::npos) {
    throw ConfigError("invalid seed '" + text + "'");
  }
  return value;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write '" + path + "'");
  file << text;
}

// CLI11 wants argv-style input with the program name first.
void parse_args(CLI::App& app, const std::vector<std::string>& args) {
  std::vector<std::string> reversed;
  if (!args.empty()) reversed.assign(args.rbegin(), args.rend() - 1);
  app.parse(reversed);
}

}  // namespace

PermutationSpec parse_permutation_spec(const std::string& text) {
  if (text == "exhaustive") return {true, 0};
  if (text.rfind("sampled:", 0) == 0) {
    const std::size_t n = parse_count(text.substr(8), "permutation");
    if (n == 0) throw ConfigError("sampled permutation count must be at least 1");
    return {false, n};
  }
  throw ConfigError("invalid --perm '" + text + "' (expected exhaustive or sampled:N)");
}

ModeSpec parse_mode_spec(const std::string& text) {
  if (text == "analytic") return {false, 1};
  if (text.rfind("sampled:", 0) == 0) {
    const std::size_t n = parse_count(text.substr(8), "trial");
    if (n == 0) throw ConfigError("sampled trial count must be at least 1");
    return {true, n};
  }
  throw ConfigError("invalid --mode '" + text + "' (expected analytic or sampled:N)");
}

std::string to_string(const PermutationSpec& spec) {
  return spec.exhaustive ? "exhaustive" : "sampled:" + std::to_string(spec.count);
}

std::string to_string(const ModeSpec& spec) {
  return spec.sampled ? "sampled:" + std::to_string(spec.trials) : "analytic";
}

void ExperimentConfig::validate() const {
  ExperimentCase{case_kind, horizon, hypotheses}.validate();
  if (learners.empty()) throw ConfigError("at least one learner is required");
  if (permutations.exhaustive && horizon > kDefaultFactorialCap) {
    throw ConfigError("exhaustive permutations need T <= " + std::to_string(kDefaultFactorialCap) +
                      "; use --perm sampled:N");
  }
  if (!permutations.exhaustive && permutations.count == 0) throw ConfigError("sampled count must be at least 1");
  if (mode.trials == 0) throw ConfigError("trial count must be at least 1");
  if (jobs == 0) throw ConfigError("--jobs must be at least 1");
  if (case_kind == CaseKind::kUnrealizable) {
    for (auto kind : learners) {
      if (is_baseline(kind)) {
        throw ConfigError("learner '" + std::string(to_string(kind)) + "' is only defined for realizable sequences");
      }
    }
  }
}

std::string config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["case"] = to_string(c.case_kind);
  j["T"] = c.horizon;
  j["d"] = c.hypotheses;
  std::vector<std::string> names;
  for (auto k : c.learners) names.emplace_back(to_string(k));
  j["learners"] = names;
  j["perm"] = to_string(c.permutations);
  j["seed"] = c.seed;
  j["eta_variant"] = to_string(c.eta);
  j["tie"] = to_string(c.ties);
  j["mode"] = to_string(c.mode);
  j["format"] = report_format_name(c.format);
  j["out"] = c.out;
  j["jobs"] = c.jobs;
  j["check_bounds"] = c.check_bounds;
  return j.dump(2) + '\n';
}

ExperimentConfig config_from_json(const std::string& text) {
  ExperimentConfig c;
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "case") {
        c.case_kind = parse_case_kind(value.get<std::string>());
      } else if (key == "T") {
        c.horizon = value.get<std::size_t>();
      } else if (key == "d") {
        c.hypotheses = value.get<std::size_t>();
      } else if (key == "learners") {
        c.learners.clear();
        for (const auto& name : value) c.learners.push_back(parse_learner_kind(name.get<std::string>()));
      } else if (key == "perm") {
        c.permutations = parse_permutation_spec(value.get<std::string>());
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "eta_variant") {
        c.eta = parse_eta_variant(value.get<std::string>());
      } else if (key == "tie") {
        c.ties = parse_tie_policy(value.get<std::string>());
      } else if (key == "mode") {
        c.mode = parse_mode_spec(value.get<std::string>());
      } else if (key == "format") {
        c.format = parse_report_format(value.get<std::string>());
      } else if (key == "out") {
        c.out = value.get<std::string>();
      } else if (key == "jobs") {
        c.jobs = value.get<std::size_t>();
      } else if (key == "check_bounds") {
        c.check_bounds = value.get<bool>();
      } else {
        throw ConfigError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  return c;
}

std::vector<PermutationReport> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const ExperimentCase experiment{config.case_kind, config.horizon, config.hypotheses};
  const auto domain = make_domain(config.horizon);
  const auto cls = make_threshold_class(config.hypotheses, domain);
  auto base = label_sequence(experiment, domain);
  const auto stream = config.permutations.exhaustive
                          ? PermutationStream::exhaustive(std::move(base))
                          : PermutationStream::sampled(std::move(base), config.permutations.count, config.seed);

  EvaluateOptions options;
  options.seed = config.seed;
  options.trials = config.mode.trials;
  options.report_sampled_mean = config.mode.sampled;
  options.jobs = config.jobs;

  std::vector<PermutationReport> reports;
  for (auto kind : config.learners) {
    reports.push_back(evaluate(LearnerConfig{kind, config.eta, config.ties}, experiment, cls, stream, options));
  }
  return reports;
}

bool report_violations(const std::vector<PermutationReport>& reports, std::ostream& err) {
  bool failed = false;
  for (const auto& r : reports) {
    for (const auto& v : r.verdicts) {
      if (v.pass) continue;
      failed = true;
      err << "regretlab: bound violated: " << to_string(r.learner.kind) << ' ' << v.name << " observed "
          << v.observed << " > " << v.bound << '\n';
    }
  }
  return failed;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.size() > 1 && args[1] == "gen") {
    return gen_cmd(std::vector<std::string>(args.begin() + 1, args.end()), out, err);
  }

  CLI::App app{"Online learners under a finite hypothesis class: permutation experiments", "regretlab"};
  std::string config_path, case_name, learners, perm, seed, eta, tie, mode, format, out_path;
  std::size_t horizon = 0, hypotheses = 0, jobs = 0;
  bool check_bounds = true;
  bool dump_config = false;

  app.add_option("--config", config_path, "JSON config file; flags override its values");
  auto* case_opt = app.add_option("--case", case_name, "realizable | unrealizable");
  auto* t_opt = app.add_option("--T", horizon, "sequence length");
  auto* d_opt = app.add_option("--d", hypotheses, "number of threshold hypotheses");
  auto* learners_opt = app.add_option("--learners", learners, "comma list of learners");
  auto* perm_opt = app.add_option("--perm", perm, "exhaustive | sampled:N");
  auto* seed_opt = app.add_option("--seed", seed, "64-bit seed (fallback: REGRETLAB_SEED)");
  auto* eta_opt = app.add_option("--eta-variant", eta, "sqrt8 | sqrt2");
  auto* tie_opt = app.add_option("--tie", tie, "one | coin (tie rule of Halving and SOA)");
  auto* mode_opt = app.add_option("--mode", mode, "analytic | sampled:N");
  auto* format_opt = app.add_option("--format", format, "csv | json | markdown");
  auto* out_opt = app.add_option("--out", out_path, "output path (default: stdout)");
  auto* jobs_opt = app.add_option("--jobs", jobs, "worker threads");
  auto* check_opt = app.add_flag("--check-bounds,!--no-check-bounds", check_bounds, "fail with exit 2 on bound violations");
  app.add_flag("--dump-config", dump_config, "print the resolved config as JSON and exit");

  try {
    parse_args(app, args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "regretlab: " << e.what() << '\n';
    return 1;
  }

  try {
    ExperimentConfig config;
    nlohmann::json file_keys = nlohmann::json::object();
    if (!config_path.empty()) {
      const std::string text = read_file(config_path);
      config = config_from_json(text);
      file_keys = nlohmann::json::parse(text);
    }
    const bool seed_set = file_keys.contains("seed");
    bool d_set = file_keys.contains("d");
    if (case_opt->count()) config.case_kind = parse_case_kind(case_name);
    if (t_opt->count()) config.horizon = horizon;
    if (d_opt->count()) {
      config.hypotheses = hypotheses;
      d_set = true;
    }
    if (!d_set) config.hypotheses = std::max<std::size_t>(1, config.horizon / 2);
    if (learners_opt->count()) config.learners = parse_learner_list(learners);
    if (perm_opt->count()) {
      config.permutations = parse_permutation_spec(perm);
    } else if (!file_keys.contains("perm")) {
      config.permutations = config.horizon <= kDefaultFactorialCap ? PermutationSpec{true, 0} : PermutationSpec{false, 100};
    }
    if (seed_opt->count()) {
      config.seed = parse_seed(seed);
    } else if (!seed_set) {
      if (const char* env = std::getenv("REGRETLAB_SEED"); env != nullptr && *env != '\0') config.seed = parse_seed(env);
    }
    if (eta_opt->count()) config.eta = parse_eta_variant(eta);
    if (tie_opt->count()) config.ties = parse_tie_policy(tie);
    if (mode_opt->count()) config.mode = parse_mode_spec(mode);
    if (format_opt->count()) config.format = parse_report_format(format);
    if (out_opt->count()) config.out = out_path;
    if (jobs_opt->count()) config.jobs = jobs;
    if (check_opt->count()) config.check_bounds = check_bounds;

    config.validate();
    if (dump_config) {
      out << config_to_json(config);
      return 0;
    }

    const auto reports = run_experiment(config);
    write_output(config.out, emit_report(reports, config.format), out);

    if (!config.check_bounds) return 0;
    return report_violations(reports, err) ? 2 : 0;
  } catch (const Error& e) {
    err << "regretlab: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "regretlab: malformed config: " << e.what() << '\n';
    return 1;
  }
}

int gen_cmd(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dump the generated hypothesis class and labeled sequence", "regretlab gen"};
  std::string case_name = "realizable";
  std::string emit = "sequence";
  std::string out_dir;
  std::size_t horizon = 8;
  std::size_t hypotheses = 0;
  app.add_option("--case", case_name, "realizable | unrealizable");
  app.add_option("--T", horizon, "sequence length");
  auto* d_opt = app.add_option("--d", hypotheses, "number of threshold hypotheses (default T/2)");
  app.add_option("--emit", emit, "sequence | class (what goes to stdout)");
  app.add_option("--out-dir", out_dir, "write class.json and sequence.csv here instead");

  try {
    parse_args(app, args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "regretlab gen: " << e.what() << '\n';
    return 1;
  }

  try {
    if (!d_opt->count()) hypotheses = std::max<std::size_t>(1, horizon / 2);
    const ExperimentCase experiment{parse_case_kind(case_name), horizon, hypotheses};
    experiment.validate();
    const auto domain = make_domain(horizon);
    const auto cls = make_threshold_class(hypotheses, domain);
    const auto seq = label_sequence(experiment, domain);
    if (!out_dir.empty()) {
      write_output(out_dir + "/class.json", class_to_json(cls) + '\n', out);
      write_output(out_dir + "/sequence.csv", sequence_to_csv(seq), out);
      return 0;
    }
    if (emit == "sequence") {
      out << sequence_to_csv(seq);
    } else if (emit == "class") {
      out << class_to_json(cls) << '\n';
    } else {
      throw ConfigError("invalid --emit '" + emit + "' (expected sequence or class)");
    }
    return 0;
  } catch (const Error& e) {
    err << "regretlab gen: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace regretlab
