// Command line harness: trace ingestion, ranking, online selection, forest
// evaluation, drift pipelines, multi-start scenarios and synthetic traces.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "osfs/drift.hpp"
#include "osfs/forest.hpp"
#include "osfs/preprocess.hpp"
#include "osfs/ranking.hpp"
#include "osfs/scenario.hpp"
#include "osfs/search.hpp"
#include "osfs/synth.hpp"
#include "osfs/trace_io.hpp"
#include "osfs/types.hpp"

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// JSON config support for CLI11: a flat object maps to top-level flags,
// nested objects to subcommand sections, arrays to repeated values.
class JsonConfig : public CLI::Config {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    input >> j;
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    json j;
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      if (!opt->get_default_str().empty()) {
        j[opt->get_lnames().front()] = opt->get_default_str();
      } else if (default_also) {
        j[opt->get_lnames().front()] = "";
      }
    }
    return j.dump(2);
  }

 private:
  static void collect(const json& j, std::vector<std::string> parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto nested = parents;
        nested.push_back(key);
        collect(value, nested, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }

  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }
};

// ---------------------------------------------------------------------------
// shared flag bundles

const std::map<std::string, osfs::RankerKind> kRankerNames{
    {"arr", osfs::RankerKind::kArr}, {"ls", osfs::RankerKind::kLs}};
const std::map<std::string, osfs::StabilityCondition> kConditionNames{
    {"similarity", osfs::StabilityCondition::kSimilarity},
    {"stability", osfs::StabilityCondition::kFrequency}};
const std::map<std::string, osfs::SearchPolicy> kPolicyNames{
    {"k-small", osfs::SearchPolicy::kKSmall}, {"t-small", osfs::SearchPolicy::kTSmall}};
const std::map<std::string, osfs::AdaptationMode> kModeNames{
    {"offline_train", osfs::AdaptationMode::kOfflineTrain},
    {"online_train", osfs::AdaptationMode::kOnlineTrain},
    {"retrain", osfs::AdaptationMode::kRetrain},
    {"retrain_recompute", osfs::AdaptationMode::kRetrainRecompute}};
const std::map<std::string, osfs::ReportFormat> kFormatNames{
    {"csv", osfs::ReportFormat::kDelimited}, {"json", osfs::ReportFormat::kJson}};

struct TraceArgs {
  std::string trace;
  std::string target;

  void attach(CLI::App* cmd) {
    cmd->add_option("--trace", trace, "trace file (delimited, header row)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--target", target, "name of the target column")->required();
  }
  osfs::TraceWindow load() const { return osfs::load_trace(trace, target); }
};

struct SearchArgs {
  osfs::RankerKind ranker = osfs::RankerKind::kArr;
  osfs::StabilityCondition condition = osfs::StabilityCondition::kSimilarity;
  osfs::SearchPolicy policy = osfs::SearchPolicy::kKSmall;
  int ls_neighbors = 5;
  double ls_width = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--ranker", ranker, "feature ranker")
        ->transform(CLI::CheckedTransformer(kRankerNames, CLI::ignore_case));
    cmd->add_option("--condition", condition, "stability condition")
        ->transform(CLI::CheckedTransformer(kConditionNames, CLI::ignore_case));
    cmd->add_option("--policy", policy, "grid walk order")
        ->transform(CLI::CheckedTransformer(kPolicyNames, CLI::ignore_case));
    cmd->add_option("--ls-neighbors", ls_neighbors, "kNN graph size for the LS ranker");
    cmd->add_option("--ls-width", ls_width, "heat kernel width for the LS ranker");
  }
  osfs::OsfsConfig config() const {
    auto cfg = osfs::OsfsConfig::make(ranker, condition, policy);
    cfg.ranker.ls_neighbors = ls_neighbors;
    cfg.ranker.ls_kernel_width = ls_width;
    return cfg;
  }
};

std::vector<std::string> split_names(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

json feature_set_json(const osfs::SelectedFeatureSet& set) {
  return json{{"k", set.k}, {"t", set.t}, {"members", set.members}};
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// subcommands

void add_synth(CLI::App& app) {
  auto* cmd = app.add_subcommand("synth", "generate a synthetic labeled trace");
  auto spec = std::make_shared<osfs::SynthSpec>();
  auto out = std::make_shared<std::string>();
  auto drift_at = std::make_shared<std::int64_t>(-1);
  cmd->add_option("--out", *out, "output trace path")->required();
  cmd->add_option("--noise", spec->n_noise, "number of noise features");
  cmd->add_option("--informative", spec->n_informative, "number of informative features");
  cmd->add_option("--t-len", spec->t_len, "trace length");
  cmd->add_option("--target-noise", spec->target_noise, "target noise sigma");
  cmd->add_flag("--latent-copies", spec->latent_copies,
                "informative features share one latent signal");
  cmd->add_option("--drift-at", *drift_at, "informative-feature swap index");
  cmd->add_option("--seed", spec->seed, "generator seed");
  cmd->callback([spec, out, drift_at]() {
    if (*drift_at > 0) spec->drift_at = *drift_at;
    const osfs::SynthTrace trace = osfs::synth_trace(*spec);
    osfs::write_trace(trace.window, *out);
    std::cout << "wrote " << *out << ": " << trace.window.catalog().size() << " features x "
              << trace.window.length() << " samples\n";
    std::cout << "informative:";
    for (const auto& n : trace.informative) std::cout << ' ' << n;
    std::cout << '\n';
    if (!trace.post_drift_informative.empty()) {
      std::cout << "post-drift informative:";
      for (const auto& n : trace.post_drift_informative) std::cout << ' ' << n;
      std::cout << '\n';
    }
  });
}

void add_preprocess(CLI::App& app) {
  auto* cmd = app.add_subcommand("preprocess", "clean, scale and variance-filter a trace");
  auto args = std::make_shared<TraceArgs>();
  args->attach(cmd);
  auto out = std::make_shared<std::string>();
  auto opts = std::make_shared<osfs::PreprocessOptions>();
  cmd->add_option("--out", *out, "output trace path")->required();
  cmd->add_option("--max-missing", opts->max_missing_frac,
                  "drop features with a higher missing fraction");
  cmd->add_option("--variance-threshold", opts->variance_threshold,
                  "drop features with lower post-scaling variance");
  cmd->callback([args, out, opts]() {
    const osfs::TraceWindow window = args->load();
    auto [processed, report] = osfs::run_preprocess(window, *opts);
    osfs::write_trace(processed, *out, args->target);
    std::cout << "kept " << report.kept << "/" << window.catalog().size() << " features ("
              << report.dropped_missing.size() << " too sparse, "
              << report.dropped_low_variance.size() << " low variance), interpolated "
              << report.interpolated_cells << " cells\n";
    std::cout << "wrote " << *out << '\n';
  });
}

void add_rank(CLI::App& app) {
  auto* cmd = app.add_subcommand("rank", "rank all features over a prefix of the trace");
  auto args = std::make_shared<TraceArgs>();
  auto search = std::make_shared<SearchArgs>();
  args->attach(cmd);
  search->attach(cmd);
  auto prefix = std::make_shared<std::int64_t>(0);
  auto top = std::make_shared<int>(20);
  auto out = std::make_shared<std::string>();
  cmd->add_option("--t", *prefix, "prefix length (default: whole trace)");
  cmd->add_option("--top", *top, "how many entries to print");
  cmd->add_option("--out", *out, "write the full ranking as JSON");
  cmd->callback([args, search, prefix, top, out]() {
    osfs::TraceWindow window = args->load();
    if (*prefix > 0) window = window.prefix(*prefix);
    osfs::RankerConfig rc = search->config().ranker;
    const osfs::RankedList ranked = osfs::rank(window, rc);
    const int shown = std::min<int>(*top, static_cast<int>(ranked.order.size()));
    for (int i = 0; i < shown; ++i) {
      const auto idx = window.catalog().index_of(ranked.order[static_cast<std::size_t>(i)]);
      std::cout << i + 1 << '\t' << ranked.order[static_cast<std::size_t>(i)] << '\t'
                << ranked.scores[*idx] << '\n';
    }
    if (!out->empty()) {
      write_json(json{{"t", ranked.t}, {"order", ranked.order}, {"scores", ranked.scores}}, *out);
    }
  });
}

void add_select(CLI::App& app) {
  auto* cmd = app.add_subcommand("select", "run the online stable feature-set search");
  auto args = std::make_shared<TraceArgs>();
  auto search = std::make_shared<SearchArgs>();
  args->attach(cmd);
  search->attach(cmd);
  auto start = std::make_shared<std::int64_t>(1);
  auto out = std::make_shared<std::string>();
  cmd->add_option("--start", *start, "stream offset to start from (1-based)");
  cmd->add_option("--out", *out, "write the selection as JSON");
  cmd->callback([args, search, start, out]() {
    const osfs::TraceWindow window = args->load();
    osfs::WindowSource source(window, *start);
    const osfs::OsfsResult result = osfs::osfs_run(source, search->config());
    std::cout << "k=" << result.k << " t_k=" << result.t_k << " consumed="
              << result.samples_consumed << (result.exhausted_grid ? " (grid exhausted)" : "")
              << '\n';
    for (const auto& name : result.feature_set.members) std::cout << name << '\n';
    if (!out->empty()) {
      json j = feature_set_json(result.feature_set);
      j["t_k"] = result.t_k;
      j["samples_consumed"] = result.samples_consumed;
      j["exhausted_grid"] = result.exhausted_grid;
      write_json(j, *out);
    }
  });
}

void add_evaluate(CLI::App& app) {
  auto* cmd = app.add_subcommand("evaluate", "forest NMAE for a feature set");
  auto args = std::make_shared<TraceArgs>();
  args->attach(cmd);
  auto features = std::make_shared<std::string>();
  auto features_file = std::make_shared<std::string>();
  auto mode = std::make_shared<std::string>("offline");
  auto t_train = std::make_shared<std::int64_t>(0);
  auto seed = std::make_shared<std::uint64_t>(1);
  auto trees = std::make_shared<int>(100);
  cmd->add_option("--features", *features, "comma separated feature names");
  cmd->add_option("--features-file", *features_file, "JSON file from `select --out`")
      ->check(CLI::ExistingFile);
  cmd->add_option("--mode", *mode, "offline (70/30 shuffle) or online (prefix train)")
      ->check(CLI::IsMember({"offline", "online"}));
  cmd->add_option("--t-train", *t_train, "training prefix length for online mode");
  cmd->add_option("--seed", *seed, "evaluation seed");
  cmd->add_option("--trees", *trees, "forest size");
  cmd->callback([args, features, features_file, mode, t_train, seed, trees]() {
    const osfs::TraceWindow window = args->load();
    std::vector<std::string> names;
    if (!features_file->empty()) {
      std::ifstream in(*features_file);
      json j;
      in >> j;
      names = j.at("members").get<std::vector<std::string>>();
    } else if (!features->empty()) {
      names = split_names(*features);
    } else {
      throw CLI::ValidationError("evaluate", "need --features or --features-file");
    }
    const osfs::SelectedFeatureSet set = osfs::make_feature_set(names, window.length());
    osfs::ForestConfig fc;
    fc.tree_count = *trees;
    const osfs::EvaluationReport rep =
        *mode == "online" ? osfs::online_eval(window, set, *t_train, *seed, fc)
                          : osfs::offline_eval(window, set, *seed, fc);
    std::cout << "nmae=" << rep.nmae << " train=" << rep.train_count
              << " test=" << rep.test_count << '\n';
  });
}

void add_drift(CLI::App& app) {
  auto* cmd = app.add_subcommand("drift", "run the drift detection / adaptation pipeline");
  auto args = std::make_shared<TraceArgs>();
  auto search = std::make_shared<SearchArgs>();
  args->attach(cmd);
  search->attach(cmd);
  auto cfg = std::make_shared<osfs::DriftConfig>();
  auto out = std::make_shared<std::string>();
  cmd->add_option("--mode", cfg->mode, "adaptation mode")
      ->transform(CLI::CheckedTransformer(kModeNames, CLI::ignore_case));
  cmd->add_option("--n-init", cfg->n_init, "initialization window length");
  cmd->add_option("--delta", cfg->ph.delta, "Page-Hinkley drift parameter");
  cmd->add_option("--lambda", cfg->ph.lambda, "Page-Hinkley alarm threshold");
  cmd->add_option("--min-instances", cfg->ph.min_instances, "Page-Hinkley warm-up count");
  cmd->add_option("--trees", cfg->forest.tree_count, "forest size");
  cmd->add_option("--seed", cfg->seed, "pipeline seed");
  cmd->add_option("--out", *out, "write the timeline as JSON");
  cmd->callback([args, search, cfg, out]() {
    const osfs::TraceWindow window = args->load();
    cfg->osfs = search->config();
    osfs::WindowSource source(window);
    const osfs::DriftTimeline timeline = osfs::drift_pipeline(source, *cfg);
    std::cout << "initial feature set: k=" << timeline.initial_feature_set.k << " ready at t="
              << timeline.init_ready_at << '\n';
    for (const auto& e : timeline.events) {
      std::cout << "drift at t=" << e.t_detect << ", new set (k=" << e.feature_set.k
                << ") ready at t=" << e.t_featureset_ready << ", model #" << e.model_id << '\n';
    }
    for (const auto& s : timeline.segments) {
      std::cout << "segment [" << s.t_begin << ", " << s.t_end << "] nmae=" << s.nmae << " ("
                << s.count << " samples)\n";
    }
    std::cout << "overall nmae=" << timeline.overall_nmae
              << (timeline.truncated ? " (truncated)" : "") << '\n';
    if (!out->empty()) {
      json j;
      j["initial_feature_set"] = feature_set_json(timeline.initial_feature_set);
      j["init_ready_at"] = timeline.init_ready_at;
      j["truncated"] = timeline.truncated;
      j["overall_nmae"] = timeline.overall_nmae;
      j["events"] = json::array();
      for (const auto& e : timeline.events) {
        j["events"].push_back(json{{"t_detect", e.t_detect},
                                   {"t_featureset_ready", e.t_featureset_ready},
                                   {"feature_set", feature_set_json(e.feature_set)},
                                   {"model_id", e.model_id}});
      }
      j["segments"] = json::array();
      for (const auto& s : timeline.segments) {
        j["segments"].push_back(json{{"t_begin", s.t_begin},
                                     {"t_end", s.t_end},
                                     {"count", s.count},
                                     {"nmae", s.nmae}});
      }
      write_json(j, *out);
    }
  });
}

void add_scenario(CLI::App& app) {
  auto* cmd = app.add_subcommand("scenario", "multi-start-point evaluation run");
  auto args = std::make_shared<TraceArgs>();
  auto search = std::make_shared<SearchArgs>();
  args->attach(cmd);
  search->attach(cmd);
  auto scenario = std::make_shared<osfs::Scenario>();
  auto starts = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto format = std::make_shared<osfs::ReportFormat>(osfs::ReportFormat::kDelimited);
  cmd->add_option("--starts", *starts, "comma separated start points (default: 1 + 9 draws)");
  cmd->add_option("--label", scenario->dataset, "dataset label for the report");
  cmd->add_option("--seed", scenario->seed, "scenario master seed");
  cmd->add_option("--trees", scenario->forest.tree_count, "forest size");
  cmd->add_option("--format", *format, "report format")
      ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));
  cmd->add_option("--out", *out, "report output path");
  cmd->callback([args, search, scenario, starts, out, format]() {
    const osfs::TraceWindow window = args->load();
    scenario->ranker = search->ranker;
    scenario->condition = search->condition;
    scenario->policy = search->policy;
    if (scenario->dataset.empty()) {
      scenario->dataset = std::filesystem::path(args->trace).stem().string();
    }
    if (!starts->empty()) {
      scenario->start_points.clear();
      for (const auto& s : split_names(*starts)) scenario->start_points.push_back(std::stoll(s));
    }
    const osfs::ScenarioReport report = osfs::run_scenario(window, *scenario);
    osfs::emit_report(report, osfs::ReportFormat::kDelimited, std::cout);
    if (!out->empty()) {
      osfs::emit_report(report, *format, std::filesystem::path(*out));
      std::cout << "wrote " << *out << '\n';
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online stable feature-set selection over telemetry streams"};
  app.require_subcommand(1);
  app.set_config("--config", "", "JSON config file mirroring the flag set");
  app.config_formatter(std::make_shared<JsonConfig>());

  add_synth(app);
  add_preprocess(app);
  add_rank(app);
  add_select(app);
  add_evaluate(app);
  add_drift(app);
  add_scenario(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
