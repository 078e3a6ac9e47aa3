#include "mbofs/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "mbofs/error.hpp"

namespace mbofs {

Method parse_method(std::string_view name) {
  if (name == "ig") return Method::Ig;
  if (name == "mbo") return Method::Mbo;
  if (name == "pso") return Method::Pso;
  if (name == "all") return Method::All;
  throw Error("unknown method '" + std::string(name) + "' (expected ig, mbo, pso or all)");
}

std::string to_string(Method method) {
  switch (method) {
    case Method::Ig: return "ig";
    case Method::Mbo: return "mbo";
    case Method::Pso: return "pso";
    case Method::All: return "all";
  }
  return "all";
}

EvalClassifier parse_eval_classifier(std::string_view name) {
  if (name == "nb") return EvalClassifier::Nb;
  if (name == "dt") return EvalClassifier::Dt;
  if (name == "best" || name == "best-of") return EvalClassifier::Best;
  throw Error("unknown evaluation classifier '" + std::string(name) + "' (expected nb, dt or best)");
}

std::string to_string(EvalClassifier c) {
  switch (c) {
    case EvalClassifier::Nb: return "nb";
    case EvalClassifier::Dt: return "dt";
    case EvalClassifier::Best: return "best";
  }
  return "best";
}

void ExperimentConfig::validate() const {
  if (corpus.empty()) throw Error("config: no corpus path given");
  if (folds < 2) throw Error("config: folds must be >= 2");
  if (!(budget_seconds > 0.0)) throw Error("config: budget_seconds must be > 0");
  if (ig_cap < 1) throw Error("config: ig_cap must be >= 1");
  if (threads < 1) throw Error("config: threads must be >= 1");
  if (halt_after < 0) throw Error("config: halt_after must be >= 0");
  mbo.validate();
  pso.validate();
}

std::string ExperimentConfig::display_name() const {
  if (!name.empty()) return name;
  auto stem = corpus.filename().string();
  if (corpus.has_extension()) stem = corpus.stem().string();
  return stem.empty() ? std::string("corpus") : stem;
}

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"corpus", "corpus path"},
      {"format", "corpus format: tsv | dirs"},
      {"stopwords", "stopword file, one token per line"},
      {"name", "corpus name used in table reports"},
      {"method", "ig | mbo | pso | all"},
      {"classifier", "evaluation classifier: nb | dt | best"},
      {"fitness_classifier", "internal fitness classifier: nb | dt"},
      {"ig_cap", "maximum features kept by the information gain prefilter"},
      {"folds", "cross-validation folds"},
      {"seed", "master seed"},
      {"budget_seconds", "wall-clock budget per engine"},
      {"threads", "fitness evaluation threads"},
      {"alpha", "naive bayes smoothing"},
      {"dt_max_depth", "decision tree depth limit"},
      {"dt_min_split", "decision tree minimum rows to split"},
      {"flock_size", "MBO flock size (odd)"},
      {"neighbors", "MBO neighbors per bird"},
      {"change_fraction", "base fraction of M' flipped per neighbor"},
      {"pso_swarm", "PSO swarm size"},
      {"pso_iterations", "PSO iteration cap"},
      {"pso_w_start", "PSO initial inertia"},
      {"pso_w_end", "PSO final inertia"},
      {"pso_c1", "PSO cognitive coefficient"},
      {"pso_c2", "PSO social coefficient"},
      {"pso_vmax", "PSO velocity clamp"},
      {"out", "output directory"},
      {"halt_after", "stop engines at this tour/iteration, leaving a checkpoint (0 = off)"},
  };
  return keys;
}

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw Error("config: invalid value '" + std::string(value) + "' for " + std::string(key));
  return out;
}

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, s.find_last_not_of(ws) - b + 1));
}

std::string format_double(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

}  // namespace

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value) {
  if (key == "corpus") c.corpus = std::string(value);
  else if (key == "format") c.format = parse_corpus_format(value);
  else if (key == "stopwords") c.stopwords = value.empty() ? std::nullopt : std::optional<std::filesystem::path>(std::string(value));
  else if (key == "name") c.name = std::string(value);
  else if (key == "method") c.method = parse_method(value);
  else if (key == "classifier") c.classifier = parse_eval_classifier(value);
  else if (key == "fitness_classifier") c.fitness_classifier = parse_classifier(value);
  else if (key == "ig_cap") c.ig_cap = parse_number<std::size_t>(key, value);
  else if (key == "folds") c.folds = parse_number<int>(key, value);
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "budget_seconds") c.budget_seconds = parse_number<double>(key, value);
  else if (key == "threads") c.threads = parse_number<unsigned>(key, value);
  else if (key == "alpha") c.classifier_params.alpha = parse_number<double>(key, value);
  else if (key == "dt_max_depth") c.classifier_params.max_depth = parse_number<int>(key, value);
  else if (key == "dt_min_split") c.classifier_params.min_split = parse_number<std::size_t>(key, value);
  else if (key == "flock_size") c.mbo.flock_size = parse_number<int>(key, value);
  else if (key == "neighbors") c.mbo.neighbors = parse_number<int>(key, value);
  else if (key == "change_fraction") c.mbo.schedule.base_fraction = c.pso.schedule.base_fraction = parse_number<double>(key, value);
  else if (key == "pso_swarm") c.pso.swarm_size = parse_number<int>(key, value);
  else if (key == "pso_iterations") c.pso.max_iterations = parse_number<int>(key, value);
  else if (key == "pso_w_start") c.pso.w_start = parse_number<double>(key, value);
  else if (key == "pso_w_end") c.pso.w_end = parse_number<double>(key, value);
  else if (key == "pso_c1") c.pso.c1 = parse_number<double>(key, value);
  else if (key == "pso_c2") c.pso.c2 = parse_number<double>(key, value);
  else if (key == "pso_vmax") c.pso.v_max = parse_number<double>(key, value);
  else if (key == "out") c.out_dir = std::string(value);
  else if (key == "halt_after") c.halt_after = parse_number<int>(key, value);
  else throw Error("config: unknown key '" + std::string(key) + "'");
}

void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw Error("config " + path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    apply_setting(config, trim(std::string_view(text).substr(0, eq)), trim(std::string_view(text).substr(eq + 1)));
  }
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  ExperimentConfig config;
  apply_config_file(config, path);
  return config;
}

std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& c) {
  auto num = [](auto v) { return std::to_string(v); };
  return {
      {"corpus", c.corpus.string()},
      {"format", to_string(c.format)},
      {"stopwords", c.stopwords ? c.stopwords->string() : std::string()},
      {"name", c.display_name()},
      {"method", to_string(c.method)},
      {"classifier", to_string(c.classifier)},
      {"fitness_classifier", to_string(c.fitness_classifier)},
      {"ig_cap", num(c.ig_cap)},
      {"folds", num(c.folds)},
      {"seed", num(c.seed)},
      {"budget_seconds", format_double(c.budget_seconds)},
      {"threads", num(c.threads)},
      {"alpha", format_double(c.classifier_params.alpha)},
      {"dt_max_depth", num(c.classifier_params.max_depth)},
      {"dt_min_split", num(c.classifier_params.min_split)},
      {"flock_size", num(c.mbo.flock_size)},
      {"neighbors", num(c.mbo.neighbors)},
      {"change_fraction", format_double(c.mbo.schedule.base_fraction)},
      {"pso_swarm", num(c.pso.swarm_size)},
      {"pso_iterations", num(c.pso.max_iterations)},
      {"pso_w_start", format_double(c.pso.w_start)},
      {"pso_w_end", format_double(c.pso.w_end)},
      {"pso_c1", format_double(c.pso.c1)},
      {"pso_c2", format_double(c.pso.c2)},
      {"pso_vmax", format_double(c.pso.v_max)},
  };
}

}  // namespace mbofs
