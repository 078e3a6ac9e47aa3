#include "mbofs/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "mbofs/error.hpp"

namespace mbofs {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const MethodRow* RunReport::find(std::string_view method) const {
  if (method == "raw") return &raw;
  for (const auto& m : methods)
    if (m.name == method) return &m;
  return nullptr;
}

ReportStyle parse_report_style(std::string_view name) {
  if (name == "table") return ReportStyle::Table;
  if (name == "json") return ReportStyle::Json;
  if (name == "csv") return ReportStyle::Csv;
  throw Error("unknown report style '" + std::string(name) + "' (expected table, json or csv)");
}

std::string method_title(const MethodRow& row, const std::string& fitness_classifier) {
  if (row.name == "raw") return "raw data";
  if (row.name == "ig") return "information gain";
  if (row.name == "mbo") {
    std::string suffix = fitness_classifier;
    std::transform(suffix.begin(), suffix.end(), suffix.begin(), [](unsigned char c) { return std::toupper(c); });
    return "MBO-" + suffix;
  }
  if (row.name == "pso") return "PSO";
  return row.name;
}

namespace {

bool is_dash(const MethodRow& row) { return row.name == "pso" && row.status == "budget"; }

std::string percent(double accuracy) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", accuracy * 100.0);
  return buf;
}

ordered_json row_json(const MethodRow& r) {
  ordered_json j = {{"name", r.name},         {"m_prime", r.m_prime},     {"accuracy", r.accuracy},
                    {"classifier", r.classifier}, {"elapsed_s", r.elapsed_s}, {"status", r.status}};
  if (r.fitness >= 0.0) j["fitness"] = r.fitness;
  return j;
}

template <typename Json>
MethodRow row_from(const Json& j) {
  MethodRow r;
  r.name = j.at("name").template get<std::string>();
  r.m_prime = j.at("m_prime").template get<std::size_t>();
  r.accuracy = j.at("accuracy").template get<double>();
  r.classifier = j.at("classifier").template get<std::string>();
  r.elapsed_s = j.at("elapsed_s").template get<double>();
  r.status = j.at("status").template get<std::string>();
  r.fitness = j.value("fitness", -1.0);
  return r;
}

std::string render_json(const RunReport& r) {
  ordered_json methods = ordered_json::array();
  for (const auto& m : r.methods) methods.push_back(row_json(m));
  ordered_json config = ordered_json::object();
  for (const auto& [k, v] : r.config) config[k] = v;
  ordered_json j = {
      {"corpus",
       {{"name", r.corpus_name},
        {"n_features", r.stats.n_features},
        {"n_instances", r.stats.n_instances},
        {"n_classes", r.stats.n_classes},
        {"avg_words_per_instance", r.stats.avg_words_per_instance},
        {"avg_word_length", r.stats.avg_word_length}}},
      {"raw", row_json(r.raw)},
      {"methods", methods},
      {"seed", r.seed},
      {"fitness_classifier", r.fitness_classifier},
      {"config", config},
      {"notes", r.notes},
  };
  return j.dump(2) + "\n";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string render_csv(const RunReport& r) {
  std::ostringstream out;
  out << "corpus,method,m_prime,accuracy,classifier,elapsed_s,status,fitness\n";
  char buf[64];
  auto line = [&](const MethodRow& m) {
    out << csv_field(r.corpus_name) << ',' << m.name << ',' << m.m_prime << ',';
    std::snprintf(buf, sizeof buf, "%.17g", m.accuracy);
    out << buf << ',' << m.classifier << ',';
    std::snprintf(buf, sizeof buf, "%.3f", m.elapsed_s);
    out << buf << ',' << m.status << ',';
    if (m.fitness >= 0.0) {
      std::snprintf(buf, sizeof buf, "%.17g", m.fitness);
      out << buf;
    }
    out << '\n';
  };
  line(r.raw);
  for (const auto& m : r.methods) line(m);
  return out.str();
}

std::string render_grid(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (width.size() <= c) width.push_back(0);
      width[c] = std::max(width[c], row[c].size());
    }
  std::ostringstream out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c];
      if (c + 1 < row.size()) out << std::string(width[c] - row[c].size() + 2, ' ');
    }
    out << '\n';
  }
  return out.str();
}

std::string render_table(const RunReport& r) {
  std::vector<const MethodRow*> cols{&r.raw};
  for (const auto& m : r.methods) cols.push_back(&m);

  std::vector<std::string> header{"data"};
  for (const auto* m : cols) header.push_back(method_title(*m, r.fitness_classifier));

  // Highest accuracy gets an asterisk; ties share it.
  double best = -1.0;
  for (const auto* m : cols)
    if (!is_dash(*m)) best = std::max(best, std::round(m->accuracy * 1000.0));
  std::vector<std::string> acc{r.corpus_name};
  for (const auto* m : cols) {
    auto cell = table_accuracy_cell(*m);
    if (!is_dash(*m) && std::round(m->accuracy * 1000.0) == best) cell = "*" + cell;
    acc.push_back(cell);
  }
  std::vector<std::string> counts{r.corpus_name};
  for (const auto* m : cols) counts.push_back(is_dash(*m) ? "-" : std::to_string(m->m_prime));

  std::ostringstream out;
  std::string folds = "5";
  for (const auto& [k, v] : r.config)
    if (k == "folds") folds = v;
  out << "Correctly classified percentage (" << folds << "-fold CV, evaluation classifier per column)\n";
  out << render_grid({header, acc}) << '\n';
  out << "Feature counts\n";
  out << render_grid({header, counts});
  bool any_status = false;
  for (const auto* m : cols)
    if (m->status != "complete") {
      if (!any_status) out << '\n';
      any_status = true;
      out << method_title(*m, r.fitness_classifier) << ": " << m->status << ", " << m->classifier << ", ";
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f", m->elapsed_s);
      out << buf << " s\n";
    }
  if (!r.notes.empty()) {
    out << '\n';
    for (const auto& n : r.notes) out << "note: " << n << '\n';
  }
  return out.str();
}

}  // namespace

std::string table_accuracy_cell(const MethodRow& row) { return is_dash(row) ? "-" : percent(row.accuracy); }

std::string render_report(const RunReport& report, ReportStyle style) {
  switch (style) {
    case ReportStyle::Table: return render_table(report);
    case ReportStyle::Json: return render_json(report);
    case ReportStyle::Csv: return render_csv(report);
  }
  return {};
}

RunReport parse_report_json(const std::string& text) {
  try {
    const auto j = ordered_json::parse(text);
    RunReport r;
    const auto& c = j.at("corpus");
    r.corpus_name = c.at("name").get<std::string>();
    r.stats.n_features = c.at("n_features").get<std::size_t>();
    r.stats.n_instances = c.at("n_instances").get<std::size_t>();
    r.stats.n_classes = c.at("n_classes").get<std::size_t>();
    r.stats.avg_words_per_instance = c.at("avg_words_per_instance").get<double>();
    r.stats.avg_word_length = c.at("avg_word_length").get<double>();
    r.raw = row_from(j.at("raw"));
    for (const auto& m : j.at("methods")) r.methods.push_back(row_from(m));
    r.seed = j.at("seed").get<std::uint64_t>();
    r.fitness_classifier = j.value("fitness_classifier", std::string("nb"));
    if (j.contains("config"))
      for (const auto& [k, v] : j.at("config").items()) r.config.emplace_back(k, v.get<std::string>());
    if (j.contains("notes")) r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("report json: ") + e.what());
  }
}

}  // namespace mbofs
