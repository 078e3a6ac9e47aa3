#include "doctest.h"

#include <cstdio>

#include "mbofs/checkpoint.hpp"
#include "mbofs/config.hpp"
#include "mbofs/error.hpp"
#include "mbofs/experiment.hpp"
#include "mbofs/mask_io.hpp"
#include "mbofs/report.hpp"
#include "mbofs/synthetic.hpp"
#include "test_util.hpp"

using namespace mbofs;
using testutil::TempDir;
using testutil::write_file;

namespace {

std::string write_planted(const TempDir& dir, std::size_t docs = 160, std::size_t features = 300) {
  PlantedCorpusSpec spec;
  spec.n_docs = docs;
  spec.n_features = features;
  spec.n_informative = 20;
  const auto corpus = make_planted_corpus(spec);
  std::string tsv;
  for (const auto& d : corpus.docs) tsv += d.label + "\t" + d.text + "\n";
  write_file(dir / "planted.tsv", tsv);
  return (dir / "planted.tsv").string();
}

RunReport sample_report() {
  RunReport r;
  r.corpus_name = "news";
  r.stats = {300, 160, 4, 60.0, 6.0};
  r.raw = {"raw", 300, 0.61875, "nb", 0.0, "complete", -1.0};
  r.methods.push_back({"ig", 120, 0.8125, "dt", 0.01, "complete", 0.8});
  r.methods.push_back({"mbo", 101, 0.84375, "nb", 1.5, "stagnation", 0.85});
  r.methods.push_back({"pso", 117, 0.80625, "nb", 3.25, "max-iterations", 0.81});
  r.seed = 4;
  r.config = {{"folds", "5"}, {"seed", "4"}};
  r.notes = {"a note"};
  return r;
}

}  // namespace

TEST_CASE("config settings and files") {
  ExperimentConfig c;
  apply_setting(c, "ig_cap", "500");
  apply_setting(c, "method", "mbo");
  apply_setting(c, "classifier", "best-of");
  apply_setting(c, "pso_vmax", "4.5");
  apply_setting(c, "change_fraction", "0.05");
  CHECK(c.ig_cap == 500);
  CHECK(c.method == Method::Mbo);
  CHECK(c.classifier == EvalClassifier::Best);
  CHECK(c.pso.v_max == 4.5);
  CHECK(c.mbo.schedule.base_fraction == 0.05);
  CHECK_THROWS_AS(apply_setting(c, "ig_cap", "lots"), Error);
  CHECK_THROWS_AS(apply_setting(c, "ig_cap", "12x"), Error);
  CHECK_THROWS_AS(apply_setting(c, "colour", "blue"), Error);
  CHECK_THROWS_AS(apply_setting(c, "method", "aco"), Error);

  TempDir dir;
  write_file(dir / "run.cfg", "# experiment\ncorpus = data/news.tsv\nseed=7\n\n  folds = 10  # ten folds\nflock_size = 9\n");
  const auto loaded = load_config_file(dir / "run.cfg");
  CHECK(loaded.corpus == "data/news.tsv");
  CHECK(loaded.seed == 7);
  CHECK(loaded.folds == 10);
  CHECK(loaded.mbo.flock_size == 9);
  CHECK(loaded.display_name() == "news");
  write_file(dir / "bad.cfg", "corpus data.tsv\n");
  CHECK_THROWS_AS(load_config_file(dir / "bad.cfg"), Error);

  ExperimentConfig invalid;
  CHECK_THROWS_AS(invalid.validate(), Error);
  invalid.corpus = "x.tsv";
  invalid.folds = 1;
  CHECK_THROWS_AS(invalid.validate(), Error);
  CHECK(config_keys().size() >= 20);
}

TEST_CASE("mask files") {
  const auto m = FeatureMask::from_string("0110001");
  CHECK(format_mask(m) == "M=7\n0110001\n");
  CHECK(parse_mask(format_mask(m)) == m);
  CHECK_THROWS_AS(parse_mask("M=8\n0110001\n"), Error);
  CHECK_THROWS_AS(parse_mask("0110001\n"), Error);
  CHECK_THROWS_AS(parse_mask("M=3\n012\n"), Error);

  TempDir dir;
  write_mask_file(dir / "a.mask", m);
  CHECK(read_mask_file(dir / "a.mask") == m);

  // Reduced bit j refers to the j-th set bit of the universe mask.
  const auto universe = FeatureMask::from_string("1011010");
  CHECK(expand_mask(FeatureMask::from_string("0101"), universe).to_string() == "0010010");
  CHECK_THROWS_AS(expand_mask(FeatureMask::from_string("01"), universe), Error);
}

TEST_CASE("checkpoints round-trip and reject bad input") {
  TempDir dir;
  const LambdaFitness fit([](const FeatureMask& m) { return static_cast<double>(m.popcount() % 7) / 7.0; });
  MboSnapshot snap;
  MboObserver obs;
  obs.on_tour = [&](const MboSnapshot& s) {
    snap = s;
    return s.state.counter < 2;
  };
  mbo_select(fit, FeatureMask(90, true), MboConfig{}, obs);

  const auto path = dir / "mbo.checkpoint.json";
  checkpoint_save(path, {kCheckpointVersion, "mbo", "abc123", 11, snap, {}});
  const auto back = checkpoint_load(path, "abc123");
  REQUIRE(back.mbo);
  CHECK(back.method == "mbo");
  CHECK(back.seed == 11);
  CHECK(back.mbo->flock == snap.flock);
  CHECK(back.mbo->state.f_max == snap.state.f_max);
  CHECK(back.mbo->state.b_max == snap.state.b_max);
  CHECK(back.mbo->state.counter == 2);
  CHECK(back.mbo->trace.size() == 2);
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));

  CHECK_THROWS_WITH_AS(checkpoint_load(path, "other"), doctest::Contains("different corpus"), Error);

  const auto text = read_text_file(path);
  write_file(dir / "cut.json", text.substr(0, text.size() / 2));
  CHECK_THROWS_AS(checkpoint_load(dir / "cut.json"), Error);
  CHECK(checkpoint_load(path).mbo->flock == snap.flock);

  write_file(dir / "old.json", R"({"format_version": 0, "method": "mbo"})");
  CHECK_THROWS_AS(checkpoint_load(dir / "old.json"), Error);
  CHECK_THROWS_AS(checkpoint_load(dir / "missing.json"), Error);

  PsoConfig pc;
  pc.swarm_size = 4;
  pc.max_iterations = 3;
  const auto pso = pso_select(fit, FeatureMask(40, true), pc);
  checkpoint_save(dir / "pso.json", {kCheckpointVersion, "pso", "f", 1, {}, PsoSnapshot{pso.swarm, pso.trace, 0.5}});
  const auto p = checkpoint_load(dir / "pso.json");
  REQUIRE(p.pso);
  CHECK(p.pso->swarm.iteration == 3);
  CHECK(p.pso->swarm.gbest == pso.swarm.gbest);
  for (std::size_t i = 0; i < 4; ++i) CHECK(p.pso->swarm.particles[i].velocity == pso.swarm.particles[i].velocity);
}

TEST_CASE("report rendering") {
  const auto r = sample_report();
  const auto json = render_report(r, ReportStyle::Json);
  const auto parsed = parse_report_json(json);
  CHECK(parsed.raw == r.raw);
  CHECK(parsed.methods == r.methods);
  CHECK(parsed.config == r.config);
  CHECK(render_report(parsed, ReportStyle::Table) == render_report(r, ReportStyle::Table));

  const auto table = render_report(r, ReportStyle::Table);
  CHECK(table.find("raw data") != std::string::npos);
  CHECK(table.find("information gain") != std::string::npos);
  CHECK(table.find("MBO-NB") != std::string::npos);
  CHECK(table.find("*84.4") != std::string::npos);
  CHECK(table.find("61.9") != std::string::npos);
  CHECK(table.find("80.6") != std::string::npos);
  CHECK(table.find("101") != std::string::npos);

  auto expired = r;
  expired.methods[2].status = "budget";
  const auto dash = render_report(expired, ReportStyle::Table);
  CHECK(table_accuracy_cell(expired.methods[2]) == "-");
  CHECK(dash.find("80.6") == std::string::npos);
  CHECK(dash.find("PSO: budget") != std::string::npos);
  CHECK(parse_report_json(render_report(expired, ReportStyle::Json)).methods[2].status == "budget");

  auto single = r;
  single.methods.resize(1);
  const auto one = render_report(single, ReportStyle::Table);
  CHECK(one.find("information gain") != std::string::npos);
  CHECK(one.find("MBO") == std::string::npos);
  CHECK(one.find("PSO") == std::string::npos);

  const auto csv = render_report(r, ReportStyle::Csv);
  CHECK(csv.rfind("corpus,method,m_prime", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK_THROWS_AS(parse_report_json("{"), Error);
  CHECK_THROWS_AS(parse_report_style("xml"), Error);
}

TEST_CASE("ig-only experiment") {
  TempDir dir;
  ExperimentConfig c;
  c.corpus = write_planted(dir);
  c.method = Method::Ig;
  c.ig_cap = 40;
  c.out_dir = dir / "out";
  const auto outcome = run_experiment(c);
  const auto& rep = outcome.report;
  REQUIRE(rep.methods.size() == 1);
  CHECK(rep.methods[0].name == "ig");
  CHECK(rep.methods[0].m_prime <= 40);
  CHECK(rep.raw.m_prime == 300);
  CHECK(rep.stats.n_instances == 160);
  CHECK(std::filesystem::exists(dir.path / "out" / "report.json"));

  // Every reported accuracy reproduces from the stored mask and seed.
  const auto prepared = prepare_corpus(c.corpus, c.format, c.stopwords);
  const auto mask = read_mask_file(run_files::mask(c.out_dir, "ig"));
  CHECK(mask.popcount() == rep.methods[0].m_prime);
  CHECK(evaluate_mask(prepared.matrix, mask, c.classifier, c.folds, c.seed).accuracy == rep.methods[0].accuracy);
  const auto sidecar = read_text_file(run_files::sidecar(c.out_dir, "ig"));
  CHECK(std::count(sidecar.begin(), sidecar.end(), '\n') == static_cast<long>(mask.popcount()) + 1);
}

TEST_CASE("full experiment invariants and determinism") {
  TempDir dir;
  ExperimentConfig c;
  c.corpus = write_planted(dir);
  c.ig_cap = 60;
  c.seed = 3;
  c.pso.swarm_size = 6;
  c.pso.max_iterations = 8;
  c.out_dir = dir / "a";
  const auto a = run_experiment(c).report;
  c.out_dir = dir / "b";
  c.threads = 3;
  const auto b = run_experiment(c).report;

  REQUIRE(a.methods.size() == 3);
  const auto* ig = a.find("ig");
  const auto* mbo = a.find("mbo");
  const auto* pso = a.find("pso");
  REQUIRE(ig);
  REQUIRE(mbo);
  REQUIRE(pso);
  CHECK(mbo->fitness >= ig->fitness);
  CHECK(pso->fitness >= ig->fitness);
  CHECK(mbo->m_prime <= c.ig_cap);
  CHECK(pso->m_prime <= c.ig_cap);
  for (const auto* m : {&a.raw, ig, mbo, pso}) {
    CHECK(m->accuracy >= 0.0);
    CHECK(m->accuracy <= 1.0);
  }
  const auto mbo_mask = read_mask_file(run_files::mask(dir.path / "a", "mbo"));
  CHECK(mbo_mask.is_subset_of(read_mask_file(run_files::mask(dir.path / "a", "ig"))));
  for (const char* m : {"ig", "mbo", "pso"})
    CHECK(read_text_file(run_files::mask(dir.path / "a", m)) == read_text_file(run_files::mask(dir.path / "b", m)));
  for (std::size_t i = 0; i < a.methods.size(); ++i) {
    CHECK(a.methods[i].accuracy == b.methods[i].accuracy);
    CHECK(a.methods[i].fitness == b.methods[i].fitness);
    CHECK(a.methods[i].m_prime == b.methods[i].m_prime);
  }
}

TEST_CASE("stage failures name the stage") {
  TempDir dir;
  ExperimentConfig c;
  c.corpus = dir / "nope.tsv";
  c.out_dir = dir / "out";
  try {
    run_experiment(c);
    FAIL("expected a pipeline error");
  } catch (const PipelineError& e) {
    CHECK(e.stage() == "load");
  }

  c.corpus = write_planted(dir);
  c.resume = dir / "missing.checkpoint.json";
  try {
    run_experiment(c);
    FAIL("expected a pipeline error");
  } catch (const PipelineError& e) {
    CHECK(e.stage() == "resume");
  }
}
