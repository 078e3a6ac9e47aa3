#include "mbofs/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

#include "mbofs/checkpoint.hpp"
#include "mbofs/error.hpp"
#include "mbofs/heuristic.hpp"
#include "mbofs/info_gain.hpp"
#include "mbofs/mask_io.hpp"
#include "mbofs/mbo.hpp"
#include "mbofs/pso.hpp"

namespace mbofs {

namespace fs = std::filesystem;

namespace run_files {
fs::path mask(const fs::path& dir, const std::string& method) { return dir / (method + ".mask"); }
fs::path sidecar(const fs::path& dir, const std::string& method) { return dir / (method + ".features.csv"); }
fs::path trace(const fs::path& dir, const std::string& method) { return dir / (method + "_trace.csv"); }
fs::path checkpoint(const fs::path& dir, const std::string& method) { return dir / (method + ".checkpoint.json"); }
}  // namespace run_files

namespace {

template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what());
  }
}

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

}  // namespace

PreparedCorpus prepare_corpus(const fs::path& path, CorpusFormat format, const std::optional<fs::path>& stopwords) {
  PreparedCorpus p;
  p.corpus = stage("load", [&] { return load_corpus(path, format); });
  stage("vectorize", [&] {
    const StopwordSet words = stopwords ? load_stopwords(*stopwords) : default_english_stopwords();
    p.vocab = build_vocabulary(p.corpus, words);
    p.matrix = vectorize_tfidf(p.corpus, p.vocab);
    p.stats = compute_stats(p.corpus, p.vocab);
    return 0;
  });
  return p;
}

EvaluatedMask evaluate_mask(const DocTermMatrix& matrix, const FeatureMask& mask, EvalClassifier classifier,
                            int folds, std::uint64_t seed, const ClassifierParams& params) {
  const auto assignment = stratified_folds(matrix.labels, folds, seed);
  auto run = [&](ClassifierKind kind) {
    return EvaluatedMask{cross_val_accuracy(matrix, mask, kind, assignment, params).mean_accuracy, kind};
  };
  switch (classifier) {
    case EvalClassifier::Nb: return run(ClassifierKind::NaiveBayes);
    case EvalClassifier::Dt: return run(ClassifierKind::DecisionTree);
    case EvalClassifier::Best: {
      const auto nb = run(ClassifierKind::NaiveBayes);
      const auto dt = run(ClassifierKind::DecisionTree);
      return dt.accuracy > nb.accuracy ? dt : nb;
    }
  }
  return run(ClassifierKind::NaiveBayes);
}

namespace {

void write_trace(const fs::path& path, const std::vector<TourTrace>& trace) {
  std::ostringstream out;
  out << "counter,change,f_max,elapsed_ms\n";
  for (const auto& t : trace)
    out << t.counter << ',' << t.change << ',' << fmt("%.17g", t.f_max) << ',' << fmt("%.3f", t.elapsed_ms) << '\n';
  write_file_atomic(path, out.str());
}

void write_trace(const fs::path& path, const std::vector<PsoTrace>& trace) {
  std::ostringstream out;
  out << "iteration,gbest_fitness,elapsed_ms\n";
  for (const auto& t : trace)
    out << t.iteration << ',' << fmt("%.17g", t.gbest_fitness) << ',' << fmt("%.3f", t.elapsed_ms) << '\n';
  write_file_atomic(path, out.str());
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  stage("config", [&] {
    config.validate();
    return 0;
  });
  const fs::path& out = config.out_dir;
  stage("output", [&] { return fs::create_directories(out); });

  const auto prepared = prepare_corpus(config.corpus, config.format, config.stopwords);
  const auto& matrix = prepared.matrix;
  const auto fingerprint = corpus_fingerprint(matrix);

  std::optional<Checkpoint> resume;
  if (config.resume)
    resume = stage("resume", [&] { return checkpoint_load(*config.resume, fingerprint); });

  ExperimentOutcome outcome;
  RunReport& report = outcome.report;
  report.corpus_name = config.display_name();
  report.stats = prepared.stats;
  report.seed = config.seed;
  report.fitness_classifier = to_string(config.fitness_classifier);
  report.config = config_echo(config);
  if (config.classifier == EvalClassifier::Best)
    report.notes.push_back("evaluation classifiers are limited to naive bayes and decision tree; each column "
                           "reports the better of the two");
  if (config.method == Method::Pso || config.method == Method::All) {
    std::ostringstream pso;
    pso << "PSO parameters: swarm=" << config.pso.swarm_size << ", w=" << config.pso.w_start << "->"
        << config.pso.w_end << ", c1=" << config.pso.c1 << ", c2=" << config.pso.c2 << ", vmax=" << config.pso.v_max
        << ", iterations=" << config.pso.max_iterations;
    report.notes.push_back(pso.str());
  }

  auto evaluate = [&](const FeatureMask& mask) {
    return evaluate_mask(matrix, mask, config.classifier, config.folds, config.seed, config.classifier_params);
  };

  stage("baseline", [&] {
    const FeatureMask all(matrix.n_features(), true);
    const auto e = evaluate(all);
    report.raw = {"raw", matrix.n_features(), e.accuracy, to_string(e.classifier), 0.0, "complete", -1.0};
    return 0;
  });

  IgScores scores;
  FeatureMask ig_mask;
  stage("ig", [&] {
    using Clock = std::chrono::steady_clock;
    const auto t0 = Clock::now();
    scores = ig_scores(matrix);
    ig_mask = ig_filter(scores, config.ig_cap);
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const auto e = evaluate(ig_mask);
    report.methods.push_back({"ig", ig_mask.popcount(), e.accuracy, to_string(e.classifier), secs, "complete", -1.0});
    write_mask_file(run_files::mask(out, "ig"), ig_mask);
    write_mask_sidecar(run_files::sidecar(out, "ig"), ig_mask, prepared.vocab, scores);
    return 0;
  });

  // Engines search over the prefiltered columns; their masks are mapped back
  // to original feature indices for output and evaluation.
  const DocTermMatrix reduced = matrix.restrict_columns(ig_mask);
  const FeatureMask input(reduced.n_features(), true);
  FitnessOptions fopts;
  fopts.classifier = config.fitness_classifier;
  fopts.folds = config.folds;
  fopts.fold_seed = config.seed;
  fopts.params = config.classifier_params;
  fopts.threads = config.threads;
  const CvFitness fitness = stage("fitness", [&] { return CvFitness(reduced, fopts); });
  report.methods.front().fitness = fitness.evaluate(input);

  const bool run_mbo = config.method == Method::Mbo || config.method == Method::All;
  const bool run_pso = config.method == Method::Pso || config.method == Method::All;
  if (run_mbo || run_pso) {
    auto record = [&](const std::string& name, const FeatureMask& reduced_best, double best_fitness, double secs,
                      const std::string& status) {
      const auto full = expand_mask(reduced_best, ig_mask);
      const auto e = evaluate(full);
      report.methods.push_back({name, full.popcount(), e.accuracy, to_string(e.classifier), secs, status, best_fitness});
      write_mask_file(run_files::mask(out, name), full);
      write_mask_sidecar(run_files::sidecar(out, name), full, prepared.vocab, scores);
      if (status == "budget") outcome.budget_expired = true;
      if (status == "interrupted") outcome.interrupted = true;
    };

    auto check_universe = [&](const FeatureMask& m) {
      if (m.size() != reduced.n_features())
        throw Error("checkpoint masks cover " + std::to_string(m.size()) + " features but the prefiltered data has " +
                    std::to_string(reduced.n_features()));
    };

    if (run_mbo) {
      stage("mbo", [&] {
        MboConfig mc = config.mbo;
        mc.seed = config.seed;
        mc.budget_seconds = config.budget_seconds;
        const MboSnapshot* snapshot = nullptr;
        if (resume && resume->method == "mbo") {
          check_universe(resume->mbo->state.b_max);
          snapshot = &*resume->mbo;
        }
        MboObserver observer;
        observer.on_tour = [&](const MboSnapshot& s) {
          checkpoint_save(run_files::checkpoint(out, "mbo"), {kCheckpointVersion, "mbo", fingerprint, config.seed, s, {}});
          return !(config.halt_after > 0 && s.state.counter >= config.halt_after);
        };
        const auto r = mbo_select(fitness, input, mc, observer, snapshot);
        write_trace(run_files::trace(out, "mbo"), r.trace);
        record("mbo", r.best, r.state.f_max, r.elapsed_seconds, to_string(r.reason));
        return 0;
      });
    }

    if (run_pso) {
      stage("pso", [&] {
        PsoConfig pc = config.pso;
        pc.seed = config.seed;
        pc.budget_seconds = config.budget_seconds;
        const PsoSnapshot* snapshot = nullptr;
        if (resume && resume->method == "pso") {
          check_universe(resume->pso->swarm.gbest);
          snapshot = &*resume->pso;
        }
        PsoObserver observer;
        observer.on_checkpoint = [&](const PsoSnapshot& s) {
          checkpoint_save(run_files::checkpoint(out, "pso"), {kCheckpointVersion, "pso", fingerprint, config.seed, {}, s});
          return !(config.halt_after > 0 && s.swarm.iteration >= config.halt_after);
        };
        const auto r = pso_select(fitness, input, pc, observer, snapshot);
        write_trace(run_files::trace(out, "pso"), r.trace);
        record("pso", r.best, r.best_fitness, r.elapsed_seconds, to_string(r.reason));
        return 0;
      });
    }
  }

  stage("report", [&] {
    write_file_atomic(out / run_files::kReport, render_report(report, ReportStyle::Json));
    return 0;
  });
  return outcome;
}

}  // namespace mbofs
