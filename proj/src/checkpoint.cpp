#include "mbofs/checkpoint.hpp"

#include <cstdio>

#include "json.hpp"
#include "mbofs/error.hpp"
#include "mbofs/mask_io.hpp"
#include "mbofs/rng.hpp"

namespace mbofs {

using nlohmann::json;

std::string corpus_fingerprint(const DocTermMatrix& matrix) {
  std::uint64_t h = mix64(matrix.n_docs());
  h = mix64(h ^ matrix.n_features());
  h = mix64(h ^ matrix.n_classes());
  for (auto count : matrix.class_counts()) h = mix64(h ^ count);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

json bird_json(const Bird& b) { return {{"mask", b.mask.to_string()}, {"fitness", b.fitness}}; }

Bird bird_from(const json& j) {
  return {FeatureMask::from_string(j.at("mask").get<std::string>()), j.at("fitness").get<double>()};
}

json mbo_json(const MboSnapshot& s) {
  json left = json::array(), right = json::array(), trace = json::array();
  for (const auto& b : s.flock.left) left.push_back(bird_json(b));
  for (const auto& b : s.flock.right) right.push_back(bird_json(b));
  for (const auto& t : s.trace)
    trace.push_back({{"counter", t.counter}, {"change", t.change}, {"f_max", t.f_max}, {"elapsed_ms", t.elapsed_ms}});
  return {{"state",
           {{"f_max", s.state.f_max},
            {"b_max", s.state.b_max.to_string()},
            {"f1", s.state.f1},
            {"f2", s.state.f2},
            {"f3", s.state.f3},
            {"counter", s.state.counter}}},
          {"flock", {{"leader", bird_json(s.flock.leader)}, {"left", left}, {"right", right}}},
          {"trace", trace},
          {"elapsed_seconds", s.elapsed_seconds}};
}

MboSnapshot mbo_from(const json& j) {
  MboSnapshot s;
  const auto& st = j.at("state");
  s.state.f_max = st.at("f_max").get<double>();
  s.state.b_max = FeatureMask::from_string(st.at("b_max").get<std::string>());
  s.state.f1 = st.at("f1").get<double>();
  s.state.f2 = st.at("f2").get<double>();
  s.state.f3 = st.at("f3").get<double>();
  s.state.counter = st.at("counter").get<int>();
  const auto& fl = j.at("flock");
  s.flock.leader = bird_from(fl.at("leader"));
  for (const auto& b : fl.at("left")) s.flock.left.push_back(bird_from(b));
  for (const auto& b : fl.at("right")) s.flock.right.push_back(bird_from(b));
  for (const auto& t : j.at("trace"))
    s.trace.push_back({t.at("counter").get<int>(), t.at("change").get<std::size_t>(), t.at("f_max").get<double>(),
                       t.at("elapsed_ms").get<double>()});
  s.elapsed_seconds = j.at("elapsed_seconds").get<double>();
  return s;
}

json pso_json(const PsoSnapshot& s) {
  json particles = json::array(), trace = json::array();
  for (const auto& p : s.swarm.particles) {
    std::vector<double> v(p.velocity.data(), p.velocity.data() + p.velocity.size());
    particles.push_back({{"position", p.position.to_string()},
                         {"velocity", v},
                         {"fitness", p.fitness},
                         {"pbest", p.pbest.to_string()},
                         {"pbest_fitness", p.pbest_fitness}});
  }
  for (const auto& t : s.trace)
    trace.push_back({{"iteration", t.iteration}, {"gbest_fitness", t.gbest_fitness}, {"elapsed_ms", t.elapsed_ms}});
  return {{"swarm",
           {{"particles", particles},
            {"gbest", s.swarm.gbest.to_string()},
            {"gbest_fitness", s.swarm.gbest_fitness},
            {"iteration", s.swarm.iteration}}},
          {"trace", trace},
          {"elapsed_seconds", s.elapsed_seconds}};
}

PsoSnapshot pso_from(const json& j) {
  PsoSnapshot s;
  const auto& sw = j.at("swarm");
  for (const auto& pj : sw.at("particles")) {
    Particle p;
    p.position = FeatureMask::from_string(pj.at("position").get<std::string>());
    const auto v = pj.at("velocity").get<std::vector<double>>();
    p.velocity = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    p.fitness = pj.at("fitness").get<double>();
    p.pbest = FeatureMask::from_string(pj.at("pbest").get<std::string>());
    p.pbest_fitness = pj.at("pbest_fitness").get<double>();
    s.swarm.particles.push_back(std::move(p));
  }
  s.swarm.gbest = FeatureMask::from_string(sw.at("gbest").get<std::string>());
  s.swarm.gbest_fitness = sw.at("gbest_fitness").get<double>();
  s.swarm.iteration = sw.at("iteration").get<int>();
  for (const auto& t : j.at("trace"))
    s.trace.push_back({t.at("iteration").get<int>(), t.at("gbest_fitness").get<double>(), t.at("elapsed_ms").get<double>()});
  s.elapsed_seconds = j.at("elapsed_seconds").get<double>();
  return s;
}

}  // namespace

void checkpoint_save(const std::filesystem::path& path, const Checkpoint& c) {
  json j = {{"format_version", c.version}, {"method", c.method}, {"fingerprint", c.fingerprint}, {"seed", c.seed}};
  if (c.mbo) j["mbo"] = mbo_json(*c.mbo);
  if (c.pso) j["pso"] = pso_json(*c.pso);
  write_file_atomic(path, j.dump() + "\n");
}

Checkpoint checkpoint_load(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw Error("checkpoint " + path.string() + " is malformed or truncated: " + e.what());
  }
  try {
    Checkpoint c;
    c.version = j.at("format_version").get<int>();
    if (c.version != kCheckpointVersion)
      throw Error("checkpoint format version " + std::to_string(c.version) + " is not supported (expected " +
                  std::to_string(kCheckpointVersion) + ")");
    c.method = j.at("method").get<std::string>();
    c.fingerprint = j.at("fingerprint").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("mbo")) c.mbo = mbo_from(j.at("mbo"));
    if (j.contains("pso")) c.pso = pso_from(j.at("pso"));
    if (c.method == "mbo" ? !c.mbo : c.method == "pso" ? !c.pso : true)
      throw Error("checkpoint has no state for method '" + c.method + "'");
    return c;
  } catch (const json::exception& e) {
    throw Error("checkpoint " + path.string() + " is missing fields: " + e.what());
  }
}

Checkpoint checkpoint_load(const std::filesystem::path& path, const std::string& expected_fingerprint) {
  auto c = checkpoint_load(path);
  if (c.fingerprint != expected_fingerprint) throw Error("checkpoint from a different corpus");
  return c;
}

}  // namespace mbofs
