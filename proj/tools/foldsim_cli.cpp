// Command-line front end: circuit/detector/DEM inspection, shot sampling and
// decoding, Monte Carlo sweeps, and rearrangement planning.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "foldsim/aod.hpp"
#include "foldsim/dem.hpp"
#include "foldsim/experiment.hpp"
#include "foldsim/io.hpp"
#include "foldsim/layout.hpp"
#include "foldsim/pipeline.hpp"

namespace {

using namespace foldsim;

struct CircuitOptions {
  std::string family = "memory";
  int d = 3;
  int rounds = -1;
  int n_pad = 2;
  int n_m = 2;
  double p = 0.0;
};

void add_circuit_options(CLI::App* cmd, CircuitOptions& opt, double default_p) {
  opt.p = default_p;
  cmd->add_option("--family", opt.family, "circuit family (memory|s2)")
      ->check(CLI::IsMember({"memory", "s2"}))
      ->capture_default_str();
  cmd->add_option("--d", opt.d, "code distance (odd, >= 3)")->capture_default_str();
  cmd->add_option("--rounds", opt.rounds, "memory rounds (-1 = 2d)")->capture_default_str();
  cmd->add_option("--n-pad", opt.n_pad, "plain rounds padding each fold")->capture_default_str();
  cmd->add_option("--n-m", opt.n_m, "plain rounds between the folds")->capture_default_str();
  cmd->add_option("--p", opt.p, "depolarizing noise strength")->capture_default_str();
}

ExperimentSpec spec_of(const CircuitOptions& opt) {
  ExperimentSpec spec;
  spec.family = family_from_name(opt.family);
  spec.d = opt.d;
  spec.p = opt.p;
  spec.rounds = opt.rounds;
  spec.n_pad = opt.n_pad;
  spec.n_m = opt.n_m;
  return spec;
}

Circuit built_circuit(const CircuitOptions& opt) {
  Circuit c = build_family_circuit(spec_of(opt));
  if (opt.p > 0) apply_noise(c, opt.p);
  return c;
}

// Stream that is either stdout or an owned file.
struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;

  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
    os = &file;
  }
};

int cmd_build(const CircuitOptions& opt, const std::string& out_path) {
  Output out(out_path);
  *out.os << built_circuit(opt).to_text();
  return 0;
}

int cmd_detectors(const CircuitOptions& opt, const std::string& out_path) {
  Output out(out_path);
  const Circuit c = built_circuit(opt);
  *out.os << detector_table(c, enumerate_detectors(c));
  return 0;
}

int cmd_dem(const CircuitOptions& opt, const std::string& out_path) {
  Output out(out_path);
  const Circuit c = built_circuit(opt);
  *out.os << hypergraph_to_text(build_hypergraph(c, enumerate_detectors(c)));
  return 0;
}

int cmd_sample(const CircuitOptions& opt, std::uint64_t seed, std::int64_t shots,
               const std::string& out_path) {
  Output out(out_path);
  const Circuit c = built_circuit(opt);
  const DetectorSet ds = enumerate_detectors(c);
  const FrameSampler sampler(c, ds);
  write_shot_header(*out.os, c.text_hash(), seed, int(ds.detectors.size()));
  for (std::int64_t s = 0; s < shots; ++s)
    write_shot_line(*out.os, sampler.sample(seed, std::uint64_t(s)));
  return 0;
}

int cmd_decode(const CircuitOptions& opt, const std::string& in_path, const std::string& decoder,
               const std::string& out_path) {
  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot open shot dump '" + in_path + "'");
  const ShotDump dump = read_shot_dump(in);

  const Circuit c = built_circuit(opt);
  if (c.text_hash() != dump.circuit_hash)
    throw std::runtime_error("shot dump was sampled from a different circuit (hash mismatch)");
  const CompiledPipeline pipeline = compile_pipeline(c);
  const DecoderMode mode = decoder_mode_from_name(decoder);
  const bool reference = pipeline.detectors.observable_reference;

  std::int64_t errors = 0;
  for (const ShotRecord& rec : dump.shots) {
    const DecodeOutcome res = decode_shot(pipeline, rec.detector_bits, mode);
    if (res.logical_correction != (rec.logical_bit != reference)) ++errors;
  }
  const auto n = std::int64_t(dump.shots.size());
  const LikelihoodInterval ci = likelihood_interval(errors, n);
  Output out(out_path);
  char buf[160];
  std::snprintf(buf, sizeof buf, "shots=%lld errors=%lld ler=%.9g ci=[%.9g, %.9g]\n",
                (long long)n, (long long)errors, ci.mle, ci.lo, ci.hi);
  *out.os << buf;
  return 0;
}

ExperimentSpec spec_from_json(const nlohmann::json& row, std::uint64_t master_seed) {
  ExperimentSpec spec;
  spec.family = family_from_name(row.at("family").get<std::string>());
  spec.d = row.at("d").get<int>();
  spec.p = row.at("p").get<double>();
  spec.rounds = row.value("rounds", -1);
  spec.n_pad = row.value("n_pad", 2);
  spec.n_m = row.value("n_m", 2);
  spec.mode = decoder_mode_from_name(row.value("decoder", "plain"));
  spec.shots = row.value("shots", std::int64_t(100000));
  spec.seed = row.value("seed", master_seed);
  spec.max_errors = row.value("max_errors", std::int64_t(-1));
  return spec;
}

int cmd_sweep(const std::string& config_path, const std::string& out_path) {
  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open sweep config '" + config_path + "'");
  nlohmann::json config = nlohmann::json::parse(in);

  const auto master_seed = config.value("seed", std::uint64_t(0));
  std::vector<ExperimentSpec> specs;
  for (const nlohmann::json& row : config.at("rows"))
    specs.push_back(spec_from_json(row, master_seed));

  Output out(out_path);
  write_csv_header(*out.os);
  out.os->flush();
  sweep(specs, out.os);
  return 0;
}

int cmd_aod_plan(int d, const std::string& what, const std::string& out_path) {
  Output out(out_path);
  const Layout layout = build_layout(d);

  auto report = [&](const char* name, const RearrangementPlan& plan) {
    const PlanCheck check = verify_plan(plan, layout.data);
    *out.os << "# " << name << ": " << plan.batches.size() << " batches, "
            << check.violations.size() << " violations, target "
            << (check.matches_target ? "reached" : "MISSED") << "\n"
            << plan.to_text();
    for (const PlanViolation& v : check.violations) *out.os << "# " << v.str() << "\n";
    return check.ok();
  };

  bool ok = true;
  if (what == "rotation") {
    const RotationPlan rot = plan_rotation(layout);
    ok &= report("horizontal reflection", rot.horizontal);
    // The second stage starts from the reflected occupancy.
    std::vector<Coord> mid;
    for (const auto& [from, to] : rot.horizontal.target) mid.push_back(to);
    const PlanCheck check = verify_plan(rot.diagonal, mid);
    *out.os << "# diagonal reflection: " << rot.diagonal.batches.size() << " batches, "
            << check.violations.size() << " violations, target "
            << (check.matches_target ? "reached" : "MISSED") << "\n"
            << rot.diagonal.to_text();
    ok &= check.ok();
  } else {
    const AodOrientation o =
        what == "diagonal" ? AodOrientation::Diagonal : AodOrientation::Horizontal;
    const int axis2 = o == AodOrientation::Horizontal ? layout.distance - 1 : 0;
    ok &= report(what.c_str(), plan_reflection(layout.data, axis2, o));
  }
  return ok ? 0 : 1;
}

// Noiseless determinism and effect-oracle equivalence, the two suites that
// certify a build end to end.
int cmd_verify(int d, std::int64_t shots) {
  int failures = 0;
  auto gate = [&](const char* name, bool pass) {
    std::printf("%-44s %s\n", name, pass ? "PASS" : "FAIL");
    if (!pass) ++failures;
  };

  for (const char* family : {"memory", "s2"}) {
    CircuitOptions opt;
    opt.family = family;
    opt.d = d;

    {
      const Circuit c = built_circuit(opt);
      const DetectorSet ds = enumerate_detectors(c);
      const FrameSampler sampler(c, ds);
      bool pass = true;
      for (std::int64_t s = 0; s < shots && pass; ++s) {
        const ShotRecord rec = sampler.sample(7, std::uint64_t(s));
        for (std::size_t i = 0; i < ds.detectors.size(); ++i) pass &= !rec.detector_bits.get(i);
        pass &= rec.logical_bit == ds.observable_reference;
      }
      gate((std::string("noiseless determinism (") + family + ")").c_str(), pass);
    }
    {
      opt.p = 1e-3;
      const Circuit c = built_circuit(opt);
      const DetectorSet ds = enumerate_detectors(c);
      const RegionIndex index = build_region_index(c, ds);
      const FrameSampler sampler(c, ds);
      bool pass = true;
      for (const ErrorLocation& loc : enumerate_error_locations(c)) {
        const ErrorEffect a = effect_via_regions(loc.fault, loc.timestamp, index);
        const ErrorEffect b = effect_via_frame(loc.fault, loc.timestamp, sampler, ds);
        pass &= a.dz == b.dz && a.dx == b.dx && a.logical_flip == b.logical_flip;
        if (!pass) break;
      }
      gate((std::string("effect oracle equivalence (") + family + ")").c_str(), pass);
    }
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Folded surface-code S-gate simulator"};
  app.require_subcommand(1);

  CircuitOptions opt;
  std::string out_path, in_path, config_path;
  std::string decoder = "plain";
  std::string orientation = "rotation";
  std::uint64_t seed = 0;
  std::int64_t shots = 1000;

  CLI::App* build = app.add_subcommand("build", "emit the circuit as text");
  add_circuit_options(build, opt, 0.0);
  build->add_option("--out", out_path, "output path (default stdout)");

  CLI::App* detectors = app.add_subcommand("detectors", "emit the detector table");
  add_circuit_options(detectors, opt, 0.0);
  detectors->add_option("--out", out_path, "output path (default stdout)");

  CLI::App* dem = app.add_subcommand("dem", "emit the decoding hypergraph");
  add_circuit_options(dem, opt, 1e-3);
  dem->add_option("--out", out_path, "output path (default stdout)");

  CLI::App* sample = app.add_subcommand("sample", "sample shots to a dump");
  add_circuit_options(sample, opt, 1e-3);
  sample->add_option("--seed", seed, "sampler seed")->capture_default_str();
  sample->add_option("--shots", shots, "number of shots")->capture_default_str();
  sample->add_option("--out", out_path, "output path (default stdout)");

  CLI::App* decode = app.add_subcommand("decode", "decode a sampled dump");
  add_circuit_options(decode, opt, 1e-3);
  decode->add_option("--in", in_path, "shot dump path")->required();
  decode->add_option("--decoder", decoder, "plain|vtb|vtb-pr|vtb-fr")
      ->check(CLI::IsMember({"plain", "vtb", "vtb-pr", "vtb-fr"}))
      ->capture_default_str();
  decode->add_option("--out", out_path, "output path (default stdout)");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run experiments from a JSON config");
  sweep_cmd->add_option("--config", config_path, "JSON config path")->required();
  sweep_cmd->add_option("--out", out_path, "CSV output path (default stdout)");

  CLI::App* aod = app.add_subcommand("aod-plan", "plan a patch rearrangement");
  aod->add_option("--d", opt.d, "code distance")->capture_default_str();
  aod->add_option("--orientation", orientation, "horizontal|diagonal|rotation")
      ->check(CLI::IsMember({"horizontal", "diagonal", "rotation"}))
      ->capture_default_str();
  aod->add_option("--out", out_path, "output path (default stdout)");

  CLI::App* verify = app.add_subcommand("verify", "run the determinism and oracle suites");
  verify->add_option("--d", opt.d, "code distance")->capture_default_str();
  verify->add_option("--shots", shots, "noiseless shots per family")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return cmd_build(opt, out_path);
    if (detectors->parsed()) return cmd_detectors(opt, out_path);
    if (dem->parsed()) return cmd_dem(opt, out_path);
    if (sample->parsed()) return cmd_sample(opt, seed, shots, out_path);
    if (decode->parsed()) return cmd_decode(opt, in_path, decoder, out_path);
    if (sweep_cmd->parsed()) return cmd_sweep(config_path, out_path);
    if (aod->parsed()) return cmd_aod_plan(opt.d, orientation, out_path);
    if (verify->parsed()) return cmd_verify(opt.d, shots);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
