#include "foldsim/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <ostream>
#include <stdexcept>

#include "foldsim/layout.hpp"
#include "foldsim/rng.hpp"

namespace foldsim {

const char* family_name(Family family) {
  switch (family) {
    case Family::XMemory:
      return "memory";
    case Family::S2:
      return "s2";
  }
  throw std::invalid_argument("unknown family");
}

Family family_from_name(std::string_view name) {
  if (name == "memory") return Family::XMemory;
  if (name == "s2") return Family::S2;
  throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

std::string ExperimentSpec::canonical() const {
  char buf[256];
  if (family == Family::XMemory) {
    std::snprintf(buf, sizeof buf,
                  "family=memory d=%d p=%.17g rounds=%d decoder=%s shots=%lld seed=%llu "
                  "max_errors=%lld",
                  d, p, rounds > 0 ? rounds : 2 * d, decoder_mode_name(mode),
                  (long long)shots, (unsigned long long)seed, (long long)max_errors);
  } else {
    std::snprintf(buf, sizeof buf,
                  "family=s2 d=%d p=%.17g n_pad=%d n_m=%d decoder=%s shots=%lld seed=%llu "
                  "max_errors=%lld",
                  d, p, n_pad, n_m, decoder_mode_name(mode), (long long)shots,
                  (unsigned long long)seed, (long long)max_errors);
  }
  return buf;
}

Circuit build_family_circuit(const ExperimentSpec& spec) {
  const Layout layout = build_layout(spec.d);
  if (spec.family == Family::XMemory)
    return build_x_memory(layout, spec.rounds > 0 ? spec.rounds : 2 * spec.d);
  return build_s2(layout, spec.n_pad, spec.n_m);
}

ResultRow run_experiment(const ExperimentSpec& spec) {
  if (spec.shots <= 0) throw std::invalid_argument("shots must be positive");
  const auto start = std::chrono::steady_clock::now();

  Circuit circuit = build_family_circuit(spec);
  if (spec.p > 0) apply_noise(circuit, spec.p);
  const CompiledPipeline pipeline = compile_pipeline(circuit);
  const FrameSampler sampler(circuit, pipeline.detectors);
  const bool reference = pipeline.detectors.observable_reference;

  ResultRow row;
  row.spec = spec;
  constexpr std::int64_t kChunk = 4096;
  for (std::int64_t shot = 0; shot < spec.shots; ++shot) {
    const ShotRecord rec = sampler.sample(spec.seed, std::uint64_t(shot));
    const DecodeOutcome out = decode_shot(pipeline, rec.detector_bits, spec.mode);
    const bool actual_flip = rec.logical_bit != reference;
    if (out.logical_correction != actual_flip) ++row.errors;
    ++row.shots_taken;
    if (spec.max_errors > 0 && row.errors >= spec.max_errors && shot % kChunk == kChunk - 1)
      break;
  }
  const LikelihoodInterval ci = likelihood_interval(row.errors, row.shots_taken);
  row.ler = ci.mle;
  row.ci_low = ci.lo;
  row.ci_high = ci.hi;
  row.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::vector<ResultRow> sweep(const std::vector<ExperimentSpec>& specs, std::ostream* csv) {
  std::vector<ResultRow> rows;
  for (const ExperimentSpec& spec : specs) {
    ExperimentSpec derived = spec;
    const std::string key = spec.canonical();
    derived.seed = fnv1a64(key.data(), key.size());
    try {
      rows.push_back(run_experiment(derived));
      if (csv) {
        append_csv_row(*csv, rows.back());
        csv->flush();
      }
    } catch (const std::exception& e) {
      std::cerr << "sweep row failed (" << key << "): " << e.what() << "\n";
    }
  }
  return rows;
}

void write_csv_header(std::ostream& os) {
  os << "family,d,p,n_pad,n_m,rounds,decoder,shots,errors,ler,ci_low,ci_high,seed,"
        "wall_seconds\n";
}

void append_csv_row(std::ostream& os, const ResultRow& row) {
  const ExperimentSpec& s = row.spec;
  char buf[512];
  if (s.family == Family::XMemory) {
    std::snprintf(buf, sizeof buf, "memory,%d,%.12g,,,%d,%s,%lld,%lld,%.9g,%.9g,%.9g,%llu,%.3f\n",
                  s.d, s.p, s.rounds > 0 ? s.rounds : 2 * s.d, decoder_mode_name(s.mode),
                  (long long)row.shots_taken, (long long)row.errors, row.ler, row.ci_low,
                  row.ci_high, (unsigned long long)s.seed, row.wall_seconds);
  } else {
    std::snprintf(buf, sizeof buf, "s2,%d,%.12g,%d,%d,,%s,%lld,%lld,%.9g,%.9g,%.9g,%llu,%.3f\n",
                  s.d, s.p, s.n_pad, s.n_m, decoder_mode_name(s.mode),
                  (long long)row.shots_taken, (long long)row.errors, row.ler, row.ci_low,
                  row.ci_high, (unsigned long long)s.seed, row.wall_seconds);
  }
  os << buf;
}

}  // namespace foldsim
