#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "foldsim/circuit.hpp"
#include "foldsim/pipeline.hpp"
#include "foldsim/stats.hpp"

namespace foldsim {

enum class Family { XMemory, S2 };

const char* family_name(Family family);
Family family_from_name(std::string_view name);

struct ExperimentSpec {
  Family family = Family::XMemory;
  int d = 3;
  double p = 1e-3;
  int rounds = -1;  // memory cycles; -1 picks the 2d default
  int n_pad = 2;    // padding cycles around each fold (logical-S experiments)
  int n_m = 2;      // cycles between the two folds
  DecoderMode mode = DecoderMode::Plain;
  std::int64_t shots = 1000;
  std::uint64_t seed = 0;
  std::int64_t max_errors = -1;  // stop sampling early once reached; -1 = never

  // Stable one-line echo of every field that affects the run; also the byte
  // string hashed into per-row seeds by sweep().
  std::string canonical() const;
};

struct ResultRow {
  ExperimentSpec spec;  // as executed (sweep substitutes the derived seed)
  std::int64_t shots_taken = 0;
  std::int64_t errors = 0;
  double ler = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double wall_seconds = 0.0;
};

// The noiseless circuit of a spec (memory or two-fold logical-S sequence).
Circuit build_family_circuit(const ExperimentSpec& spec);

// Samples and decodes shots in chunks, stopping early at max_errors. A shot
// counts as an error when the predicted logical flip disagrees with the
// sampled one.
ResultRow run_experiment(const ExperimentSpec& spec);

// Runs each spec with a seed derived from its canonical string, appending
// finished rows to `csv` as they complete. A row that throws is reported on
// stderr and skipped.
std::vector<ResultRow> sweep(const std::vector<ExperimentSpec>& specs,
                             std::ostream* csv = nullptr);

void write_csv_header(std::ostream& os);
void append_csv_row(std::ostream& os, const ResultRow& row);

}  // namespace foldsim
