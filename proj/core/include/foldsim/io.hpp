#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "foldsim/circuit.hpp"
#include "foldsim/frame.hpp"
#include "foldsim/trajectory.hpp"

namespace foldsim {

// Sampled-shot dump: a header line
//   # circuit=<16-digit hex> seed=<decimal> detectors=<count>
// then one line per shot holding the detector bits run-length encoded as
// hex run lengths separated by '.', starting with the (possibly empty)
// zeros run, followed by " L0" or " L1" for the logical readout.
// Bits 000110 encode as "3.2.1 L0".
struct ShotDump {
  std::uint64_t circuit_hash = 0;
  std::uint64_t seed = 0;
  int n_detectors = 0;
  std::vector<ShotRecord> shots;
};

void write_shot_header(std::ostream& os, std::uint64_t circuit_hash, std::uint64_t seed,
                       int n_detectors);
void write_shot_line(std::ostream& os, const ShotRecord& record);

// Parses a full dump; throws std::runtime_error on any malformed line.
ShotDump read_shot_dump(std::istream& is);

// Human-readable detector table, one line per detector:
//   DET x2 y2 t2 : MEAS_Z x2,y2@round ...
std::string detector_table(const Circuit& circuit, const DetectorSet& ds);

}  // namespace foldsim
