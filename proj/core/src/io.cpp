#include "foldsim/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace foldsim {

void write_shot_header(std::ostream& os, std::uint64_t circuit_hash, std::uint64_t seed,
                       int n_detectors) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "# circuit=%016" PRIx64 " seed=%" PRIu64 " detectors=%d\n",
                circuit_hash, seed, n_detectors);
  os << buf;
}

void write_shot_line(std::ostream& os, const ShotRecord& record) {
  std::string line;
  std::size_t i = 0;
  bool run_of = false;  // runs alternate starting with zeros
  char buf[24];
  while (i < record.detector_bits.size()) {
    std::size_t j = i;
    while (j < record.detector_bits.size() && record.detector_bits.get(j) == run_of) ++j;
    if (!line.empty()) line += '.';
    std::snprintf(buf, sizeof buf, "%zx", j - i);
    line += buf;
    run_of = !run_of;
    i = j;
  }
  if (line.empty()) line = "0";
  os << line << (record.logical_bit ? " L1" : " L0") << "\n";
}

namespace {

std::uint64_t parse_field(const std::string& header, const std::string& key, int base) {
  const auto pos = header.find(key + "=");
  if (pos == std::string::npos)
    throw std::runtime_error("shot dump header is missing '" + key + "'");
  return std::stoull(header.substr(pos + key.size() + 1), nullptr, base);
}

}  // namespace

ShotDump read_shot_dump(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# circuit=", 0) != 0)
    throw std::runtime_error("shot dump must start with a '# circuit=' header");
  ShotDump dump;
  dump.circuit_hash = parse_field(line, "circuit", 16);
  dump.seed = parse_field(line, "seed", 10);
  dump.n_detectors = int(parse_field(line, "detectors", 10));

  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto sp = line.rfind(' ');
    if (sp == std::string::npos || sp + 3 != line.size() || line[sp + 1] != 'L' ||
        (line[sp + 2] != '0' && line[sp + 2] != '1'))
      throw std::runtime_error("shot line must end with ' L0' or ' L1'");
    ShotRecord rec;
    rec.logical_bit = line[sp + 2] == '1';
    rec.detector_bits = BitVec(std::size_t(dump.n_detectors));
    std::size_t bit = 0;
    bool run_of = false;
    std::size_t i = 0;
    while (i < sp) {
      std::size_t used = 0;
      const std::size_t run = std::stoull(line.substr(i, sp - i), &used, 16);
      if (used == 0) throw std::runtime_error("malformed run length in shot line");
      if (bit + run > std::size_t(dump.n_detectors))
        throw std::runtime_error("shot line overruns the detector count");
      if (run_of)
        for (std::size_t k = 0; k < run; ++k) rec.detector_bits.set(bit + k, true);
      bit += run;
      run_of = !run_of;
      i += used;
      if (i < sp) {
        if (line[i] != '.') throw std::runtime_error("expected '.' between run lengths");
        ++i;
      }
    }
    if (bit != std::size_t(dump.n_detectors))
      throw std::runtime_error("shot line does not cover every detector");
    dump.shots.push_back(std::move(rec));
  }
  return dump;
}

std::string detector_table(const Circuit& circuit, const DetectorSet& ds) {
  std::string out;
  char buf[64];
  for (const Detector& det : ds.detectors) {
    std::snprintf(buf, sizeof buf, "DET %d %d %d :", det.coord.x2, det.coord.y2, det.t2);
    out += buf;
    for (int m : det.measurements) {
      const MeasurementLocation& loc = circuit.measurements[m];
      std::snprintf(buf, sizeof buf, " %s %d,%d@%d", gate_name(loc.basis), loc.coord.x2,
                    loc.coord.y2, loc.round);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace foldsim
