#ifndef HETERO_ARTIFACTS_HPP
#define HETERO_ARTIFACTS_HPP

#include <cstdint>
#include <map>
#include <string>

#include "hetero/evolve.hpp"
#include "hetero/forcing.hpp"
#include "hetero/grid.hpp"

namespace hetero {

// FNV-1a over bytes; the hash that manifests record for config and artifacts.
std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

std::string grid_csv(const GridFunction& f);                 // x,value
std::string trajectory_csv(const Trajectory& traj);          // t,x,u
std::string direction_csv(const PerturbationDirection& d);   // x,beta,y,psi

// Accumulates artifacts for one output directory, then writes manifest.json
// with the config hash, per-artifact content hashes, and per-suite pass
// flags. Writing the same artifacts under the same config yields the same
// manifest bytes.
class ArtifactWriter {
public:
  ArtifactWriter(std::string out_dir, const std::string& config_text,
                 std::uint64_t seed);

  void write(const std::string& name, const std::string& content);
  void record_suite(const std::string& name, bool passed);
  std::string finalize();  // writes manifest.json, returns its path

  const std::string& dir() const { return dir_; }

private:
  std::string dir_;
  std::string config_hash_;
  std::uint64_t seed_;
  std::map<std::string, std::string> artifact_hashes_;
  std::map<std::string, bool> suites_;
};

}  // namespace hetero

#endif
