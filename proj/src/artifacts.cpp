#include "hetero/artifacts.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hetero/config.hpp"
#include "hetero/errors.hpp"

namespace hetero {

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& bytes) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << content;
  if (!out) throw ConfigError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string grid_csv(const GridFunction& f) {
  std::ostringstream o;
  o << "x,value\n";
  for (int i = 0; i < f.size(); ++i)
    o << format_double(f.grid->node(i)) << "," << format_double(f[i]) << "\n";
  return o.str();
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream o;
  o << "t,x,u\n";
  for (const auto& sl : traj.slices)
    for (int i = 0; i < sl.u.size(); ++i)
      o << format_double(sl.t) << "," << format_double(sl.u.grid->node(i))
        << "," << format_double(sl.u[i]) << "\n";
  return o.str();
}

std::string direction_csv(const PerturbationDirection& d) {
  std::ostringstream o;
  o << "x,beta,y,psi\n";
  for (int i = 0; i < d.beta.size(); ++i)
    o << format_double(d.beta.grid->node(i)) << ","
      << format_double(d.beta[i]) << "," << format_double(d.y[i]) << ","
      << format_double(d.psi[i]) << "\n";
  return o.str();
}

ArtifactWriter::ArtifactWriter(std::string out_dir,
                               const std::string& config_text,
                               std::uint64_t seed)
    : dir_(std::move(out_dir)),
      config_hash_(fnv1a64_hex(config_text)),
      seed_(seed) {
  std::filesystem::create_directories(dir_);
}

void ArtifactWriter::write(const std::string& name,
                           const std::string& content) {
  write_text_file(dir_ + "/" + name, content);
  artifact_hashes_[name] = fnv1a64_hex(content);
}

void ArtifactWriter::record_suite(const std::string& name, bool passed) {
  suites_[name] = passed;
}

std::string ArtifactWriter::finalize() {
  nlohmann::json m;
  m["config_hash"] = config_hash_;
  m["seed"] = seed_;
  nlohmann::json arts = nlohmann::json::object();
  for (const auto& [name, hash] : artifact_hashes_) arts[name] = hash;
  m["artifacts"] = arts;
  nlohmann::json suites = nlohmann::json::object();
  for (const auto& [name, ok] : suites_) suites[name] = ok;
  m["suites"] = suites;
  const std::string path = dir_ + "/manifest.json";
  write_text_file(path, m.dump(2) + "\n");
  return path;
}

}  // namespace hetero
