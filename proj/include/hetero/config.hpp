#ifndef HETERO_CONFIG_HPP
#define HETERO_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hetero/evolve.hpp"
#include "hetero/forcing.hpp"
#include "hetero/heteroclinic.hpp"

namespace hetero {

// Flat key-value run configuration. Grammar: one `section.key = value` per
// line, `#` starts a comment, blank lines ignored. Unknown keys are rejected.
struct RunConfig {
  struct GridSection {
    double L = 30.0;
    int N = 1201;
  } grid;

  ForcingParams forcing;  // forcing.offset, forcing.width
  SchemeConfig scheme;    // scheme.dt, .theta, .t_max, .store_stride,
                          // .steady_tol, .blowup_threshold

  struct FamilySection {
    std::vector<double> c_list = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  } family;

  struct HeteroclinicSection {
    // Runs get ~0.7 time units deeper per k (the unstable rate at f_minus);
    // 12 gives four runs covering the default [-5, 5] window.
    int k_max = 12;
    Window window;  // heteroclinic.window = t_lo,t_hi,x_lo,x_hi
  } heteroclinic;

  struct Tolerances {
    double newton_tol = 1e-10;
    double anchor_tol = 1e-3;
    double funnel_slack = 1e-10;
  } tolerances;

  std::string output_dir = "out";
  std::uint64_t seed = 12345;

  void validate() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Canonical rendering: every key on its own line, alphabetical within the
// declaration order above, doubles at full precision. Identical configs
// render to identical bytes (this is what the manifest hashes).
std::string config_text(const RunConfig& config);

// %.17g rendering used everywhere numbers are persisted.
std::string format_double(double v);

}  // namespace hetero

#endif
