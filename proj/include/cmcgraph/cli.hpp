// Command-line front end: INI configuration, solve / verify / predicates /
// catalog / sweep, artifact output and exit codes.
//
// Exit codes: 0 success, 1 unexpected failure, 2 solver failure that the
// solvability predicates predicted, 3 configuration error.
#pragma once

#include "cmcgraph/discretization.hpp"
#include "cmcgraph/domain.hpp"
#include "cmcgraph/solver.hpp"

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmc::cli {

enum ExitCode : int { kOk = 0, kUnexpected = 1, kPredictedFailure = 2, kConfigError = 3 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CatalogSettings {
  std::string surface = "profile";  // profile | barrier | euclid-cap | lorentz-cap | euclid-cylinder | ...
  double rho = 1.0;
  double half_width = 0.5;
  double c = -1.0;
  double r_min = 1e-3;
  double extent = 1.0;
  int samples = 41;
};

struct RunConfig {
  std::string command;
  std::map<std::string, std::string> domain{{"shape", "disk"}, {"center", "0,0"}, {"radius", "1"}};
  double H = 0.0;
  Signature signature = Signature::Euclidean;
  double h = 1.0 / 64.0;
  std::string boundary_data = "zero";  // zero | linear:a,b,c (a + b x + c y)
  int phi_samples = 1024;
  ContinuationConfig continuation;
  std::string out_dir = "out";
  int jobs = 1;
  std::vector<double> sweep_H;
  std::vector<Signature> sweep_signatures;
  CatalogSettings catalog;
};

/// Parses INI text; unknown sections or keys raise ConfigError naming them.
RunConfig parse_config_text(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
/// Effective configuration with every default filled in; parses back to an
/// identical RunConfig.
std::string to_ini(const RunConfig& cfg);

/// `disk`, `disk:cx,cy,r`, `rectangle:x,y,w,h`, `polygon:file.csv`,
/// `ellipse:a,b`, `star:r0,amplitude,lobes` -> [domain] keys.
std::map<std::string, std::string> parse_domain_spec(const std::string& spec);
Domain build_domain(const std::map<std::string, std::string>& keys);
BoundaryData build_boundary_data(const std::string& spec);

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);
/// Full command line without the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cmc::cli
