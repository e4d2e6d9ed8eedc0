#ifndef PFHA_LAYERS_HPP
#define PFHA_LAYERS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "pfha/catalogue.hpp"
#include "pfha/common.hpp"
#include "pfha/pmf.hpp"

namespace pfha {

enum class Dependency { independent, common_cause, proximity, operator_coupled };
enum class Severity { moderate, severe, extreme };

Dependency parse_dependency(const std::string& text);
Severity parse_severity(const std::string& text);
std::string to_string(Dependency dep);
std::string to_string(Severity sev);

// Assessed co-occurrence rate by severity class when a pair has no explicit
// rate: moderate 0.10/yr (band 0.10-0.25), severe 0.03/yr, extreme 0.01/yr.
double severity_default_rate(Severity sev);

struct PairSpec {
  std::string pair_id;
  std::string source_id_a;
  std::string source_id_b;
  Dependency dependency = Dependency::independent;
  Severity severity = Severity::moderate;
  double rate_per_yr = 0.0;  // <= 0 means "use the severity default"
};

// Full discrete convolution on a shared loss lattice.
LossPMF convolve_pmfs(const LossPMF& a, const LossPMF& b);

// Simultaneous-pair source: convolved PMF, summed capacity and max credible
// loss, rate from the pair entry (or its severity-class default).
SourceRecord build_pair_source(const PairSpec& spec, const Catalogue& catalogue);

std::vector<PairSpec> load_pairs(const std::filesystem::path& path);

// Distributed-resource cascade, gated on the initiating RoCoF.
struct CascadeSpec {
  double rocof_threshold_hz_per_s = 0.125;
  double p_cond = 0.3;
  double der_loss_mw = 350.0;

  void validate() const;
};

struct CascadeTerm {
  double effective_loss_mw = 0.0;
  double probability_weight = 1.0;
};

// Below the RoCoF gate the loss passes through unchanged; at or above it the
// cell splits into a no-cascade branch and a branch with the extra loss.
std::vector<CascadeTerm> cascade_adjusted_terms(double loss_mw, double inertia_gva_s,
                                                const CascadeSpec& spec,
                                                double f0 = kNominalFrequencyHz);

}  // namespace pfha

#endif
