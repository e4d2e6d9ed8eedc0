#ifndef PFHA_CATALOGUE_HPP
#define PFHA_CATALOGUE_HPP

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "pfha/pmf.hpp"

namespace pfha {

enum class SourceType {
  ccgt,
  interconnector,
  nuclear,
  biomass,
  pumped_storage,
  wind,
  fleet_catchall,
  pair,
  cascade,
};

// Technology classes carrying the Gamma rate priors.
enum class PriorClass { ccgt, interconnector, nuclear, biomass, pumped_storage, wind };

SourceType parse_source_type(const std::string& s);
PriorClass parse_prior_class(const std::string& s);
std::string to_string(SourceType t);
std::string to_string(PriorClass c);

struct SourceRecord {
  std::string source_id;
  SourceType source_type = SourceType::ccgt;
  double capacity_mw = 0.0;
  double max_credible_loss_mw = 0.0;
  std::vector<std::string> bmu_ids;
  PriorClass prior_class = PriorClass::ccgt;
  double trip_rate_per_yr = 0.0;  // filled by the rates module
  LossPMF pmf;
};

struct Catalogue {
  std::vector<SourceRecord> sources;
  std::unordered_map<std::string, std::string> bmu_to_source;

  const SourceRecord* find(const std::string& source_id) const;
  SourceRecord* find(const std::string& source_id);
};

// Catalogue file columns:
//   source_id,source_type,capacity_mw,max_credible_loss_mw,prior_class,bmu_ids
// with bmu_ids semicolon-separated. Registry file columns: bmu_id,source_id.
// Rejects duplicate source ids and any BMU mapped to two sources.
Catalogue load_catalogue(const std::filesystem::path& catalogue_file,
                         const std::filesystem::path& registry_file);

// Generation records file columns: bmu_id,timestamp_iso8601,output_mw.
// Sums output across a source's BMUs per settlement period and builds the
// empirical loss PMF for every source with mapped BMUs.
void attach_generation_pmfs(Catalogue& catalogue,
                            const std::filesystem::path& generation_file,
                            double bin_width_mw, std::size_t min_samples = 100);

}  // namespace pfha

#endif
