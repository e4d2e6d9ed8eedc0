#ifndef PFHA_PIPELINE_HPP
#define PFHA_PIPELINE_HPP

#include <filesystem>
#include <map>
#include <vector>

#include "pfha/config.hpp"
#include "pfha/disagg.hpp"
#include "pfha/hazard.hpp"
#include "pfha/logictree.hpp"
#include "pfha/rates.hpp"
#include "pfha/validate.hpp"

namespace pfha {

struct GridProvider {
  NadirGrid grid;
  std::filesystem::path cache_path;
  bool cache_hit = false;
  std::size_t simulations = 0;
};

// Loads the grid from cache when the stored config hash matches; otherwise
// builds, saves, and reloads so in-memory values always equal the on-disk
// representation.
GridProvider obtain_grid(const SimConfig& sim, const GridAxes& axes,
                         const std::filesystem::path& cache_path, int threads);

struct Pipeline {
  Config config;
  Catalogue catalogue;  // pairs appended, rates applied
  std::vector<StateRecord> states;
  std::vector<StateBin> bins;
  std::vector<Incident> incidents;
  std::map<PriorClass, GammaPrior> priors;
  GridProvider grid;
  bool has_grid = false;
  bool state_dc_available = false;

  HazardInputs base_inputs() const;
};

Pipeline load_pipeline(const Config& config, int threads, bool need_grid);

// First line of every output table: tool version and config hash.
std::string provenance_line(const Config& config);

void write_hazard_outputs(const std::filesystem::path& out_dir, const Config& config,
                          const std::vector<double>& thresholds, const TreeResult& tree);
void write_defence_value(const std::filesystem::path& out_dir, const Config& config,
                         const std::vector<double>& thresholds,
                         const std::vector<DecompositionRow>& rows);
void write_summary_json(const std::filesystem::path& out_dir, const Config& config,
                        const std::vector<double>& thresholds, const TreeResult& tree);
void write_disagg(const std::filesystem::path& out_file, const Config& config,
                  const std::vector<DisaggCell>& cells);
void write_tornado(const std::filesystem::path& out_file, const Config& config,
                   const std::vector<TornadoRow>& rows);

}  // namespace pfha

#endif
