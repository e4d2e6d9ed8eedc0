#include "pfha/catalogue.hpp"

#include <algorithm>
#include <map>

#include "pfha/common.hpp"
#include "pfha/csv.hpp"

namespace pfha {

SourceType parse_source_type(const std::string& s) {
  if (s == "ccgt") return SourceType::ccgt;
  if (s == "interconnector") return SourceType::interconnector;
  if (s == "nuclear") return SourceType::nuclear;
  if (s == "biomass") return SourceType::biomass;
  if (s == "pumped_storage") return SourceType::pumped_storage;
  if (s == "wind") return SourceType::wind;
  if (s == "fleet_catchall") return SourceType::fleet_catchall;
  if (s == "pair") return SourceType::pair;
  if (s == "cascade") return SourceType::cascade;
  throw DataError("unknown source_type '" + s + "'");
}

PriorClass parse_prior_class(const std::string& s) {
  if (s == "ccgt") return PriorClass::ccgt;
  if (s == "interconnector") return PriorClass::interconnector;
  if (s == "nuclear") return PriorClass::nuclear;
  if (s == "biomass") return PriorClass::biomass;
  if (s == "pumped_storage") return PriorClass::pumped_storage;
  if (s == "wind") return PriorClass::wind;
  throw DataError("unknown prior_class '" + s + "'");
}

std::string to_string(SourceType t) {
  switch (t) {
    case SourceType::ccgt: return "ccgt";
    case SourceType::interconnector: return "interconnector";
    case SourceType::nuclear: return "nuclear";
    case SourceType::biomass: return "biomass";
    case SourceType::pumped_storage: return "pumped_storage";
    case SourceType::wind: return "wind";
    case SourceType::fleet_catchall: return "fleet_catchall";
    case SourceType::pair: return "pair";
    case SourceType::cascade: return "cascade";
  }
  return "?";
}

std::string to_string(PriorClass c) {
  switch (c) {
    case PriorClass::ccgt: return "ccgt";
    case PriorClass::interconnector: return "interconnector";
    case PriorClass::nuclear: return "nuclear";
    case PriorClass::biomass: return "biomass";
    case PriorClass::pumped_storage: return "pumped_storage";
    case PriorClass::wind: return "wind";
  }
  return "?";
}

const SourceRecord* Catalogue::find(const std::string& source_id) const {
  for (const auto& s : sources)
    if (s.source_id == source_id) return &s;
  return nullptr;
}

SourceRecord* Catalogue::find(const std::string& source_id) {
  for (auto& s : sources)
    if (s.source_id == source_id) return &s;
  return nullptr;
}

Catalogue load_catalogue(const std::filesystem::path& catalogue_file,
                         const std::filesystem::path& registry_file) {
  Catalogue cat;
  const Table t = read_delimited(catalogue_file);
  if (t.rows.empty()) {
    warn("catalogue file " + catalogue_file.string() + " holds no sources");
  } else {
    const int c_id = t.column("source_id");
    const int c_type = t.column("source_type");
    const int c_cap = t.column("capacity_mw");
    const int c_mcl = t.column("max_credible_loss_mw");
    const int c_prior = t.column("prior_class");
    const int c_bmus = t.column("bmu_ids");
    for (const auto& row : t.rows) {
      SourceRecord src;
      src.source_id = row.at(c_id);
      src.source_type = parse_source_type(row.at(c_type));
      src.capacity_mw = parse_double(row.at(c_cap), "catalogue capacity_mw");
      src.max_credible_loss_mw =
          parse_double(row.at(c_mcl), "catalogue max_credible_loss_mw");
      src.prior_class = parse_prior_class(row.at(c_prior));
      if (src.max_credible_loss_mw <= 0.0)
        throw DataError("source " + src.source_id + ": non-positive max credible loss");
      if (src.source_type != SourceType::pair && src.source_type != SourceType::cascade &&
          src.max_credible_loss_mw > src.capacity_mw)
        throw DataError("source " + src.source_id +
                        ": max credible loss exceeds capacity");
      for (const auto& bmu : split(row.at(c_bmus), ';'))
        if (!bmu.empty()) src.bmu_ids.push_back(bmu);
      if (cat.find(src.source_id))
        throw DataError("duplicate source_id '" + src.source_id + "'");
      cat.sources.push_back(std::move(src));
    }
  }

  // Registry rows and in-row bmu_ids merge into one mapping; a BMU listed
  // under two different sources is a data error either way.
  auto map_bmu = [&cat](const std::string& bmu, const std::string& source_id) {
    auto [it, inserted] = cat.bmu_to_source.emplace(bmu, source_id);
    if (!inserted && it->second != source_id)
      throw DataError("BMU '" + bmu + "' mapped to both '" + it->second + "' and '" +
                      source_id + "'");
  };
  for (const auto& src : cat.sources)
    for (const auto& bmu : src.bmu_ids) map_bmu(bmu, src.source_id);

  const Table reg = read_delimited(registry_file);
  if (!reg.rows.empty()) {
    const int c_bmu = reg.column("bmu_id");
    const int c_src = reg.column("source_id");
    for (const auto& row : reg.rows) {
      const std::string& sid = row.at(c_src);
      if (!cat.find(sid))
        throw DataError("registry names unknown source '" + sid + "'");
      map_bmu(row.at(c_bmu), sid);
    }
  }
  return cat;
}

void attach_generation_pmfs(Catalogue& catalogue,
                            const std::filesystem::path& generation_file,
                            double bin_width_mw, std::size_t min_samples) {
  const Table t = read_delimited(generation_file);
  if (t.rows.empty()) {
    warn("generation file " + generation_file.string() + " holds no records");
    return;
  }
  const int c_bmu = t.column("bmu_id");
  const int c_ts = t.column("timestamp_iso8601");
  const int c_mw = t.column("output_mw");

  // source -> settlement period -> summed output across that source's BMUs
  std::unordered_map<std::string, std::map<std::int64_t, double>> pooled;
  for (const auto& row : t.rows) {
    const auto it = catalogue.bmu_to_source.find(row.at(c_bmu));
    if (it == catalogue.bmu_to_source.end()) continue;
    const std::int64_t ts = parse_iso8601(row.at(c_ts));
    pooled[it->second][ts] += parse_double(row.at(c_mw), "generation output_mw");
  }

  for (auto& src : catalogue.sources) {
    const auto it = pooled.find(src.source_id);
    if (it == pooled.end()) continue;
    std::vector<GenerationSample> samples;
    samples.reserve(it->second.size());
    for (const auto& [ts, mw] : it->second) samples.push_back({ts, mw});
    src.pmf = build_pmf(samples, src.max_credible_loss_mw, bin_width_mw, min_samples);
  }
}

}  // namespace pfha
