#ifndef PFHA_SYNTH_HPP
#define PFHA_SYNTH_HPP

#include <cstdint>
#include <filesystem>

namespace pfha {

struct SynthSpec {
  std::uint64_t seed = 1;
  std::size_t n_states = 5000;
  std::size_t generation_periods = 3000;  // half-hourly settlement periods
  double observation_years = 10.0;
};

struct SynthSummary {
  std::filesystem::path config_path;
  std::size_t sources = 0;
  std::size_t generation_rows = 0;
  std::size_t states = 0;
  std::size_t incidents = 0;
  std::size_t pairs = 0;
};

// Writes a self-contained synthetic scenario (catalogue, BMU registry,
// generation history, incidents, system states, pair specs, priors, and a
// ready-to-run config). Deterministic: one seed, one byte stream.
SynthSummary generate_synthetic(const SynthSpec& spec,
                                const std::filesystem::path& out_dir);

}  // namespace pfha

#endif
