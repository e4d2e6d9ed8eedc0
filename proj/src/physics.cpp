#include "pfha/physics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "pfha/csv.hpp"
#include "pfha/mathutil.hpp"

namespace pfha {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// Linear ramp factor: 0 before the delay, 1 once the ramp completes.
double ramp_factor(double t_s, double delay_s, double ramp_s) {
  if (t_s <= delay_s) return 0.0;
  if (ramp_s <= 0.0) return 1.0;
  return clamp01((t_s - delay_s) / ramp_s);
}

}  // namespace

void SimConfig::validate() const {
  if (!(f0 > 0.0)) throw ConfigError("simulator nominal frequency must be positive");
  if (!(step_s > 0.0)) throw ConfigError("simulator step must be positive");
  if (!(horizon_s >= 30.0)) throw ConfigError("simulator horizon must be at least 30 s");
  if (!(load_damping_coeff >= 0.0)) throw ConfigError("load damping must be non-negative");
  if (!(governor.droop > 0.0)) throw ConfigError("governor droop must be positive");
  if (!(dc.full_delivery_hz > dc.deadband_hz))
    throw ConfigError("HVDC full-delivery deviation must exceed the deadband");
  for (const auto* svc : {&dm, &dr}) {
    if (!(svc->band_hi_hz > svc->band_lo_hz))
      throw ConfigError("service band upper edge must exceed the lower edge");
    if (svc->volume_fraction < 0.0)
      throw ConfigError("service volume fraction must be non-negative");
  }
  for (const auto& block : static_response) {
    if (!(block.trigger_deviation_hz > 0.0) || !(block.trigger_deviation_hz < f0))
      throw ConfigError("static block trigger must lie below nominal frequency");
  }
}

std::string SimConfig::canonical_string() const {
  std::ostringstream os;
  os << "f0=" << format_full(f0) << "\n"
     << "step_s=" << format_full(step_s) << "\n"
     << "horizon_s=" << format_full(horizon_s) << "\n"
     << "load_damping_coeff=" << format_full(load_damping_coeff) << "\n"
     << "governor=" << format_full(governor.delay_s) << "," << format_full(governor.ramp_s)
     << "," << format_full(governor.droop) << "\n"
     << "dc=" << format_full(dc.deadband_hz) << "," << format_full(dc.full_delivery_hz)
     << "," << format_full(dc.delay_s) << "," << format_full(dc.ramp_s) << ","
     << format_full(dc.creep_fraction) << "," << format_full(dc.creep_ramp_s) << "\n";
  for (const auto& [name, svc] : {std::pair{"dm", &dm}, std::pair{"dr", &dr}}) {
    os << name << "=" << format_full(svc->volume_fraction) << ","
       << format_full(svc->band_lo_hz) << "," << format_full(svc->band_hi_hz) << ","
       << format_full(svc->delay_s) << "," << format_full(svc->ramp_s) << "\n";
  }
  for (const auto& block : static_response) {
    os << "static=" << format_full(block.trigger_deviation_hz) << ","
       << format_full(block.block_mw) << "\n";
  }
  return os.str();
}

SimResult simulate_trajectory(double loss_mw, double inertia_gva_s, double demand_gw,
                              double response_mw, double dc_effective_mw,
                              const SimConfig& config, bool keep_trajectory) {
  config.validate();
  if (!(inertia_gva_s > 0.0)) throw ConfigError("inertia must be positive for simulation");
  if (!(demand_gw > 0.0)) throw ConfigError("demand must be positive for simulation");
  if (loss_mw < 0.0 || response_mw < 0.0 || dc_effective_mw < 0.0)
    throw ConfigError("simulation inputs must be non-negative");

  const double m = 2.0 * inertia_gva_s * 1000.0 / config.f0;  // MW per (Hz/s)
  const double damping_mw_per_hz = config.load_damping_coeff * demand_gw * 1000.0;
  const double governor_gain = response_mw / (config.governor.droop * config.f0);

  std::vector<char> latched(config.static_response.size(), 0);

  // Total MW injected (plus load relief) at time t with deviation x; static
  // latch states are frozen across a step.
  auto relief = [&](double t, double x) {
    double total = damping_mw_per_hz * x;
    const double gov_target = std::clamp(governor_gain * x, 0.0, response_mw);
    total += ramp_factor(t, config.governor.delay_s, config.governor.ramp_s) * gov_target;
    const double dc_frac =
        clamp01((x - config.dc.deadband_hz) /
                (config.dc.full_delivery_hz - config.dc.deadband_hz));
    const double dc_base = ramp_factor(t, config.dc.delay_s, config.dc.ramp_s);
    const double dc_creep =
        config.dc.creep_fraction *
        ramp_factor(t, config.dc.delay_s + config.dc.ramp_s, config.dc.creep_ramp_s);
    total += dc_effective_mw * dc_frac * (dc_base + dc_creep);
    for (const auto* svc : {&config.dm, &config.dr}) {
      const double frac = clamp01((x - svc->band_lo_hz) / (svc->band_hi_hz - svc->band_lo_hz));
      total += svc->volume_fraction * response_mw * frac *
               ramp_factor(t, svc->delay_s, svc->ramp_s);
    }
    for (std::size_t i = 0; i < latched.size(); ++i)
      if (latched[i]) total += config.static_response[i].block_mw;
    return total;
  };

  auto rhs = [&](double t, double x) { return (loss_mw - relief(t, x)) / m; };

  SimResult result;
  const auto steps = static_cast<std::size_t>(std::ceil(config.horizon_s / config.step_s));
  if (keep_trajectory) result.trajectory.reserve(steps + 1);

  double t = 0.0;
  double x = 0.0;  // deviation below nominal, Hz
  double nadir = 0.0;
  const double h = config.step_s;
  if (keep_trajectory) result.trajectory.push_back({0.0, 0.0, loss_mw});

  for (std::size_t n = 0; n < steps; ++n) {
    const double k1 = rhs(t, x);
    const double k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
    const double k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
    const double k4 = rhs(t + h, x + h * k3);
    x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    if (!std::isfinite(x))
      throw NumericError("frequency trajectory diverged at t=" + format_g9(t) + " s");
    for (std::size_t i = 0; i < latched.size(); ++i)
      if (!latched[i] && x >= config.static_response[i].trigger_deviation_hz) latched[i] = 1;
    nadir = std::max(nadir, x);
    if (keep_trajectory) result.trajectory.push_back({t, x, loss_mw - relief(t, x)});
  }
  result.nadir_hz = nadir;
  return result;
}

double simulate_nadir(double loss_mw, double inertia_gva_s, double demand_gw,
                      double response_mw, double dc_effective_mw, const SimConfig& config) {
  return simulate_trajectory(loss_mw, inertia_gva_s, demand_gw, response_mw,
                             dc_effective_mw, config, false)
      .nadir_hz;
}

GridAxes GridAxes::defaults() {
  GridAxes axes;
  auto fill = [](std::vector<double>& v, double lo, double hi, std::size_t n) {
    v.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  fill(axes.loss_mw, 200.0, 1800.0, 7);
  fill(axes.inertia_gva_s, 80.0, 350.0, 7);
  fill(axes.demand_gw, 15.0, 45.0, 5);
  fill(axes.response_mw, 500.0, 3000.0, 5);
  fill(axes.dc_mw, 0.0, 1200.0, 5);
  return axes;
}

std::size_t NadirGrid::primary_points() const {
  std::size_t n = 1;
  for (std::size_t d = 0; d < kDims; ++d) n *= primary_[d];
  return n;
}

std::size_t NadirGrid::flat_index(const std::array<std::size_t, kDims>& idx) const {
  std::size_t flat = 0;
  for (std::size_t d = 0; d < kDims; ++d) {
    if (idx[d] >= axes_[d].size()) throw NumericError("grid index out of range");
    flat = flat * axes_[d].size() + idx[d];
  }
  return flat;
}

double NadirGrid::value_at(const std::array<std::size_t, kDims>& idx) const {
  return values_[flat_index(idx)];
}

bool NadirGrid::boundary_filled_at(const std::array<std::size_t, kDims>& idx) const {
  return boundary_filled_[flat_index(idx)] != 0;
}

double NadirGrid::interpolate(double loss_mw, double inertia_gva_s, double demand_gw,
                              double response_mw, double dc_mw) const {
  std::array<double, kDims> q{loss_mw, inertia_gva_s, demand_gw, response_mw, dc_mw};
  static const char* kNames[kDims] = {"loss", "inertia", "demand", "response", "dc"};
  std::array<std::size_t, kDims> lo{};
  std::array<double, kDims> frac{};
  for (std::size_t d = 0; d < kDims; ++d) {
    const auto& axis = axes_[d];
    double v = q[d];
    if (v < axis.front() || v > axis.back()) {
      warn("grid query clamped on " + std::string(kNames[d]) + " axis: " + format_g9(v) +
           " outside [" + format_g9(axis.front()) + ", " + format_g9(axis.back()) + "]");
      v = std::clamp(v, axis.front(), axis.back());
    }
    auto it = std::upper_bound(axis.begin(), axis.end(), v);
    std::size_t hi = std::clamp<std::size_t>(static_cast<std::size_t>(it - axis.begin()),
                                             1, axis.size() - 1);
    lo[d] = hi - 1;
    const double span = axis[hi] - axis[lo[d]];
    frac[d] = span > 0.0 ? (v - axis[lo[d]]) / span : 0.0;
  }
  double acc = 0.0;
  for (unsigned corner = 0; corner < (1u << kDims); ++corner) {
    double weight = 1.0;
    std::array<std::size_t, kDims> idx{};
    for (std::size_t d = 0; d < kDims; ++d) {
      const bool upper = (corner >> d) & 1u;
      idx[d] = lo[d] + (upper ? 1 : 0);
      weight *= upper ? frac[d] : 1.0 - frac[d];
    }
    if (weight != 0.0) acc += weight * values_[flat_index(idx)];
  }
  return acc;
}

std::uint64_t grid_config_hash(const SimConfig& config, const GridAxes& axes) {
  std::ostringstream os;
  os << config.canonical_string();
  for (const auto* axis :
       {&axes.loss_mw, &axes.inertia_gva_s, &axes.demand_gw, &axes.response_mw, &axes.dc_mw}) {
    os << "axis";
    for (double v : *axis) os << "," << format_full(v);
    os << "\n";
  }
  return fnv1a_hash(os.str());
}

NadirGrid build_grid(const SimConfig& config, const GridAxes& axes, int threads) {
  config.validate();
  NadirGrid grid;
  grid.config_hash_ = grid_config_hash(config, axes);

  const std::array<const std::vector<double>*, 5> primary_axes{
      &axes.loss_mw, &axes.inertia_gva_s, &axes.demand_gw, &axes.response_mw, &axes.dc_mw};
  for (std::size_t d = 0; d < NadirGrid::kDims; ++d) {
    if (primary_axes[d]->size() < 2) throw ConfigError("grid axes need at least two values");
    if (!std::is_sorted(primary_axes[d]->begin(), primary_axes[d]->end()))
      throw ConfigError("grid axis values must be strictly increasing");
    grid.primary_[d] = primary_axes[d]->size();
    grid.axes_[d] = *primary_axes[d];
  }

  // Extend the loss axis six uniform steps past the top so pair events up to
  // twice the largest single loss interpolate rather than clamp, and demand
  // one step for cold peaks; the added shells are nearest-neighbour fills.
  auto extend = [](std::vector<double>& axis, std::size_t extra) {
    const double step = axis[axis.size() - 1] - axis[axis.size() - 2];
    for (std::size_t i = 0; i < extra; ++i) axis.push_back(axis.back() + step);
  };
  extend(grid.axes_[0], 6);
  extend(grid.axes_[2], 1);

  std::array<std::size_t, 5> dims{};
  std::size_t total = 1;
  for (std::size_t d = 0; d < NadirGrid::kDims; ++d) {
    dims[d] = grid.axes_[d].size();
    total *= dims[d];
  }
  grid.values_.assign(total, 0.0);
  grid.boundary_filled_.assign(total, 0);

  std::size_t primary_total = 1;
  for (std::size_t d = 0; d < NadirGrid::kDims; ++d) primary_total *= grid.primary_[d];

  unsigned nthreads = threads > 0 ? static_cast<unsigned>(threads)
                                  : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min<unsigned>(nthreads, 64);

  auto unflatten_primary = [&](std::size_t p) {
    std::array<std::size_t, 5> idx{};
    for (std::size_t d = NadirGrid::kDims; d-- > 0;) {
      idx[d] = p % grid.primary_[d];
      p /= grid.primary_[d];
    }
    return idx;
  };

  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const auto idx = unflatten_primary(p);
      double nadir;
      try {
        nadir = simulate_nadir(grid.axes_[0][idx[0]], grid.axes_[1][idx[1]],
                               grid.axes_[2][idx[2]], grid.axes_[3][idx[3]],
                               grid.axes_[4][idx[4]], config);
      } catch (const NumericError& e) {
        throw NumericError(std::string(e.what()) + " at grid node loss=" +
                           format_g9(grid.axes_[0][idx[0]]) + " inertia=" +
                           format_g9(grid.axes_[1][idx[1]]));
      }
      grid.values_[grid.flat_index(idx)] = nadir;
    }
  };

  if (nthreads <= 1) {
    run_range(0, primary_total);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nthreads);
    const std::size_t chunk = (primary_total + nthreads - 1) / nthreads;
    for (unsigned ti = 0; ti < nthreads; ++ti) {
      const std::size_t begin = std::min(primary_total, ti * chunk);
      const std::size_t end = std::min(primary_total, begin + chunk);
      pool.emplace_back([&, ti, begin, end] {
        try {
          run_range(begin, end);
        } catch (...) {
          errors[ti] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  // Outer shells copy the nearest simulated node.
  std::array<std::size_t, 5> idx{};
  for (idx[0] = 0; idx[0] < dims[0]; ++idx[0])
    for (idx[1] = 0; idx[1] < dims[1]; ++idx[1])
      for (idx[2] = 0; idx[2] < dims[2]; ++idx[2])
        for (idx[3] = 0; idx[3] < dims[3]; ++idx[3])
          for (idx[4] = 0; idx[4] < dims[4]; ++idx[4]) {
            bool primary = true;
            for (std::size_t d = 0; d < NadirGrid::kDims; ++d)
              if (idx[d] >= grid.primary_[d]) primary = false;
            if (primary) continue;
            auto src = idx;
            for (std::size_t d = 0; d < NadirGrid::kDims; ++d)
              src[d] = std::min(src[d], grid.primary_[d] - 1);
            const std::size_t flat = grid.flat_index(idx);
            grid.values_[flat] = grid.values_[grid.flat_index(src)];
            grid.boundary_filled_[flat] = 1;
          }
  return grid;
}

void NadirGrid::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write grid file: " + path.string());
  out << "pfha-nadir-grid 1\n";
  char hash_buf[32];
  std::snprintf(hash_buf, sizeof hash_buf, "%016llx",
                static_cast<unsigned long long>(config_hash_));
  out << "config_hash " << hash_buf << "\n";
  static const char* kNames[kDims] = {"loss_mw", "inertia_gva_s", "demand_gw",
                                      "response_mw", "dc_mw"};
  for (std::size_t d = 0; d < kDims; ++d) {
    out << "axis " << kNames[d] << " " << axes_[d].size();
    for (double v : axes_[d]) out << " " << format_g9(v);
    out << "\n";
  }
  out << "primary";
  for (std::size_t d = 0; d < kDims; ++d) out << " " << primary_[d];
  out << "\n";
  out << "values " << values_.size() << "\n";
  for (double v : values_) out << format_g9(v) << "\n";
  out << "mask " << boundary_filled_.size() << "\n";
  for (char m : boundary_filled_) out << (m ? '1' : '0') << "\n";
  if (!out) throw DataError("failed while writing grid file: " + path.string());
}

NadirGrid NadirGrid::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open grid file: " + path.string());
  std::string line;
  auto next_line = [&](const char* what) {
    if (!std::getline(in, line))
      throw DataError("grid file truncated before " + std::string(what) + ": " + path.string());
    return line;
  };
  if (next_line("format line") != "pfha-nadir-grid 1")
    throw DataError("unrecognised grid file format: " + path.string());

  NadirGrid grid;
  {
    std::istringstream is(next_line("config hash"));
    std::string tag, hex;
    is >> tag >> hex;
    if (tag != "config_hash" || hex.empty())
      throw DataError("grid file missing config hash: " + path.string());
    grid.config_hash_ = std::stoull(hex, nullptr, 16);
  }
  for (std::size_t d = 0; d < kDims; ++d) {
    std::istringstream is(next_line("axis"));
    std::string tag, name;
    std::size_t count = 0;
    is >> tag >> name >> count;
    if (tag != "axis" || count < 2)
      throw DataError("malformed axis line in grid file: " + path.string());
    grid.axes_[d].resize(count);
    for (std::size_t i = 0; i < count; ++i)
      if (!(is >> grid.axes_[d][i]))
        throw DataError("axis values truncated in grid file: " + path.string());
  }
  {
    std::istringstream is(next_line("primary counts"));
    std::string tag;
    is >> tag;
    if (tag != "primary") throw DataError("grid file missing primary counts: " + path.string());
    for (std::size_t d = 0; d < kDims; ++d) {
      if (!(is >> grid.primary_[d]) || grid.primary_[d] < 2 ||
          grid.primary_[d] > grid.axes_[d].size())
        throw DataError("invalid primary counts in grid file: " + path.string());
    }
  }
  std::size_t total = 1;
  for (std::size_t d = 0; d < kDims; ++d) total *= grid.axes_[d].size();
  {
    std::istringstream is(next_line("values header"));
    std::string tag;
    std::size_t count = 0;
    is >> tag >> count;
    if (tag != "values" || count != total)
      throw DataError("grid value count mismatch: " + path.string());
  }
  grid.values_.resize(total);
  for (std::size_t i = 0; i < total; ++i)
    grid.values_[i] = parse_double(next_line("grid values"), "grid value");
  {
    std::istringstream is(next_line("mask header"));
    std::string tag;
    std::size_t count = 0;
    is >> tag >> count;
    if (tag != "mask" || count != total)
      throw DataError("grid mask count mismatch: " + path.string());
  }
  grid.boundary_filled_.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    const std::string& m = next_line("grid mask");
    if (m != "0" && m != "1")
      throw DataError("grid mask entries must be 0 or 1: " + path.string());
    grid.boundary_filled_[i] = (m == "1") ? 1 : 0;
  }
  return grid;
}

}  // namespace pfha
