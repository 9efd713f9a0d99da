#include "secsim/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace secsim {

std::optional<PathLossExponents> measured_exponents(double carrier_hz) {
  struct Row {
    double ghz;
    PathLossExponents exps;
  };
  static constexpr Row kTable[] = {{28.0, {2.0, 3.0}}, {38.0, {2.0, 3.71}}, {60.0, {2.25, 3.76}}};
  for (const auto& row : kTable) {
    if (std::abs(carrier_hz - row.ghz * 1e9) < 1.0) return row.exps;
  }
  return std::nullopt;
}

PathLossExponents SystemParams::exponents() const {
  if (alpha_los && alpha_nlos) return {*alpha_los, *alpha_nlos};
  auto table = measured_exponents(carrier_freq);
  if (!table) {
    throw ConfigError("no measured path-loss exponents for carrier " +
                      std::to_string(carrier_freq / 1e9) +
                      " GHz; set alphaLos and alphaNlos explicitly");
  }
  return {alpha_los.value_or(table->los), alpha_nlos.value_or(table->nlos)};
}

double SystemParams::effective_bs_density() const {
  if (bs_density) return *bs_density;
  return static_cast<double>(num_bs) / (kPi * comm_radius * comm_radius);
}

double noise_power(double bandwidth_hz, double noise_figure_db) {
  if (!(bandwidth_hz > 0.0)) throw std::domain_error("noise_power: bandwidth must be positive");
  return dbm_to_watts(kThermalFloorDbmPerHz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db);
}

double SystemParams::noise_power() const {
  switch (noise_mode) {
    case NoiseMode::Bandwidth:
      return secsim::noise_power(bandwidth, noise_figure);
    case NoiseMode::PaperLiteral:
      // The published expression carries a literal "10 log10 10".
      return secsim::noise_power(10.0, noise_figure);
    case NoiseMode::Off:
      return 0.0;
  }
  return 0.0;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("key '" + key + "': expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

int parse_int(const std::string& key, std::string_view v) {
  int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("key '" + key + "': expected an unsigned integer, got '" +
                      std::string(v) + "'");
  }
  return out;
}

std::pair<double, double> parse_pair(const std::string& key, std::string_view v) {
  auto sep = v.find_first_of(",x");
  if (sep == std::string_view::npos) {
    throw ConfigError("key '" + key + "': expected a pair 'a,b' or 'AxB'");
  }
  return {parse_double(key, trim(v.substr(0, sep))), parse_double(key, trim(v.substr(sep + 1)))};
}

template <typename Enum>
Enum parse_enum(const std::string& key, std::string_view v,
                std::initializer_list<std::pair<std::string_view, Enum>> choices) {
  std::string allowed;
  for (const auto& [name, value] : choices) {
    if (name == v) return value;
    allowed += allowed.empty() ? "" : "|";
    allowed += name;
  }
  throw ConfigError("key '" + key + "': expected one of " + allowed + ", got '" +
                    std::string(v) + "'");
}

using Setter = std::function<void(SystemParams&, const std::string& key, std::string_view)>;

Setter num(double SystemParams::*field) {
  return [field](SystemParams& p, const std::string& k, std::string_view v) {
    p.*field = parse_double(k, v);
  };
}

Setter opt_num(std::optional<double> SystemParams::*field) {
  return [field](SystemParams& p, const std::string& k, std::string_view v) {
    if (v == "auto" || v.empty()) {
      (p.*field).reset();
    } else {
      p.*field = parse_double(k, v);
    }
  };
}

Setter integer(int SystemParams::*field) {
  return [field](SystemParams& p, const std::string& k, std::string_view v) {
    p.*field = parse_int(k, v);
  };
}

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = [] {
    std::vector<std::pair<std::string, Setter>> t;
    t.emplace_back("txPowerDbm", [](SystemParams& p, const std::string& k, std::string_view v) {
      p.tx_power = dbm_to_watts(parse_double(k, v));
    });
    t.emplace_back("txPower", num(&SystemParams::tx_power));
    t.emplace_back("carrierFreq", num(&SystemParams::carrier_freq));
    t.emplace_back("carrierFreqGhz", [](SystemParams& p, const std::string& k, std::string_view v) {
      p.carrier_freq = parse_double(k, v) * 1e9;
    });
    t.emplace_back("tsRatio", num(&SystemParams::ts_ratio));
    t.emplace_back("eta", num(&SystemParams::ts_ratio));
    t.emplace_back("sinrThresholdDb", [](SystemParams& p, const std::string& k, std::string_view v) {
      p.sinr_threshold = db_to_linear(parse_double(k, v));
    });
    t.emplace_back("bsDensity", opt_num(&SystemParams::bs_density));
    t.emplace_back("eveDensity", num(&SystemParams::eve_density));
    t.emplace_back("obstacleDensity", num(&SystemParams::obstacle_density));
    t.emplace_back("reflectionCoeff", num(&SystemParams::reflection_coeff));
    t.emplace_back("rho", num(&SystemParams::reflection_coeff));
    t.emplace_back("alphaLos", opt_num(&SystemParams::alpha_los));
    t.emplace_back("alphaNlos", opt_num(&SystemParams::alpha_nlos));
    t.emplace_back("refDistance", num(&SystemParams::ref_distance));
    t.emplace_back("bsHeight", num(&SystemParams::bs_height));
    t.emplace_back("eveHeight", num(&SystemParams::eve_height));
    t.emplace_back("userHeight", num(&SystemParams::user_height));
    t.emplace_back("obstacleLengthMean", num(&SystemParams::obstacle_length_mean));
    t.emplace_back("obstacleWidthMean", num(&SystemParams::obstacle_width_mean));
    t.emplace_back("obstacleHeightMin", num(&SystemParams::obstacle_height_min));
    t.emplace_back("obstacleHeightMax", num(&SystemParams::obstacle_height_max));
    t.emplace_back("obstacleHeightRange",
                   [](SystemParams& p, const std::string& k, std::string_view v) {
                     auto [lo, hi] = parse_pair(k, v);
                     p.obstacle_height_min = lo;
                     p.obstacle_height_max = hi;
                   });
    t.emplace_back("heightLaw", [](SystemParams& p, const std::string& k, std::string_view v) {
      p.height_law = parse_enum<HeightLaw>(
          k, v, {{"uniform", HeightLaw::Uniform}, {"triangular", HeightLaw::Triangular}});
    });
    t.emplace_back("sizeLaw", [](SystemParams& p, const std::string& k, std::string_view v) {
      p.size_law =
          parse_enum<SizeLaw>(k, v, {{"fixed", SizeLaw::Fixed}, {"uniform", SizeLaw::Uniform}});
    });
    t.emplace_back("reflectorFraction", num(&SystemParams::reflector_fraction));
    t.emplace_back("nElementsTx", integer(&SystemParams::n_elements_tx));
    t.emplace_back("nElementsRx", integer(&SystemParams::n_elements_rx));
    t.emplace_back("nElements", [](SystemParams& p, const std::string& k, std::string_view v) {
      p.n_elements_tx = p.n_elements_rx = parse_int(k, v);
    });
    t.emplace_back("beamwidthRad", opt_num(&SystemParams::beamwidth));
    t.emplace_back("mainLobeGain", opt_num(&SystemParams::main_lobe_gain));
    t.emplace_back("sideLobeGain", opt_num(&SystemParams::side_lobe_gain));
    t.emplace_back("misalignmentSigma", num(&SystemParams::misalignment_sigma));
    t.emplace_back("sigmaMisalign", num(&SystemParams::misalignment_sigma));
    t.emplace_back("misalignMode", [](SystemParams& p, const std::string& k, std::string_view v) {
      p.misalign_mode = parse_enum<MisalignMode>(
          k, v,
          {{"paperLiteral", MisalignMode::PaperLiteral},
           {"oneSidedRenormalized", MisalignMode::OneSidedRenormalized}});
    });
    t.emplace_back("gainClampMode", [](SystemParams& p, const std::string& k, std::string_view v) {
      p.gain_clamp_mode = parse_enum<GainClampMode>(
          k, v, {{"error", GainClampMode::Error}, {"swapSafe", GainClampMode::SwapSafe}});
    });
    t.emplace_back("commRadius", num(&SystemParams::comm_radius));
    t.emplace_back("mapSize", [](SystemParams& p, const std::string& k, std::string_view v) {
      auto [w, h] = parse_pair(k, v);
      p.map_width = w;
      p.map_height = h;
    });
    t.emplace_back("mapWidth", num(&SystemParams::map_width));
    t.emplace_back("mapHeight", num(&SystemParams::map_height));
    t.emplace_back("mapGranularity", num(&SystemParams::map_granularity));
    t.emplace_back("bandwidth", num(&SystemParams::bandwidth));
    t.emplace_back("noiseFigure", num(&SystemParams::noise_figure));
    t.emplace_back("noiseMode", [](SystemParams& p, const std::string& k, std::string_view v) {
      p.noise_mode = parse_enum<NoiseMode>(k, v,
                                           {{"bandwidth", NoiseMode::Bandwidth},
                                            {"paperLiteral", NoiseMode::PaperLiteral},
                                            {"off", NoiseMode::Off}});
    });
    auto interference = [](SystemParams& p, const std::string& k, std::string_view v) {
      p.interference_mode = parse_enum<InterferenceMode>(
          k, v,
          {{"regularized", InterferenceMode::Regularized},
           {"paperFaithful", InterferenceMode::PaperFaithful}});
    };
    t.emplace_back("interferenceMode", interference);
    t.emplace_back("mode", interference);
    t.emplace_back("espEvalDistance", opt_num(&SystemParams::esp_eval_distance));
    t.emplace_back("reflectionAngle", num(&SystemParams::reflection_angle));
    t.emplace_back("reflectionDelayFactor", num(&SystemParams::reflection_delay_factor));
    t.emplace_back("numBs", integer(&SystemParams::num_bs));
    t.emplace_back("nb", integer(&SystemParams::num_bs));
    t.emplace_back("bsPlacement", [](SystemParams& p, const std::string& k, std::string_view v) {
      p.bs_placement = parse_enum<BsPlacement>(
          k, v, {{"fixed", BsPlacement::FixedCount}, {"ppp", BsPlacement::Ppp}});
    });
    t.emplace_back("combining", [](SystemParams& p, const std::string& k, std::string_view v) {
      p.combining = parse_enum<Combining>(
          k, v, {{"pooled", Combining::Pooled}, {"branchSum", Combining::BranchSum}});
    });
    t.emplace_back("bsGainTowardEve",
                   [](SystemParams& p, const std::string& k, std::string_view v) {
                     p.bs_gain_toward_eve = parse_enum<BsGainTowardEve>(
                         k, v,
                         {{"bernoulli", BsGainTowardEve::Bernoulli},
                          {"alwaysMain", BsGainTowardEve::AlwaysMain},
                          {"alwaysSide", BsGainTowardEve::AlwaysSide}});
                   });
    t.emplace_back("eveDistanceMin", num(&SystemParams::eve_distance_min));
    t.emplace_back("eveDistanceMax", num(&SystemParams::eve_distance_max));
    t.emplace_back("trialsPerWorld", integer(&SystemParams::trials_per_world));
    t.emplace_back("rngSeed", [](SystemParams& p, const std::string& k, std::string_view v) {
      p.rng_seed = parse_u64(k, v);
    });
    t.emplace_back("seed", [](SystemParams& p, const std::string& k, std::string_view v) {
      p.rng_seed = parse_u64(k, v);
    });
    return t;
  }();
  return table;
}

const Setter& find_setter(const std::string& key) {
  static const std::unordered_map<std::string, const Setter*> index = [] {
    std::unordered_map<std::string, const Setter*> m;
    for (const auto& [k, s] : setters()) m.emplace(k, &s);
    return m;
  }();
  auto it = index.find(key);
  if (it == index.end()) throw ConfigError("unknown key '" + key + "'");
  return *it->second;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

ParamsBuilder& ParamsBuilder::apply_text(std::string_view text, std::string_view origin) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto eq = line.find('=');
    auto where = std::string(origin) + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) {
      throw ConfigError(where + ": expected key=value, got '" + std::string(line) + "'");
    }
    try {
      set(std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), where);
    } catch (const ConfigError& e) {
      if (std::string_view(e.what()).starts_with(where)) throw;
      throw ConfigError(where + ": " + e.what());
    }
    if (end == text.size()) break;
  }
  return *this;
}

ParamsBuilder& ParamsBuilder::set(const std::string& key, const std::string& value,
                                  std::string_view origin) {
  // Parse now so errors point at the offending source.
  SystemParams scratch;
  find_setter(key)(scratch, key, value);
  assignments_.push_back({key, value, std::string(origin)});
  return *this;
}

ParamsBuilder& ParamsBuilder::apply_env() {
  if (const char* seed = std::getenv("ESP_SEED"); seed != nullptr && *seed != '\0') {
    set("rngSeed", seed, "env ESP_SEED");
  }
  return *this;
}

SystemParams ParamsBuilder::build() const {
  SystemParams p;
  for (const auto& a : assignments_) find_setter(a.key)(p, a.key, a.value);
  validate(p);
  return p;
}

SystemParams load_params(std::string_view text) {
  return ParamsBuilder{}.apply_text(text).build();
}

void validate(const SystemParams& p) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid parameters: ") + what);
  };
  require(p.ts_ratio > 0.0 && p.ts_ratio < 1.0, "eta must lie in (0,1)");
  require(p.reflection_coeff >= 0.0 && p.reflection_coeff <= 1.0, "rho must lie in [0,1]");
  require(p.tx_power > 0.0 && std::isfinite(p.tx_power), "tx power must be positive");
  require(p.carrier_freq > 0.0, "carrier frequency must be positive");
  require(p.sinr_threshold > 0.0, "SINR threshold must be positive");
  require(!p.bs_density || *p.bs_density > 0.0, "bs density must be positive");
  require(p.eve_density > 0.0, "eavesdropper density must be positive");
  require(p.obstacle_density > 0.0, "obstacle density must be positive");
  require(!p.alpha_los || *p.alpha_los >= 2.0, "alphaLos must be >= 2");
  require(!p.alpha_nlos || *p.alpha_nlos >= 2.0, "alphaNlos must be >= 2");
  require(p.ref_distance > 0.0, "reference distance must be positive");
  require(p.comm_radius > p.ref_distance, "comm radius must exceed the reference distance");
  require(p.bs_height > 0.0 && p.eve_height > 0.0 && p.user_height > 0.0,
          "node heights must be positive");
  require(p.obstacle_length_mean > 0.0 && p.obstacle_width_mean > 0.0,
          "obstacle length and width means must be positive");
  require(p.obstacle_height_min >= 0.0, "obstacle minimum height must be non-negative");
  require(p.obstacle_height_min <= p.obstacle_height_max, "H_min must not exceed H_max");
  require(p.reflector_fraction >= 0.0 && p.reflector_fraction <= 1.0,
          "reflector fraction must lie in [0,1]");
  require(p.n_elements_tx >= 1 && p.n_elements_rx >= 1, "element counts must be >= 1");
  require(!p.beamwidth || (*p.beamwidth > 0.0 && *p.beamwidth < 2.0 * kPi),
          "beamwidth must lie in (0, 2pi)");
  require(p.misalignment_sigma > 0.0, "misalignment sigma must be positive");
  require(p.map_width > 0.0 && p.map_height > 0.0, "map extent must be positive");
  require(p.map_granularity > 0.0, "map granularity must be positive");
  require(p.bandwidth > 0.0, "bandwidth must be positive");
  require(!p.esp_eval_distance || *p.esp_eval_distance > 0.0,
          "evaluation distance must be positive");
  require(p.reflection_delay_factor >= 1.0, "reflection delay factor must be >= 1 (c*tau >= D)");
  require(p.num_bs >= 1, "numBs must be >= 1");
  require(p.eve_distance_min >= 0.0 && p.eve_distance_min < p.eve_distance_max,
          "eavesdropper distance bounds must satisfy 0 <= min < max");
  require(p.trials_per_world >= 1, "trialsPerWorld must be >= 1");
  // Resolves the exponent table; throws for unknown carriers without overrides.
  auto exps = p.exponents();
  require(exps.los >= 2.0 && exps.nlos >= 2.0, "path-loss exponents must be >= 2");
}

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

template <typename Enum>
std::string enum_name(Enum v, std::initializer_list<std::pair<const char*, Enum>> names) {
  for (const auto& [n, e] : names) {
    if (e == v) return n;
  }
  return "?";
}

}  // namespace

std::string to_config_text(const SystemParams& p) {
  std::ostringstream os;
  auto put = [&](const char* k, const std::string& v) { os << k << '=' << v << '\n'; };
  auto putd = [&](const char* k, double v) { put(k, fmt_double(v)); };
  auto puto = [&](const char* k, const std::optional<double>& v) {
    put(k, v ? fmt_double(*v) : "auto");
  };
  putd("txPower", p.tx_power);
  putd("carrierFreq", p.carrier_freq);
  putd("eta", p.ts_ratio);
  putd("sinrThresholdDb", linear_to_db(p.sinr_threshold));
  puto("bsDensity", p.bs_density);
  putd("eveDensity", p.eve_density);
  putd("obstacleDensity", p.obstacle_density);
  putd("rho", p.reflection_coeff);
  puto("alphaLos", p.alpha_los);
  puto("alphaNlos", p.alpha_nlos);
  putd("refDistance", p.ref_distance);
  putd("bsHeight", p.bs_height);
  putd("eveHeight", p.eve_height);
  putd("userHeight", p.user_height);
  putd("obstacleLengthMean", p.obstacle_length_mean);
  putd("obstacleWidthMean", p.obstacle_width_mean);
  putd("obstacleHeightMin", p.obstacle_height_min);
  putd("obstacleHeightMax", p.obstacle_height_max);
  put("heightLaw", enum_name(p.height_law, {{"uniform", HeightLaw::Uniform},
                                            {"triangular", HeightLaw::Triangular}}));
  put("sizeLaw", enum_name(p.size_law, {{"fixed", SizeLaw::Fixed}, {"uniform", SizeLaw::Uniform}}));
  putd("reflectorFraction", p.reflector_fraction);
  put("nElementsTx", std::to_string(p.n_elements_tx));
  put("nElementsRx", std::to_string(p.n_elements_rx));
  puto("beamwidthRad", p.beamwidth);
  puto("mainLobeGain", p.main_lobe_gain);
  puto("sideLobeGain", p.side_lobe_gain);
  putd("misalignmentSigma", p.misalignment_sigma);
  put("misalignMode", enum_name(p.misalign_mode,
                                {{"paperLiteral", MisalignMode::PaperLiteral},
                                 {"oneSidedRenormalized", MisalignMode::OneSidedRenormalized}}));
  put("gainClampMode", enum_name(p.gain_clamp_mode, {{"error", GainClampMode::Error},
                                                     {"swapSafe", GainClampMode::SwapSafe}}));
  putd("commRadius", p.comm_radius);
  putd("mapWidth", p.map_width);
  putd("mapHeight", p.map_height);
  putd("mapGranularity", p.map_granularity);
  putd("bandwidth", p.bandwidth);
  putd("noiseFigure", p.noise_figure);
  put("noiseMode", enum_name(p.noise_mode, {{"bandwidth", NoiseMode::Bandwidth},
                                            {"paperLiteral", NoiseMode::PaperLiteral},
                                            {"off", NoiseMode::Off}}));
  put("interferenceMode",
      enum_name(p.interference_mode, {{"regularized", InterferenceMode::Regularized},
                                      {"paperFaithful", InterferenceMode::PaperFaithful}}));
  puto("espEvalDistance", p.esp_eval_distance);
  putd("reflectionAngle", p.reflection_angle);
  putd("reflectionDelayFactor", p.reflection_delay_factor);
  put("numBs", std::to_string(p.num_bs));
  put("bsPlacement",
      enum_name(p.bs_placement, {{"fixed", BsPlacement::FixedCount}, {"ppp", BsPlacement::Ppp}}));
  put("combining",
      enum_name(p.combining, {{"pooled", Combining::Pooled}, {"branchSum", Combining::BranchSum}}));
  put("bsGainTowardEve", enum_name(p.bs_gain_toward_eve,
                                   {{"bernoulli", BsGainTowardEve::Bernoulli},
                                    {"alwaysMain", BsGainTowardEve::AlwaysMain},
                                    {"alwaysSide", BsGainTowardEve::AlwaysSide}}));
  putd("eveDistanceMin", p.eve_distance_min);
  putd("eveDistanceMax", p.eve_distance_max);
  put("trialsPerWorld", std::to_string(p.trials_per_world));
  put("rngSeed", std::to_string(p.rng_seed));
  return os.str();
}

}  // namespace secsim
