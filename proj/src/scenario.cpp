#include "fblrelay/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fblrelay/errors.hpp"

namespace fblrelay {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view field, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError(std::string(field), "not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_list(std::string_view field, std::string_view text, std::size_t count) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_double(field, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.size() != count) {
    throw ValidationError(std::string(field), "expected " + std::to_string(count) + " values");
  }
  return out;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double cost231_hata_db(double distance_m, double f_c_ghz, std::vector<std::string>* warnings) {
  if (!(distance_m > 0.0)) throw DomainError("cost231_hata_db: distance must be positive");
  if (!(f_c_ghz > 0.0)) throw DomainError("cost231_hata_db: carrier must be positive");
  const double d_km = distance_m / 1000.0;
  const double f_mhz = f_c_ghz * 1000.0;
  if (warnings) {
    if (d_km < 1.0 || d_km > 20.0) {
      warnings->push_back("COST-231 Hata evaluated at " + fmt17(distance_m) +
                          " m, outside its 1-20 km range");
    }
    if (f_mhz < 1500.0 || f_mhz > 2000.0) {
      warnings->push_back("COST-231 Hata evaluated at " + fmt17(f_mhz) +
                          " MHz, outside its 1500-2000 MHz range");
    }
  }
  const double log_f = std::log10(f_mhz);
  const double log_hb = std::log10(kHataBaseHeight);
  // Mobile antenna correction for small/medium cities.
  const double a_hm = (1.1 * log_f - 0.7) * kHataMobileHeight - (1.56 * log_f - 0.8);
  return 46.3 + 33.9 * log_f - 13.82 * log_hb - a_hm + (44.9 - 6.55 * log_hb) * std::log10(d_km);
}

double pathloss_db(const PathlossModel& model, double distance_m, double f_c_ghz,
                   std::vector<std::string>* warnings) {
  if (std::holds_alternative<FixedGains>(model)) {
    throw DomainError("pathloss_db: fixed_gains has no path-loss law");
  }
  return cost231_hata_db(distance_m, f_c_ghz, warnings);
}

void validate(const Scenario& s) {
  std::vector<std::pair<std::string, std::string>> bad;
  auto check = [&](bool ok, const char* field, const char* what) {
    if (!ok) bad.emplace_back(field, what);
  };
  check(s.d_backhaul > 0.0, "d_backhaul", "must be positive");
  check(s.d_relaying > 0.0, "d_relaying", "must be positive");
  check(s.d_direct > 0.0, "d_direct", "must be positive");
  check(std::isfinite(s.p_tx_dbm), "p_tx_dbm", "must be finite");
  check(std::isfinite(s.noise_dbm), "noise_dbm", "must be finite");
  check(s.f_c > 0.0 && std::isfinite(s.f_c), "f_c", "must be positive");
  check(s.m >= 100, "m", "must be at least 100");
  check(s.eta > 0.0 && s.eta <= kFadingMedian, "eta", "must lie in (0, ln 2]");
  check(s.eps_nominal > 0.0 && s.eps_nominal < 1.0, "eps_nominal", "must lie in (0, 1)");
  check(s.qos.d > 0.0 && std::isfinite(s.qos.d), "qos", "delay budget must be positive");
  check(s.qos.p_d > 0.0 && s.qos.p_d < 1.0, "qos", "violation probability must lie in (0, 1)");
  if (const auto* g = std::get_if<FixedGains>(&s.pathloss_model)) {
    check(g->g1 > 0.0 && g->g2 > 0.0 && g->g3 > 0.0, "pathloss_model", "fixed gains must be positive");
  }
  if (bad.empty()) return;
  std::string msg;
  for (const auto& [field, what] : bad) {
    if (!msg.empty()) msg += "; ";
    msg += field + " " + what;
  }
  throw ValidationError(bad.front().first, msg);
}

BuiltScenario build(const Scenario& s) {
  validate(s);
  BuiltScenario out;
  if (const auto* g = std::get_if<FixedGains>(&s.pathloss_model)) {
    out.gains = {g->g1, g->g2, g->g3};
  } else {
    auto gain = [&](double d) {
      return db_to_linear(-pathloss_db(s.pathloss_model, d, s.f_c, &out.warnings));
    };
    out.gains = {gain(s.d_direct), gain(s.d_backhaul), gain(s.d_relaying)};
  }
  out.params.m = s.m;
  out.params.p_tx = dbm_to_watts(s.p_tx_dbm);
  out.params.sigma2 = dbm_to_watts(s.noise_dbm);
  out.params.eps_nominal = s.eps_nominal;
  out.params.eta = s.eta;
  out.qos = s.qos;
  return out;
}

const std::vector<std::string>& scenario_keys() {
  static const std::vector<std::string> keys{"d_backhaul", "d_relaying",  "d_direct",
                                             "p_tx_dbm",   "noise_dbm",   "f_c",
                                             "m",          "eta",         "eps_nominal",
                                             "qos",        "pathloss_model"};
  return keys;
}

void set_field(Scenario& s, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "d_backhaul") s.d_backhaul = parse_double(key, value);
  else if (key == "d_relaying") s.d_relaying = parse_double(key, value);
  else if (key == "d_direct") s.d_direct = parse_double(key, value);
  else if (key == "p_tx_dbm") s.p_tx_dbm = parse_double(key, value);
  else if (key == "noise_dbm") s.noise_dbm = parse_double(key, value);
  else if (key == "f_c") s.f_c = parse_double(key, value);
  else if (key == "eta") s.eta = parse_double(key, value);
  else if (key == "eps_nominal") s.eps_nominal = parse_double(key, value);
  else if (key == "m") {
    const double m = parse_double(key, value);
    if (!(m >= 1.0) || m != std::floor(m) || m > 1e15) {
      throw ValidationError("m", "must be a positive integer");
    }
    s.m = static_cast<Blocklength>(m);
  } else if (key == "qos") {
    const auto v = parse_list(key, value, 2);
    s.qos = {v[0], v[1]};
  } else if (key == "pathloss_model") {
    constexpr std::string_view fixed = "fixed_gains(";
    if (value == "cost231_hata_urban") {
      s.pathloss_model = Cost231HataUrban{};
    } else if (value.starts_with(fixed) && value.ends_with(")")) {
      const auto v = parse_list(key, value.substr(fixed.size(), value.size() - fixed.size() - 1), 3);
      s.pathloss_model = FixedGains{v[0], v[1], v[2]};
    } else {
      throw ValidationError("pathloss_model",
                            "expected cost231_hata_urban or fixed_gains(g1, g2, g3)");
    }
  } else {
    throw ValidationError(std::string(key), "unknown scenario key");
  }
}

Scenario load_scenario(std::istream& in) {
  Scenario s;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("line " + std::to_string(lineno), "expected 'key = value'");
    }
    set_field(s, text.substr(0, eq), text.substr(eq + 1));
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("scenario", "cannot open '" + path + "'");
  return load_scenario(in);
}

void save_scenario(const Scenario& s, std::ostream& out) {
  out << "d_backhaul = " << fmt17(s.d_backhaul) << '\n'
      << "d_relaying = " << fmt17(s.d_relaying) << '\n'
      << "d_direct = " << fmt17(s.d_direct) << '\n'
      << "p_tx_dbm = " << fmt17(s.p_tx_dbm) << '\n'
      << "noise_dbm = " << fmt17(s.noise_dbm) << '\n'
      << "f_c = " << fmt17(s.f_c) << '\n'
      << "m = " << s.m << '\n'
      << "eta = " << fmt17(s.eta) << '\n'
      << "eps_nominal = " << fmt17(s.eps_nominal) << '\n'
      << "qos = " << fmt17(s.qos.d) << ", " << fmt17(s.qos.p_d) << '\n';
  if (const auto* g = std::get_if<FixedGains>(&s.pathloss_model)) {
    out << "pathloss_model = fixed_gains(" << fmt17(g->g1) << ", " << fmt17(g->g2) << ", "
        << fmt17(g->g3) << ")\n";
  } else {
    out << "pathloss_model = cost231_hata_urban\n";
  }
}

}  // namespace fblrelay
