#pragma once

// Physical setup (distances, powers, carrier, path loss) and its conversion
// into LinkGains / SystemParams. Scenario files are flat `key = value` text.

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fblrelay/link_layer.hpp"
#include "fblrelay/types.hpp"

namespace fblrelay {

/// COST-231 Hata, urban macro: h_b = 30 m, h_m = 1.5 m, 0 dB correction.
struct Cost231HataUrban {};

/// Average gains supplied directly, bypassing any propagation model.
struct FixedGains {
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;
};

using PathlossModel = std::variant<Cost231HataUrban, FixedGains>;

struct Scenario {
  double d_backhaul = 200.0;  ///< source to relay, m
  double d_relaying = 200.0;  ///< relay to destination, m
  double d_direct = 360.0;    ///< source to destination, m
  double p_tx_dbm = 30.0;
  double noise_dbm = -90.0;
  double f_c = 2.0;  ///< GHz
  Blocklength m = 500;
  double eta = 0.2;
  double eps_nominal = 1e-3;
  QoSPair qos{1e4, 1e-2};
  PathlossModel pathloss_model = Cost231HataUrban{};
};

inline constexpr double kHataBaseHeight = 30.0;
inline constexpr double kHataMobileHeight = 1.5;

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);
double linear_to_db(double linear);

/// COST-231 Hata urban loss in dB. Distances outside the model's nominal
/// 1-20 km range (and carriers outside 1.5-2 GHz) are evaluated as-is and
/// reported through `warnings`.
double cost231_hata_db(double distance_m, double f_c_ghz, std::vector<std::string>* warnings = nullptr);

/// Path loss of `model` at `distance_m`. Throws DomainError for FixedGains,
/// which carries gains rather than a loss law.
double pathloss_db(const PathlossModel& model, double distance_m, double f_c_ghz,
                   std::vector<std::string>* warnings = nullptr);

struct BuiltScenario {
  LinkGains gains;
  SystemParams params;
  QoSPair qos;
  std::vector<std::string> warnings;
};

/// Checks every field; throws ValidationError naming the first bad field and
/// listing all of them in the message.
void validate(const Scenario& s);

BuiltScenario build(const Scenario& s);

/// Parses `value` into the field named `key`. Throws ValidationError on an
/// unknown key or malformed value.
void set_field(Scenario& s, std::string_view key, std::string_view value);

/// Field names accepted by set_field, in file order.
const std::vector<std::string>& scenario_keys();

Scenario load_scenario(std::istream& in);
Scenario load_scenario_file(const std::string& path);
/// Writes every field with 17 significant digits, so load(save(s)) == s.
void save_scenario(const Scenario& s, std::ostream& out);

}  // namespace fblrelay
