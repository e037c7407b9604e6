#include "inac/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "inac/errors.hpp"

namespace inac {

using nlohmann::json;

namespace {

const char* placement_name(Placement p) {
  return p == Placement::kOutdoorReflectSide ? "outdoor_reflect_side" : "indoor_transmit_side";
}

Placement parse_placement(const std::string& s) {
  if (s == "outdoor_reflect_side" || s == "outdoor") return Placement::kOutdoorReflectSide;
  if (s == "indoor_transmit_side" || s == "indoor") return Placement::kIndoorTransmitSide;
  throw ValidationError("unknown user placement '" + s + "'");
}

EcefPoint read_point(const json& j, const std::string& what) {
  try {
    EcefPoint p{j.at("x").get<double>(), j.at("y").get<double>(), j.at("z").get<double>()};
    if (!p.finite()) throw ValidationError(what + ": coordinates must be finite");
    return p;
  } catch (const json::exception& e) {
    throw ValidationError(what + ": " + e.what());
  }
}

void write_point(json& j, const EcefPoint& p) {
  j["x"] = p.x;
  j["y"] = p.y;
  j["z"] = p.z;
}

std::vector<std::size_t> read_ids(const json& j, std::size_t satellite_count, const std::string& what) {
  std::vector<std::size_t> out;
  for (const auto& v : j) {
    const auto id = v.get<long long>();
    if (id < 1 || static_cast<std::size_t>(id) > satellite_count)
      throw ValidationError(what + ": satellite id " + std::to_string(id) + " out of range 1.." +
                            std::to_string(satellite_count));
    out.push_back(static_cast<std::size_t>(id - 1));
  }
  return out;
}

json write_ids(const std::vector<std::size_t>& ids) {
  json a = json::array();
  for (std::size_t i : ids) a.push_back(i + 1);
  return a;
}

constexpr std::array<EcefPoint, 10> kTableSatellites = {{
    {2384140.77986545, 26292387.6749704, -1752765.80294385},
    {-7688937.22670325, 13088957.6457098, 21791665.4813813},
    {7694983.70804847, -12857727.5493792, 22058611.9934355},
    {21593131.9113028, 14858836.7899355, -4809198.45852993},
    {14735759.3485476, 3642752.94843750, 21710269.2023414},
    {10822949.9268744, 17448224.4300194, 16861015.1148962},
    {22983405.0752494, -2550895.23789826, 13042468.3643485},
    {15960648.1354986, -4443134.15738840, 20811348.4358723},
    {23113652.8643512, 1123278.14965420, 6871538.15438270},
    {16937593.1345824, -14466934.1345798, -14539112.5683248},
}};

constexpr EcefPoint kTableRis{2451473.43334794, 2940007.18127632, 5084877.94326077};
constexpr EcefPoint kTableIndoor{2451523.43334794, 2940057.18127632, 5084857.94326077};
constexpr EcefPoint kTableOutdoor{2451423.43334794, 2939957.18127632, 5084827.94326077};

}  // namespace

void Scenario::validate() const {
  if (satellites.empty()) throw ValidationError("scenario: satellite list is empty");
  if (users.empty()) throw ValidationError("scenario: at least one user is required");
  if (visibility.size() != users.size())
    throw ValidationError("scenario: visibility must have one entry per user");
  if (!ris.position.finite()) throw ValidationError("scenario: RIS position must be finite");
  for (std::size_t i = 0; i < satellites.size(); ++i) {
    const auto& s = satellites[i];
    const std::string tag = "satellite " + std::to_string(i + 1);
    if (!s.position.finite()) throw ValidationError(tag + ": position must be finite");
    if (!(s.transmit_power_w > 0.0)) throw ValidationError(tag + ": transmit power must be > 0");
    if (!(s.transmit_gain > 0.0)) throw ValidationError(tag + ": transmit gain must be > 0");
  }
  std::set<std::string> names;
  for (std::size_t u = 0; u < users.size(); ++u) {
    if (!users[u].position.finite()) throw ValidationError("user '" + users[u].name + "': position must be finite");
    if (!names.insert(users[u].name).second) throw ValidationError("duplicate user name '" + users[u].name + "'");
    const auto& vis = visibility[u];
    std::set<std::size_t> seen;
    for (std::size_t i : vis.visible) {
      if (i >= satellites.size()) throw ValidationError("visibility: satellite index out of range");
      if (!seen.insert(i).second)
        throw ValidationError("visibility of '" + users[u].name + "': satellite " + std::to_string(i + 1) +
                              " listed twice");
    }
    for (std::size_t i : vis.invisible) {
      if (i >= satellites.size()) throw ValidationError("visibility: satellite index out of range");
      if (!seen.insert(i).second)
        throw ValidationError("visibility of '" + users[u].name + "': I_v and I_n overlap at satellite " +
                              std::to_string(i + 1));
    }
  }
  physics.validate();
  fading.validate();
}

std::size_t Scenario::user_index(std::string_view name) const {
  for (std::size_t u = 0; u < users.size(); ++u)
    if (users[u].name == name) return u;
  throw ValidationError("unknown user '" + std::string(name) + "'");
}

std::optional<std::size_t> Scenario::find_user(Placement placement) const {
  for (std::size_t u = 0; u < users.size(); ++u)
    if (users[u].placement == placement) return u;
  return std::nullopt;
}

bool Scenario::is_visible(std::size_t user, std::size_t satellite) const {
  const auto& v = visibility.at(user).visible;
  return std::find(v.begin(), v.end(), satellite) != v.end();
}

Scenario default_scenario() {
  Scenario s;
  for (const auto& p : kTableSatellites) s.satellites.push_back({p, 40.0, db_to_linear(30.0), 1});
  s.ris.position = kTableRis;
  s.users.push_back({"indoor", kTableIndoor, Placement::kIndoorTransmitSide, 0.0});
  s.users.push_back({"outdoor", kTableOutdoor, Placement::kOutdoorReflectSide, 0.0});
  Visibility indoor;
  for (std::size_t i = 0; i < s.satellites.size(); ++i) indoor.invisible.push_back(i);
  Visibility outdoor;
  outdoor.visible = {0, 1, 2};
  for (std::size_t i = 3; i < s.satellites.size(); ++i) outdoor.invisible.push_back(i);
  s.visibility = {indoor, outdoor};
  return s;
}

Scenario load_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scenario document does not parse: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("scenario document must be a JSON object");

  Scenario s;
  try {
    if (!doc.contains("satellites") || !doc["satellites"].is_array() || doc["satellites"].empty())
      throw ValidationError("scenario: satellite list is empty");
    for (std::size_t i = 0; i < doc["satellites"].size(); ++i) {
      const auto& js = doc["satellites"][i];
      const std::string tag = "satellite " + std::to_string(i + 1);
      if (js.contains("id") && js["id"].get<long long>() != static_cast<long long>(i + 1))
        throw ValidationError(tag + ": id must equal its 1-based position");
      SatelliteConfig sat;
      sat.position = read_point(js, tag);
      sat.transmit_power_w = js.value("power_w", 40.0);
      sat.transmit_gain = db_to_linear(js.value("gain_db", 30.0));
      sat.antenna_count = js.value("antennas", 1);
      s.satellites.push_back(sat);
    }

    if (!doc.contains("ris") || !doc["ris"].is_object()) throw ValidationError("scenario: missing RIS section");
    const auto& jr = doc["ris"];
    s.ris.position = read_point(jr, "ris");
    const auto n = jr.value("n_elements", std::size_t{50});
    const double br = jr.value("beta_reflect", 0.5);
    const double bt = jr.value("beta_transmit", 0.5);
    const bool ec = jr.value("energy_conserving", false);
    s.ris.config = StarRisConfig::uniform(n, br, bt, ec);
    if (jr.contains("theta_reflect"))
      s.ris.config = s.ris.config.with_reflect_phases(jr["theta_reflect"].get<std::vector<double>>());
    if (jr.contains("theta_transmit"))
      s.ris.config = s.ris.config.with_transmit_phases(jr["theta_transmit"].get<std::vector<double>>());

    if (!doc.contains("users") || !doc["users"].is_array() || doc["users"].empty())
      throw ValidationError("scenario: at least one user is required");
    for (std::size_t u = 0; u < doc["users"].size(); ++u) {
      const auto& ju = doc["users"][u];
      UserConfig user;
      user.name = ju.value("name", "user" + std::to_string(u + 1));
      user.position = read_point(ju, "user '" + user.name + "'");
      user.placement = parse_placement(ju.value("placement", std::string("outdoor_reflect_side")));
      user.clock_bias_s = ju.value("clock_bias_s", 0.0);
      s.users.push_back(user);
    }

    // Without a visibility section outdoor users see every satellite and
    // indoor users none.
    const json vis = doc.value("visibility", json::object());
    for (const auto& user : s.users) {
      Visibility v;
      if (vis.contains(user.name)) {
        const auto& jv = vis[user.name];
        v.visible = read_ids(jv.value("visible", json::array()), s.satellites.size(), "visibility of " + user.name);
        v.invisible =
            read_ids(jv.value("invisible", json::array()), s.satellites.size(), "visibility of " + user.name);
      } else {
        for (std::size_t i = 0; i < s.satellites.size(); ++i) {
          if (user.placement == Placement::kOutdoorReflectSide)
            v.visible.push_back(i);
          else
            v.invisible.push_back(i);
        }
      }
      s.visibility.push_back(std::move(v));
    }

    if (doc.contains("physics")) {
      const auto& jp = doc["physics"];
      s.physics.carrier_frequency_hz = jp.value("carrier_frequency_hz", s.physics.carrier_frequency_hz);
      s.physics.bandwidth_hz = jp.value("bandwidth_hz", s.physics.bandwidth_hz);
      s.physics.rx_gain = db_to_linear(jp.value("rx_gain_db", linear_to_db(s.physics.rx_gain)));
      s.physics.speed_of_light = jp.value("speed_of_light_mps", s.physics.speed_of_light);
      s.physics.exponents.sat_ris = jp.value("pathloss_exponent_sat_ris", s.physics.exponents.sat_ris);
      s.physics.exponents.sat_user = jp.value("pathloss_exponent_sat_user", s.physics.exponents.sat_user);
      s.physics.exponents.ris_user = jp.value("pathloss_exponent_ris_user", s.physics.exponents.ris_user);
    }
    if (doc.contains("fading")) {
      const auto& jf = doc["fading"];
      s.fading.shadowed_rician.b = jf.value("b", s.fading.shadowed_rician.b);
      s.fading.shadowed_rician.m = jf.value("m", s.fading.shadowed_rician.m);
      s.fading.shadowed_rician.omega = jf.value("omega", s.fading.shadowed_rician.omega);
      s.fading.ris_user_k_factor = jf.value("ris_user_k_factor", s.fading.ris_user_k_factor);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scenario document: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return load_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& s, int indent) {
  json doc;
  doc["satellites"] = json::array();
  for (std::size_t i = 0; i < s.satellites.size(); ++i) {
    const auto& sat = s.satellites[i];
    json js;
    js["id"] = i + 1;
    write_point(js, sat.position);
    js["power_w"] = sat.transmit_power_w;
    js["gain_db"] = linear_to_db(sat.transmit_gain);
    js["antennas"] = sat.antenna_count;
    doc["satellites"].push_back(js);
  }
  json jr;
  write_point(jr, s.ris.position);
  const auto& cfg = s.ris.config;
  jr["n_elements"] = cfg.size();
  jr["beta_reflect"] = cfg.size() ? cfg.beta_reflect()[0] : 0.5;
  jr["beta_transmit"] = cfg.size() ? cfg.beta_transmit()[0] : 0.5;
  jr["energy_conserving"] = cfg.energy_conserving();
  const auto nonzero = [](std::span<const double> v) {
    return std::any_of(v.begin(), v.end(), [](double x) { return x != 0.0; });
  };
  if (nonzero(cfg.theta_reflect()))
    jr["theta_reflect"] = std::vector<double>(cfg.theta_reflect().begin(), cfg.theta_reflect().end());
  if (nonzero(cfg.theta_transmit()))
    jr["theta_transmit"] = std::vector<double>(cfg.theta_transmit().begin(), cfg.theta_transmit().end());
  doc["ris"] = jr;

  doc["users"] = json::array();
  json vis = json::object();
  for (std::size_t u = 0; u < s.users.size(); ++u) {
    const auto& user = s.users[u];
    json ju;
    ju["name"] = user.name;
    write_point(ju, user.position);
    ju["placement"] = placement_name(user.placement);
    ju["clock_bias_s"] = user.clock_bias_s;
    doc["users"].push_back(ju);
    vis[user.name] = {{"visible", write_ids(s.visibility[u].visible)},
                      {"invisible", write_ids(s.visibility[u].invisible)}};
  }
  doc["visibility"] = vis;
  doc["physics"] = {
      {"carrier_frequency_hz", s.physics.carrier_frequency_hz},
      {"bandwidth_hz", s.physics.bandwidth_hz},
      {"rx_gain_db", linear_to_db(s.physics.rx_gain)},
      {"speed_of_light_mps", s.physics.speed_of_light},
      {"pathloss_exponent_sat_ris", s.physics.exponents.sat_ris},
      {"pathloss_exponent_sat_user", s.physics.exponents.sat_user},
      {"pathloss_exponent_ris_user", s.physics.exponents.ris_user},
  };
  doc["fading"] = {
      {"b", s.fading.shadowed_rician.b},
      {"m", s.fading.shadowed_rician.m},
      {"omega", s.fading.shadowed_rician.omega},
      {"ris_user_k_factor", s.fading.ris_user_k_factor},
  };
  return doc.dump(indent);
}

Scenario with_ris_user_distance(Scenario scenario, std::size_t user, double meters) {
  if (!(meters > 0.0)) throw ValidationError("RIS-user distance must be > 0");
  auto& u = scenario.users.at(user);
  const EcefPoint d = u.position - scenario.ris.position;
  const double r = d.norm();
  if (!(r > 0.0)) throw DegenerateGeometry("user coincides with the RIS; direction undefined");
  u.position = scenario.ris.position + d * (meters / r);
  return scenario;
}

Scenario with_ris_elements(Scenario scenario, std::size_t n) {
  const auto& cfg = scenario.ris.config;
  const double br = cfg.size() ? cfg.beta_reflect()[0] : 0.5;
  const double bt = cfg.size() ? cfg.beta_transmit()[0] : 0.5;
  scenario.ris.config = StarRisConfig::uniform(n, br, bt, cfg.energy_conserving());
  return scenario;
}

}  // namespace inac
