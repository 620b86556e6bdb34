#include "yousense/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

namespace yousense {

using nlohmann::ordered_json;

std::string_view to_string(Role role) {
  switch (role) {
    case Role::honest: return "honest";
    case Role::ees: return "ees";
    case Role::pes: return "pes";
    case Role::history: return "history";
  }
  return "unknown";
}

std::string_view to_string(Mode mode) { return mode == Mode::yousense ? "yousense" : "plaintext"; }

namespace {

const ordered_json& require_object(const ordered_json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  return j;
}

void reject_unknown(const ordered_json& j, const std::string& where,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + ": unknown key \"" + key + "\"");
    }
  }
}

double get_number(const ordered_json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

std::size_t get_count(const ordered_json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
    throw ConfigError(where + ": expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

// Scalar (broadcast to every channel) or one entry per channel.
std::vector<double> get_per_channel(const ordered_json& j, std::size_t channels, const std::string& where) {
  if (j.is_number()) return std::vector<double>(channels, j.get<double>());
  if (!j.is_array()) throw ConfigError(where + ": expected a number or an array");
  if (j.size() != channels) {
    throw ConfigError(where + ": expected " + std::to_string(channels) + " entries, got " +
                      std::to_string(j.size()));
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], where));
  return out;
}

ordered_json per_channel_json(const std::vector<double>& values) {
  const bool uniform = std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) == values.end();
  if (uniform && !values.empty()) return values.front();
  return values;
}

bool uniform(const std::vector<double>& values) {
  return std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) == values.end();
}

Role parse_role(const ordered_json& j) {
  if (!j.is_string()) throw ConfigError("users[].role: expected a string");
  const auto s = j.get<std::string>();
  if (s == "honest") return Role::honest;
  if (s == "ees") return Role::ees;
  if (s == "pes") return Role::pes;
  if (s == "history") return Role::history;
  throw ConfigError("users[].role: unknown role \"" + s + "\" (honest, ees, pes, history)");
}

}  // namespace

Scenario Scenario::defaults() {
  Scenario s;
  s.channels = ChannelModel::uniform(100, 50.0, 50.0, 0.01);
  for (int u = 0; u < 5; ++u) {
    UserSpec user;
    user.detector = DetectorProfile::uniform(100, 0.1, 0.1);
    s.users.push_back(user);
  }
  return s;
}

std::size_t Scenario::count(Role role) const {
  return static_cast<std::size_t>(
      std::count_if(users.begin(), users.end(), [role](const UserSpec& u) { return u.role == role; }));
}

void Scenario::validate() const {
  try {
    channels.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const std::size_t m = channels.num_channels;
  if (users.size() < 2) throw ConfigError("scenario: need at least two users");
  if (count(Role::honest) < 1) throw ConfigError("scenario: need at least one honest user");
  for (std::size_t u = 0; u < users.size(); ++u) {
    const auto& user = users[u];
    const std::string where = "users[" + std::to_string(u) + "]";
    if (user.detector.size() != m) throw ConfigError(where + ": detector profile length must equal channel count");
    try {
      user.detector.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ": " + e.what());
    }
    if (user.role == Role::pes && (user.mask_size > m)) {
      throw ConfigError(where + ": PES mask size exceeds channel count");
    }
    if (!(user.modification >= 0.0 && user.modification <= 1.0)) {
      throw ConfigError(where + ": modification must lie in [0,1]");
    }
    if (user.history_period < 1) throw ConfigError(where + ": history period must be >= 1");
  }
  if (subset.pairs && *subset.pairs < 1) throw ConfigError("subset.pairs must be >= 1");
  if (subset.block_length && (*subset.block_length < 1 || *subset.block_length > m)) {
    throw ConfigError("subset.phi must lie in [1, channels]");
  }
  if (subset.target_success && !(*subset.target_success > 0.0 && *subset.target_success < 1.0)) {
    throw ConfigError("subset.p_tar must lie in (0,1)");
  }
  if (!(subset.omega >= 1.0)) throw ConfigError("subset.omega must be >= 1");
  if (subset.eta && !(*subset.eta >= 0.0 && *subset.eta <= 1.0)) throw ConfigError("subset.eta must lie in [0,1]");
  if (rounds < 1) throw ConfigError("scenario: rounds must be >= 1");
  const std::size_t n = fusion.include_self ? users.size() : users.size() - 1;
  if (fusion.k && (*fusion.k < 1 || *fusion.k > n)) {
    throw ConfigError("fusion.k must lie in [1, " + std::to_string(n) + "]");
  }
  if (mode == Mode::yousense) {
    // Surface unreachable targets and oversize subsets before round 1.
    try {
      const std::size_t phi = resolved_block_length(*this);
      const std::size_t blocks = (m + phi - 1) / phi;
      if (!subset.pairs && blocks > PadSubset::kMaxBlocks) {
        throw ConfigError("subset: " + std::to_string(blocks) + " blocks exceed the supported maximum");
      }
      if (subset.pairs) {
        std::size_t b = 1;
        while ((std::uint64_t{1} << (b - 1)) < *subset.pairs && b < 64) ++b;
        if (b > m) throw ConfigError("subset.pairs: too many pairs for the channel count");
      }
    } catch (const std::domain_error& e) {
      throw ConfigError(std::string("subset: ") + e.what());
    }
  }
}

Scenario parse_scenario(std::string_view json_text) {
  ordered_json root;
  try {
    root = ordered_json::parse(json_text);
  } catch (const ordered_json::parse_error& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  require_object(root, "configuration");
  reject_unknown(root, "configuration",
                 {"channels", "users", "subset", "fusion", "mode", "ees_source", "rounds", "seed"});

  Scenario s = Scenario::defaults();
  try {
    std::size_t m = 100;
    double rate_on_default = 50.0;
    double rate_off_default = 50.0;
    if (root.contains("channels")) {
      const auto& c = require_object(root["channels"], "channels");
      reject_unknown(c, "channels", {"count", "rate_on", "rate_off", "slot_period"});
      if (c.contains("count")) m = get_count(c["count"], "channels.count");
      if (m < 1) throw ConfigError("channels.count must be >= 1");
      s.channels.num_channels = m;
      s.channels.rate_on = c.contains("rate_on") ? get_per_channel(c["rate_on"], m, "channels.rate_on")
                                                 : std::vector<double>(m, rate_on_default);
      s.channels.rate_off = c.contains("rate_off") ? get_per_channel(c["rate_off"], m, "channels.rate_off")
                                                   : std::vector<double>(m, rate_off_default);
      if (c.contains("slot_period")) s.channels.slot_period = get_number(c["slot_period"], "channels.slot_period");
    }

    if (root.contains("users")) {
      const auto& users = root["users"];
      if (!users.is_array()) throw ConfigError("users: expected an array");
      s.users.clear();
      for (std::size_t idx = 0; idx < users.size(); ++idx) {
        const std::string where = "users[" + std::to_string(idx) + "]";
        const auto& u = require_object(users[idx], where);
        reject_unknown(u, where, {"role", "count", "false_alarm", "miss", "mask_size", "modification", "period"});
        UserSpec spec;
        if (u.contains("role")) spec.role = parse_role(u["role"]);
        const auto pf = u.contains("false_alarm") ? get_per_channel(u["false_alarm"], m, where + ".false_alarm")
                                                  : std::vector<double>(m, 0.1);
        const auto pm = u.contains("miss") ? get_per_channel(u["miss"], m, where + ".miss")
                                           : std::vector<double>(m, 0.1);
        spec.detector = DetectorProfile{pf, pm};
        if (u.contains("mask_size")) spec.mask_size = get_count(u["mask_size"], where + ".mask_size");
        if (u.contains("modification")) spec.modification = get_number(u["modification"], where + ".modification");
        if (u.contains("period")) spec.history_period = get_count(u["period"], where + ".period");
        const std::size_t copies = u.contains("count") ? get_count(u["count"], where + ".count") : 1;
        for (std::size_t k = 0; k < copies; ++k) s.users.push_back(spec);
      }
    } else {
      for (auto& u : s.users) u.detector = DetectorProfile::uniform(m, 0.1, 0.1);
    }

    if (root.contains("subset")) {
      const auto& sub = require_object(root["subset"], "subset");
      reject_unknown(sub, "subset", {"phi", "p_tar", "pairs", "omega", "eta"});
      if (sub.contains("phi")) s.subset.block_length = get_count(sub["phi"], "subset.phi");
      if (sub.contains("p_tar")) s.subset.target_success = get_number(sub["p_tar"], "subset.p_tar");
      if (sub.contains("pairs")) s.subset.pairs = get_count(sub["pairs"], "subset.pairs");
      if (sub.contains("omega")) s.subset.omega = get_number(sub["omega"], "subset.omega");
      if (sub.contains("eta")) s.subset.eta = get_number(sub["eta"], "subset.eta");
    }

    if (root.contains("fusion")) {
      const auto& f = require_object(root["fusion"], "fusion");
      reject_unknown(f, "fusion", {"k", "include_self", "weighting"});
      if (f.contains("k")) s.fusion.k = get_count(f["k"], "fusion.k");
      if (f.contains("include_self")) {
        if (!f["include_self"].is_boolean()) throw ConfigError("fusion.include_self: expected a boolean");
        s.fusion.include_self = f["include_self"].get<bool>();
      }
      if (f.contains("weighting")) {
        const auto w = f["weighting"].is_string() ? f["weighting"].get<std::string>() : "";
        if (w == "unit") {
          s.fusion.weighting = VoteWeighting::unit;
        } else if (w == "eta") {
          s.fusion.weighting = VoteWeighting::log_likelihood;
        } else {
          throw ConfigError("fusion.weighting: expected \"unit\" or \"eta\"");
        }
      }
    }

    if (root.contains("mode")) {
      const auto mode = root["mode"].is_string() ? root["mode"].get<std::string>() : "";
      if (mode == "yousense") {
        s.mode = Mode::yousense;
      } else if (mode == "plaintext") {
        s.mode = Mode::plaintext;
      } else {
        throw ConfigError("mode: expected \"yousense\" or \"plaintext\"");
      }
    }
    if (root.contains("ees_source")) {
      const auto src = root["ees_source"].is_string() ? root["ees_source"].get<std::string>() : "";
      if (src == "current") {
        s.ees_source = EesSource::current_round;
      } else if (src == "previous") {
        s.ees_source = EesSource::previous_round;
      } else {
        throw ConfigError("ees_source: expected \"current\" or \"previous\"");
      }
    }
    if (root.contains("rounds")) s.rounds = get_count(root["rounds"], "rounds");
    if (root.contains("seed")) {
      if (!root["seed"].is_number_unsigned() && !root["seed"].is_number_integer()) {
        throw ConfigError("seed: expected an integer");
      }
      s.seed = root["seed"].get<std::uint64_t>();
    }
  } catch (const ordered_json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string canonical_json(const Scenario& s) {
  ordered_json root;
  root["channels"] = {{"count", s.channels.num_channels},
                      {"rate_on", per_channel_json(s.channels.rate_on)},
                      {"rate_off", per_channel_json(s.channels.rate_off)},
                      {"slot_period", s.channels.slot_period}};
  ordered_json users = ordered_json::array();
  for (const auto& u : s.users) {
    ordered_json j;
    j["role"] = to_string(u.role);
    j["false_alarm"] = per_channel_json(u.detector.false_alarm);
    j["miss"] = per_channel_json(u.detector.miss);
    if (u.role == Role::pes) j["mask_size"] = u.mask_size;
    if (u.role == Role::ees) j["modification"] = u.modification;
    if (u.role == Role::history) j["period"] = u.history_period;
    users.push_back(j);
  }
  root["users"] = users;
  ordered_json sub = ordered_json::object();
  if (s.subset.block_length) sub["phi"] = *s.subset.block_length;
  if (s.subset.target_success) sub["p_tar"] = *s.subset.target_success;
  if (s.subset.pairs) sub["pairs"] = *s.subset.pairs;
  sub["omega"] = s.subset.omega;
  if (s.subset.eta) sub["eta"] = *s.subset.eta;
  root["subset"] = sub;
  ordered_json fusion = ordered_json::object();
  if (s.fusion.k) fusion["k"] = *s.fusion.k;
  fusion["include_self"] = s.fusion.include_self;
  fusion["weighting"] = s.fusion.weighting == VoteWeighting::unit ? "unit" : "eta";
  root["fusion"] = fusion;
  root["mode"] = to_string(s.mode);
  root["ees_source"] = s.ees_source == EesSource::current_round ? "current" : "previous";
  root["rounds"] = s.rounds;
  root["seed"] = s.seed;
  return root.dump();
}

std::string config_hash(const Scenario& scenario) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_json(scenario)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Scenario with_channels(const Scenario& scenario, std::size_t channels) {
  if (channels < 1) throw ConfigError("channel count must be >= 1");
  Scenario s = scenario;
  auto resize = [channels](std::vector<double>& v, const char* what) {
    if (v.size() == channels) return;
    if (!uniform(v)) throw ConfigError(std::string("cannot resize heterogeneous ") + what);
    v.assign(channels, v.front());
  };
  resize(s.channels.rate_on, "channels.rate_on");
  resize(s.channels.rate_off, "channels.rate_off");
  s.channels.num_channels = channels;
  for (auto& u : s.users) {
    resize(u.detector.false_alarm, "users[].false_alarm");
    resize(u.detector.miss, "users[].miss");
    u.mask_size = std::min(u.mask_size, channels);
  }
  if (s.subset.block_length) s.subset.block_length = std::min(*s.subset.block_length, channels);
  return s;
}

double representative_eta(const Scenario& s) {
  if (s.subset.eta) return *s.subset.eta;
  std::vector<std::size_t> honest;
  for (std::size_t u = 0; u < s.users.size(); ++u) {
    if (s.users[u].role == Role::honest) honest.push_back(u);
  }
  if (honest.empty()) throw ConfigError("scenario: need at least one honest user");
  double total = 0.0;
  std::size_t terms = 0;
  const std::size_t m = s.num_channels();
  for (std::size_t a : honest) {
    for (std::size_t b : honest) {
      if (a == b && honest.size() > 1) continue;
      for (std::size_t i = 0; i < m; ++i) {
        total += agreement_probability(s.users[a].detector, s.users[b].detector,
                                       stationary_occupancy(s.channels, i), i);
        ++terms;
      }
    }
  }
  return total / static_cast<double>(terms);
}

std::size_t resolved_block_length(const Scenario& s) {
  const std::size_t m = s.num_channels();
  std::size_t phi = m;
  if (s.subset.block_length) {
    phi = *s.subset.block_length;
  } else if (s.subset.target_success) {
    phi = std::min(invert_success_rate(*s.subset.target_success, representative_eta(s)), m);
  }
  return scale_block_length(phi, s.subset.omega, m);
}

PadSubset build_subset(const Scenario& s, Rng& rng) {
  if (s.subset.pairs) return generate_paired_subset(s.num_channels(), *s.subset.pairs, rng);
  return generate_subset(s.num_channels(), resolved_block_length(s), rng);
}

FusionRule fusion_rule(const Scenario& s, std::size_t reports) {
  if (s.fusion.k) {
    FusionRule rule{std::min(*s.fusion.k, reports), reports};
    rule.validate();
    return rule;
  }
  return FusionRule::majority(reports);
}

}  // namespace yousense
