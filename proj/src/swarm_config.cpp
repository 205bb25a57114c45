#include <cmath>
#include <string>

#include <json.hpp>

#include "qaoa_fipso/error.hpp"
#include "qaoa_fipso/optimizer.hpp"

namespace qaoa_fipso {

std::string_view to_string(SwarmMode mode) {
  switch (mode) {
    case SwarmMode::adam_fd: return "adam_fd";
    case SwarmMode::adam_swarm: return "adam_swarm";
    case SwarmMode::fipso_plain: return "fipso_plain";
  }
  return "unknown";
}

SwarmMode parse_swarm_mode(std::string_view name) {
  if (name == "adam_fd") return SwarmMode::adam_fd;
  if (name == "adam_swarm") return SwarmMode::adam_swarm;
  if (name == "fipso_plain") return SwarmMode::fipso_plain;
  throw ArgumentError("unknown swarm mode \"" + std::string(name) +
                      "\" (expected adam_fd, adam_swarm or fipso_plain)");
}

void SwarmConfig::validate(std::size_t dim) const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ArgumentError("invalid swarm config: " + what);
  };
  require(dim >= 1, "search dimension must be positive");
  require(swarm_size >= 2, "swarm_size must be >= 2");
  require(max_iters >= 1, "max_iters must be >= 1");
  require(w_min >= 0.0 && w_min <= w_max, "need 0 <= w_min <= w_max");
  require(std::isfinite(w_max), "w_max must be finite");
  require(c >= 0.0 && std::isfinite(c), "c must be finite and non-negative");
  require(eta >= 0.0 && std::isfinite(eta), "eta must be finite and non-negative");
  require(adam_beta1 > 0.0 && adam_beta1 < 1.0, "adam_beta1 must lie in (0, 1)");
  require(adam_beta2 > 0.0 && adam_beta2 < 1.0, "adam_beta2 must lie in (0, 1)");
  require(epsilon > 0.0, "epsilon must be positive");
  require(lambda >= 0.0 && std::isfinite(lambda), "lambda must be finite and non-negative");
  require(fd_step > 0.0 && std::isfinite(fd_step), "fd_step must be positive");
  require(bounds.size() <= 1 || bounds.size() == dim,
          "bounds must have 1 or " + std::to_string(dim) + " entries, got " +
              std::to_string(bounds.size()));
  for (const Bounds& b : bounds) {
    require(std::isfinite(b.lo) && std::isfinite(b.hi) && b.lo < b.hi, "bounds need finite lo < hi");
  }
}

std::vector<Bounds> SwarmConfig::bounds_for(std::size_t dim) const {
  if (bounds.empty()) return std::vector<Bounds>(dim);
  if (bounds.size() == 1) return std::vector<Bounds>(dim, bounds.front());
  return bounds;
}

namespace {

Bounds parse_pair(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("bounds entries must be [lo, hi] number pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

SwarmConfig swarm_config_from_json(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid swarm config JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("swarm config must be a JSON object");

  SwarmConfig cfg;
  for (const auto& [key, value] : doc.items()) {
    auto number = [&]() {
      if (!value.is_number()) throw ParseError("swarm config field \"" + key + "\" must be a number");
      return value.get<double>();
    };
    auto integer = [&]() {
      if (!value.is_number_integer()) {
        throw ParseError("swarm config field \"" + key + "\" must be an integer");
      }
      return value.get<long long>();
    };
    if (key == "swarm_size") cfg.swarm_size = static_cast<int>(integer());
    else if (key == "max_iters") cfg.max_iters = static_cast<int>(integer());
    else if (key == "w_max") cfg.w_max = number();
    else if (key == "w_min") cfg.w_min = number();
    else if (key == "c") cfg.c = number();
    else if (key == "eta") cfg.eta = number();
    else if (key == "adam_beta1") cfg.adam_beta1 = number();
    else if (key == "adam_beta2") cfg.adam_beta2 = number();
    else if (key == "epsilon") cfg.epsilon = number();
    else if (key == "lambda") cfg.lambda = number();
    else if (key == "fd_step") cfg.fd_step = number();
    else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ParseError("swarm config field \"seed\" must be a non-negative integer");
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "mode") {
      if (!value.is_string()) throw ParseError("swarm config field \"mode\" must be a string");
      cfg.mode = parse_swarm_mode(value.get<std::string>());
    } else if (key == "bounds") {
      cfg.bounds.clear();
      if (value.is_array() && value.size() == 2 && value[0].is_number()) {
        cfg.bounds.push_back(parse_pair(value));
      } else if (value.is_array()) {
        for (const auto& item : value) cfg.bounds.push_back(parse_pair(item));
      } else {
        throw ParseError("swarm config field \"bounds\" must be [lo, hi] or a list of pairs");
      }
    } else {
      throw ParseError("unknown swarm config field \"" + key + "\"");
    }
  }
  return cfg;
}

std::string swarm_config_to_json(const SwarmConfig& cfg) {
  nlohmann::ordered_json j;
  j["swarm_size"] = cfg.swarm_size;
  j["max_iters"] = cfg.max_iters;
  j["w_max"] = cfg.w_max;
  j["w_min"] = cfg.w_min;
  j["c"] = cfg.c;
  j["eta"] = cfg.eta;
  j["adam_beta1"] = cfg.adam_beta1;
  j["adam_beta2"] = cfg.adam_beta2;
  j["epsilon"] = cfg.epsilon;
  j["lambda"] = cfg.lambda;
  j["fd_step"] = cfg.fd_step;
  auto bounds = nlohmann::ordered_json::array();
  for (const Bounds& b : cfg.bounds) bounds.push_back({b.lo, b.hi});
  j["bounds"] = bounds;
  j["mode"] = std::string(to_string(cfg.mode));
  j["seed"] = cfg.seed;
  return j.dump();
}

}  // namespace qaoa_fipso
