#include "hasfc/request_json.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace hasfc {

using nlohmann::json;

namespace {

class Reader {
 public:
  explicit Reader(std::vector<FieldError>& errors) : errors_(errors) {}

  void fail(std::string path, std::string message) {
    errors_.push_back({std::move(path), std::move(message)});
  }

  std::optional<double> number(const json& obj, const std::string& key, const std::string& path,
                               bool required = true) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(path, "is required");
      return std::nullopt;
    }
    if (!it->is_number()) {
      fail(path, "must be a number");
      return std::nullopt;
    }
    return it->get<double>();
  }

  std::optional<int> integer(const json& obj, const std::string& key, const std::string& path,
                             bool required = true) {
    auto value = number(obj, key, path, required);
    if (!value) return std::nullopt;
    if (std::floor(*value) != *value || std::abs(*value) > std::numeric_limits<int>::max()) {
      fail(path, "must be an integer");
      return std::nullopt;
    }
    return static_cast<int>(*value);
  }

  void reject_unknown(const json& obj, const std::string& path,
                      std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : obj.items()) {
      bool known = false;
      for (auto a : allowed) known = known || key == a;
      if (!known) fail(path.empty() ? key : path + "." + key, "unknown field");
    }
  }

 private:
  std::vector<FieldError>& errors_;
};

LayerParams read_layer(Reader& in, const json& node, const std::string& key,
                       const std::string& path) {
  LayerParams p;
  auto it = node.find(key);
  if (it == node.end()) {
    in.fail(path, "is required");
    return p;
  }
  if (!it->is_object()) {
    in.fail(path, "must be an object with mttf, mttr, cost");
    return p;
  }
  in.reject_unknown(*it, path, {"mttf", "mttr", "cost"});
  if (auto v = in.number(*it, "mttf", path + ".mttf")) {
    p.mttf = *v;
    if (!(p.mttf > 0)) in.fail(path + ".mttf", "must be > 0");
  }
  if (auto v = in.number(*it, "mttr", path + ".mttr")) {
    p.mttr = *v;
    if (!(p.mttr > 0)) in.fail(path + ".mttr", "must be > 0");
  }
  if (auto v = in.number(*it, "cost", path + ".cost")) {
    p.unit_cost = *v;
    if (!(p.unit_cost >= 0)) in.fail(path + ".cost", "must be >= 0");
  }
  return p;
}

json layer_to_json(const LayerParams& p) {
  return json{{"mttf", p.mttf}, {"mttr", p.mttr}, {"cost", p.unit_cost}};
}

}  // namespace

ValidationOutcome validate_request(const json& raw) {
  ValidationOutcome out;
  Reader in(out.errors);
  if (!raw.is_object()) {
    in.fail("", "request must be a JSON object");
    return out;
  }
  in.reject_unknown(raw, "", {"nodes", "availability_target", "max_nr", "max_vnf", "max_sfc",
                              "eval_mode"});

  OptimizationRequest req;
  auto nodes = raw.find("nodes");
  if (nodes == raw.end()) {
    in.fail("nodes", "is required");
  } else if (!nodes->is_array()) {
    in.fail("nodes", "must be an array");
  } else if (nodes->empty()) {
    in.fail("nodes", "at least one node is required");
  } else {
    for (size_t i = 0; i < nodes->size(); ++i) {
      const json& node = (*nodes)[i];
      const std::string base = fmt::format("nodes[{}]", i);
      NodeSpec spec;
      if (!node.is_object()) {
        in.fail(base, "must be an object");
        req.nodes.push_back(spec);
        continue;
      }
      in.reject_unknown(node, base, {"name", "hw", "vm", "vnf", "min_active_vnfs"});
      auto name = node.find("name");
      if (name == node.end()) {
        in.fail(base + ".name", "is required");
      } else if (!name->is_string() || name->get<std::string>().empty()) {
        in.fail(base + ".name", "must be a non-empty string");
      } else {
        spec.name = name->get<std::string>();
        for (const NodeSpec& prev : req.nodes) {
          if (prev.name == spec.name) {
            in.fail(base + ".name", fmt::format("duplicate node name \"{}\"", spec.name));
            break;
          }
        }
      }
      spec.hw = read_layer(in, node, "hw", base + ".hw");
      spec.vm = read_layer(in, node, "vm", base + ".vm");
      spec.vnf = read_layer(in, node, "vnf", base + ".vnf");
      if (auto m = in.integer(node, "min_active_vnfs", base + ".min_active_vnfs", false)) {
        spec.min_active_vnfs = *m;
        if (*m < 1) in.fail(base + ".min_active_vnfs", "must be >= 1");
      }
      req.nodes.push_back(std::move(spec));
    }
  }

  if (auto a0 = in.number(raw, "availability_target", "availability_target")) {
    req.availability_target = *a0;
    if (!(*a0 > 0 && *a0 < 1)) in.fail("availability_target", "must be in (0,1)");
  }
  auto bounded = [&](const char* key, int& field) {
    if (auto v = in.integer(raw, key, key)) {
      field = *v;
      if (*v < 1) in.fail(key, "must be >= 1");
    }
  };
  bounded("max_nr", req.max_nr);
  bounded("max_vnf", req.max_vnf);
  bounded("max_sfc", req.max_sfc);

  if (auto mode = raw.find("eval_mode"); mode != raw.end()) {
    if (*mode == "exact") {
      req.eval_mode = EvalMode::kExact;
    } else if (*mode == "structural") {
      req.eval_mode = EvalMode::kStructural;
    } else {
      in.fail("eval_mode", "must be \"exact\" or \"structural\"");
    }
  }

  if (out.errors.empty()) {
    // Catches anything the schema pass cannot see (non-finite values).
    out.errors = check_request(req);
  }
  if (out.errors.empty()) out.request = std::move(req);
  return out;
}

ValidationOutcome validate_request_text(std::string_view text) {
  json raw = json::parse(text, nullptr, false);
  if (raw.is_discarded()) {
    ValidationOutcome out;
    out.errors.push_back({"", "body is not valid JSON"});
    return out;
  }
  return validate_request(raw);
}

json request_to_json(const OptimizationRequest& request) {
  json nodes = json::array();
  for (const NodeSpec& n : request.nodes) {
    nodes.push_back(json{{"name", n.name},
                         {"hw", layer_to_json(n.hw)},
                         {"vm", layer_to_json(n.vm)},
                         {"vnf", layer_to_json(n.vnf)},
                         {"min_active_vnfs", n.min_active_vnfs}});
  }
  return json{{"nodes", std::move(nodes)},
              {"availability_target", request.availability_target},
              {"max_nr", request.max_nr},
              {"max_vnf", request.max_vnf},
              {"max_sfc", request.max_sfc},
              {"eval_mode", eval_mode_name(request.eval_mode)}};
}

RequestKey canonical_request_key(const OptimizationRequest& request) {
  // nlohmann::json objects iterate in key order and doubles print with
  // round-trip precision, so the dump is a canonical form.
  return RequestKey(request_to_json(request).dump());
}

ChainConfig parse_chain_config(std::string_view text) {
  ChainConfig chain;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view node = text.substr(start, end - start);
    std::vector<int> counts;
    size_t pos = 0;
    while (pos <= node.size()) {
      size_t comma = node.find(',', pos);
      if (comma == std::string_view::npos) comma = node.size();
      std::string_view item = node.substr(pos, comma - pos);
      while (!item.empty() && (item.front() == ' ' || item.front() == '[')) item.remove_prefix(1);
      while (!item.empty() && (item.back() == ' ' || item.back() == ']')) item.remove_suffix(1);
      int value = 0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
      if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
        throw ValidationError(fmt::format("chain[{}]", chain.size()),
                              fmt::format("invalid VNF count \"{}\"", item));
      }
      counts.push_back(value);
      pos = comma + 1;
    }
    try {
      chain.emplace_back(std::move(counts));
    } catch (const std::invalid_argument& e) {
      throw ValidationError(fmt::format("chain[{}]", chain.size()), e.what());
    }
    start = end + 1;
  }
  return chain;
}

std::string format_chain_config(const ChainConfig& config, int width) {
  std::string out;
  for (size_t i = 0; i < config.size(); ++i) {
    if (i) out += ';';
    out += fmt::format("{}", fmt::join(config[i].padded(width), ","));
  }
  return out;
}

}  // namespace hasfc
