#include "hasfc/result_json.hpp"

#include <fmt/format.h>

namespace hasfc {

using nlohmann::ordered_json;

std::string format_availability(double availability) {
  return fmt::format("{:.9f}", availability);
}

std::string format_unavailability(double availability) {
  return fmt::format("{:.3e}", 1 - availability);
}

ordered_json chain_to_json(const OptimizationRequest& request, const EvaluatedChain& chain,
                           int rank) {
  ordered_json nodes = ordered_json::object();
  for (size_t i = 0; i < chain.config.size(); ++i) {
    nodes[request.nodes[i].name] = chain.config[i].padded(request.max_nr);
  }
  return ordered_json{{"rank", rank},
                      {"nodes", std::move(nodes)},
                      {"availability", format_availability(chain.availability)},
                      {"unavailability", format_unavailability(chain.availability)},
                      {"cost", chain.cost}};
}

ordered_json result_to_json(const OptimizationRequest& request, const SelectionResult& result) {
  ordered_json chains = ordered_json::array();
  for (size_t i = 0; i < result.chains.size(); ++i) {
    chains.push_back(chain_to_json(request, result.chains[i], static_cast<int>(i) + 1));
  }
  ordered_json out{{"feasible", result.feasible}, {"chains", std::move(chains)}};
  if (!result.feasible) {
    out["max_achievable_availability"] = format_availability(result.max_achievable_availability);
  }
  const SearchReport& r = result.report;
  out["search_report"] = ordered_json{
      {"raw_chain_count", r.raw_chain_count.str()},
      {"raw_chain_count_sci", scientific(r.raw_chain_count)},
      {"pruned_chain_count", r.pruned_chain_count.str()},
      {"explored", r.explored},
      {"model_solves", r.model_solves}};
  return out;
}

ordered_json errors_to_json(const std::vector<FieldError>& errors) {
  ordered_json list = ordered_json::array();
  for (const FieldError& e : errors) {
    list.push_back(ordered_json{{"path", e.path}, {"message", e.message}});
  }
  return ordered_json{{"errors", std::move(list)}};
}

}  // namespace hasfc
