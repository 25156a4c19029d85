#pragma once

// JSON encoding of optimization results, shared by the REST service and the
// CLI so both emit byte-identical documents for the same request.
//
// Availabilities are decimal strings with 9 fractional digits; node configs
// are zero-padded to max_nr entries, keyed by node name in chain order.

#include <string>

#include <json.hpp>

#include "hasfc/domain.hpp"
#include "hasfc/optimizer.hpp"

namespace hasfc {

std::string format_availability(double availability);
std::string format_unavailability(double availability);

nlohmann::ordered_json chain_to_json(const OptimizationRequest& request,
                                     const EvaluatedChain& chain, int rank);

/// Deterministic fields only; wall time is left out so repeated runs agree.
nlohmann::ordered_json result_to_json(const OptimizationRequest& request,
                                      const SelectionResult& result);

nlohmann::ordered_json errors_to_json(const std::vector<FieldError>& errors);

}  // namespace hasfc
