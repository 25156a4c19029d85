#pragma once

// Decoding, validation and canonical encoding of optimization requests. The
// same schema serves the REST body and the CLI request files.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hasfc/domain.hpp"

namespace hasfc {

struct ValidationOutcome {
  std::optional<OptimizationRequest> request;
  std::vector<FieldError> errors;

  bool ok() const { return request.has_value(); }
};

/// Validates arbitrary decoded JSON against the request schema. Never stops
/// at the first problem: every violation is reported with its field path.
ValidationOutcome validate_request(const nlohmann::json& raw);

/// Parses text first; malformed JSON is reported as a single error at "".
ValidationOutcome validate_request_text(std::string_view text);

/// Encodes a request with every optional field made explicit.
nlohmann::json request_to_json(const OptimizationRequest& request);

/// Opaque cache key: equal for semantically identical requests regardless of
/// field order, integer/real spelling or omitted defaults.
class RequestKey {
 public:
  explicit RequestKey(std::string canonical) : canonical_(std::move(canonical)) {}
  const std::string& str() const { return canonical_; }
  auto operator<=>(const RequestKey&) const = default;

 private:
  std::string canonical_;
};

RequestKey canonical_request_key(const OptimizationRequest& request);

/// Parses "3,3;1,1,1,1;2" style chain text (nodes separated by ';', replica
/// counts by ','; zero entries are allowed and ignored).
ChainConfig parse_chain_config(std::string_view text);

std::string format_chain_config(const ChainConfig& config, int width);

}  // namespace hasfc

template <>
struct std::hash<hasfc::RequestKey> {
  size_t operator()(const hasfc::RequestKey& key) const noexcept {
    return std::hash<std::string>{}(key.str());
  }
};
