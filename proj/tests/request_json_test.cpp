#include <fstream>
#include <sstream>

#include <doctest.h>

#include "hasfc/request_json.hpp"
#include "oracles.hpp"

using namespace hasfc;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

json sample() { return json::parse(read_file(HASFC_DATA_DIR "/vims_request.json")); }

bool has_error(const ValidationOutcome& out, const std::string& path) {
  for (const auto& e : out.errors) {
    if (e.path == path) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("bundled vIMS request validates") {
  const ValidationOutcome out = validate_request(sample());
  REQUIRE(out.ok());
  CHECK(*out.request == testing::vims_request());
}

TEST_CASE("out-of-range target is reported by field") {
  json raw = sample();
  raw["availability_target"] = 1.5;
  const ValidationOutcome out = validate_request(raw);
  CHECK_FALSE(out.ok());
  REQUIRE(out.errors.size() == 1);
  CHECK(out.errors[0].path == "availability_target");
  CHECK(out.errors[0].message == "must be in (0,1)");
}

TEST_CASE("zero mttf names node and layer") {
  json raw = sample();
  raw["nodes"][2]["vm"]["mttf"] = 0;
  const ValidationOutcome out = validate_request(raw);
  CHECK(has_error(out, "nodes[2].vm.mttf"));
}

TEST_CASE("all violations are collected in one pass") {
  json raw = sample();
  raw["availability_target"] = 0;
  raw["max_nr"] = 2.5;
  raw.erase("max_sfc");
  raw["nodes"][0]["hw"]["mttr"] = -1;
  raw["nodes"][1]["name"] = "P-CSCF";
  raw["nodes"][3]["min_active_vnfs"] = 0;
  raw["nodes"][3]["vnf"].erase("cost");
  raw["colour"] = "blue";
  raw["eval_mode"] = "fast";
  const ValidationOutcome out = validate_request(raw);
  CHECK_FALSE(out.ok());
  for (const char* path : {"availability_target", "max_nr", "max_sfc", "nodes[0].hw.mttr",
                           "nodes[1].name", "nodes[3].min_active_vnfs", "nodes[3].vnf.cost",
                           "colour", "eval_mode"}) {
    CHECK_MESSAGE(has_error(out, path), path);
  }
  CHECK(out.errors.size() == 9);
}

TEST_CASE("structural problems") {
  CHECK(validate_request(json::array()).errors.size() == 1);
  CHECK(has_error(validate_request(json{{"nodes", json::array()}}), "nodes"));
  CHECK(has_error(validate_request(json{{"nodes", 3}}), "nodes"));
  const ValidationOutcome text = validate_request_text("{\"nodes\": [");
  REQUIRE(text.errors.size() == 1);
  CHECK(text.errors[0].path.empty());
}

TEST_CASE("validation is idempotent") {
  const ValidationOutcome first = validate_request(sample());
  REQUIRE(first.ok());
  const ValidationOutcome second = validate_request(request_to_json(*first.request));
  REQUIRE(second.ok());
  CHECK(*second.request == *first.request);

  // A request built in code round-trips as well.
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    OptimizationRequest r;
    for (int j = 0; j < 3; ++j) r.nodes.push_back(testing::random_node(rng, "n" + std::to_string(j), 3));
    r.availability_target = 0.999;
    r.max_nr = 3;
    r.max_vnf = 2;
    r.max_sfc = 5;
    r.eval_mode = i % 2 ? EvalMode::kStructural : EvalMode::kExact;
    const ValidationOutcome out = validate_request(request_to_json(r));
    REQUIRE(out.ok());
    CHECK(*out.request == r);
  }
}

TEST_CASE("canonical key ignores spelling, not meaning") {
  const json raw = sample();
  const RequestKey base = canonical_request_key(*validate_request(raw).request);

  // Same content with reordered fields, real-valued integers and explicit
  // defaults.
  json reordered = json::parse(R"({
    "max_sfc": 4, "max_vnf": 6.0, "max_nr": 4, "eval_mode": "exact",
    "availability_target": 0.99999, "nodes": []})");
  for (const auto& n : raw["nodes"]) {
    json node = n;
    node["min_active_vnfs"] = 1;
    node["hw"]["mttf"] = 60000.0;
    reordered["nodes"].push_back(node);
  }
  CHECK(canonical_request_key(*validate_request(reordered).request) == base);

  json target = raw;
  target["availability_target"] = 0.999999;
  CHECK(canonical_request_key(*validate_request(target).request) != base);

  json sfc = raw;
  sfc["max_sfc"] = 5;
  CHECK(canonical_request_key(*validate_request(sfc).request) != base);

  json swapped = raw;
  std::swap(swapped["nodes"][0], swapped["nodes"][3]);
  CHECK(canonical_request_key(*validate_request(swapped).request) != base);
}

TEST_CASE("chain config text") {
  const ChainConfig chain = parse_chain_config("3,3,0,0;[1,1,1,1];2, 2 ,2;4");
  REQUIRE(chain.size() == 4);
  CHECK(chain[0] == NodeConfig({3, 3}));
  CHECK(chain[1] == NodeConfig({1, 1, 1, 1}));
  CHECK(chain[2] == NodeConfig({2, 2, 2}));
  CHECK(format_chain_config(chain, 4) == "3,3,0,0;1,1,1,1;2,2,2,0;4,0,0,0");
  CHECK_THROWS_AS(parse_chain_config("3,x"), ValidationError);
  CHECK_THROWS_AS(parse_chain_config("0,0;1"), ValidationError);
  CHECK_THROWS_AS(parse_chain_config("1;;1"), ValidationError);
}
