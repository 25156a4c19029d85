// hasfc: batch front end for the chain availability optimizer.
//
//   hasfc solve --request vims.json [--format table|csv|json] [--mode exact|structural]
//   hasfc compare --requests a.json b.json --out bars.csv [--relaxed]
//   hasfc simulate --request vims.json --chain "3,3;3,3;1,1,1,1;2,2,2" --horizon 1e6 --seed 7
//   hasfc serve --listen 127.0.0.1:8080 [--workers n] [--cache-size n]
//
// Exit codes: 0 feasible / success, 1 input or system error, 2 no chain
// meets the availability target.

#include <atomic>
#include <csignal>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <httplib.h>

#include "hasfc/availability.hpp"
#include "hasfc/optimizer.hpp"
#include "hasfc/request_json.hpp"
#include "hasfc/result_json.hpp"
#include "hasfc/service.hpp"
#include "hasfc/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

struct InputError {
  std::vector<hasfc::FieldError> errors;
};

hasfc::OptimizationRequest load_request(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError{{{path, "cannot open file"}}};
  std::stringstream text;
  text << in.rdbuf();
  hasfc::ValidationOutcome outcome = hasfc::validate_request_text(text.str());
  if (!outcome.ok()) throw InputError{std::move(outcome.errors)};
  return std::move(*outcome.request);
}

void print_errors(const std::string& source, const std::vector<hasfc::FieldError>& errors) {
  fmt::print(stderr, "{}: invalid input\n", source);
  for (const auto& e : errors) fmt::print(stderr, "  {}\n", hasfc::to_string(e));
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void print_table(const hasfc::OptimizationRequest& request, const hasfc::SelectionResult& result) {
  size_t width = 4;
  for (const auto& n : request.nodes) width = std::max(width, n.name.size());
  fmt::print("target availability {}  (MaxNR={}, MaxVNF={}, MaxSFC={}, mode={})\n",
             hasfc::format_availability(request.availability_target), request.max_nr,
             request.max_vnf, request.max_sfc, hasfc::eval_mode_name(request.eval_mode));
  for (size_t i = 0; i < result.chains.size(); ++i) {
    const hasfc::EvaluatedChain& chain = result.chains[i];
    fmt::print("\nSFC {}  A = {}  (1-A = {})  C = {}\n", i + 1,
               hasfc::format_availability(chain.availability),
               hasfc::format_unavailability(chain.availability), chain.cost);
    for (size_t n = 0; n < chain.config.size(); ++n) {
      const auto padded = chain.config[n].padded(request.max_nr);
      std::string cells;
      for (size_t j = 0; j < padded.size(); ++j) {
        if (j) cells += ", ";
        cells += fmt::format("N{}{}={}", request.nodes[n].name.substr(0, 1), j + 1, padded[j]);
      }
      fmt::print("  {:<{}}  [{}]\n", request.nodes[n].name, width, cells);
    }
  }
  if (!result.feasible) {
    fmt::print("\nno chain meets the target; max achievable availability {}\n",
               hasfc::format_availability(result.max_achievable_availability));
  }
  const hasfc::SearchReport& r = result.report;
  fmt::print("\nsearch: {} raw chains ({}), {} after pruning, {} explored, {} model solves, {:.1f} ms\n",
             r.raw_chain_count.str(), hasfc::scientific(r.raw_chain_count),
             r.pruned_chain_count.str(), r.explored, r.model_solves, r.wall_time.count());
}

void print_csv(const hasfc::OptimizationRequest& request, const hasfc::SelectionResult& result) {
  fmt::print("rank,availability,unavailability,cost,chain\n");
  for (size_t i = 0; i < result.chains.size(); ++i) {
    const auto& c = result.chains[i];
    fmt::print("{},{},{},{},{}\n", i + 1, hasfc::format_availability(c.availability),
               hasfc::format_unavailability(c.availability), c.cost,
               csv_quote(hasfc::format_chain_config(c.config, request.max_nr)));
  }
}

int run_solve(const std::string& path, const std::string& format, const std::string& mode) {
  hasfc::OptimizationRequest request = load_request(path);
  if (mode == "exact") request.eval_mode = hasfc::EvalMode::kExact;
  if (mode == "structural") request.eval_mode = hasfc::EvalMode::kStructural;
  const hasfc::SelectionResult result = hasfc::optimize(request);
  if (format == "json") {
    fmt::print("{}\n", hasfc::result_to_json(request, result).dump());
  } else if (format == "csv") {
    print_csv(request, result);
  } else {
    print_table(request, result);
  }
  if (!result.feasible && format != "table") {
    fmt::print(stderr, "no chain meets the target; max achievable availability {}\n",
               hasfc::format_availability(result.max_achievable_availability));
  }
  return result.feasible ? kExitOk : kExitInfeasible;
}

int run_compare(const std::vector<std::string>& paths, const std::string& out_path, bool relaxed) {
  std::ofstream out(out_path);
  if (!out) {
    fmt::print(stderr, "{}: cannot open for writing\n", out_path);
    return kExitError;
  }
  out << "label,availability,unavailability,cost,feasible\n";
  int status = kExitOk;
  for (const std::string& path : paths) {
    const std::string stem = std::filesystem::path(path).stem().string();
    try {
      const hasfc::OptimizationRequest request = load_request(path);
      const hasfc::SelectionResult result = hasfc::optimize(request);
      auto row = [&](const std::string& label, const hasfc::EvaluatedChain& c) {
        const bool feasible = c.availability >= request.availability_target;
        out << fmt::format("{},{},{},{},{}\n", csv_quote(label),
                           hasfc::format_availability(c.availability),
                           hasfc::format_unavailability(c.availability), c.cost,
                           feasible ? "true" : "false");
      };
      for (size_t i = 0; i < result.chains.size(); ++i) {
        row(fmt::format("{}#{}", stem, i + 1), result.chains[i]);
      }
      if (!result.feasible) {
        fmt::print(stderr, "{}: no chain meets {}; max achievable {}\n", path,
                   request.availability_target,
                   hasfc::format_availability(result.max_achievable_availability));
        if (relaxed) row(fmt::format("{}#best", stem), result.most_available);
      }
    } catch (const InputError& e) {
      print_errors(path, e.errors);
      status = kExitError;
    } catch (const std::exception& e) {
      fmt::print(stderr, "{}: {}\n", path, e.what());
      status = kExitError;
    }
  }
  return status;
}

int run_simulate(const std::string& path, const std::string& chain_text, hasfc::SimConfig config) {
  const hasfc::OptimizationRequest request = load_request(path);
  hasfc::ChainConfig chain;
  try {
    chain = hasfc::parse_chain_config(chain_text);
  } catch (const hasfc::ValidationError& e) {
    throw InputError{e.errors()};
  }
  if (auto errors = hasfc::check_chain_config(request, chain); !errors.empty()) {
    throw InputError{std::move(errors)};
  }
  const double analytic =
      hasfc::chain_availability(request.nodes, chain, request.eval_mode);
  const hasfc::SimEstimate est = hasfc::simulate_chain(request.nodes, chain, config);
  const double diff = est.mean - analytic;
  double z = 0;
  if (est.std_error > 0) {
    z = diff / est.std_error;
  } else if (diff != 0) {
    z = std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  fmt::print("chain          {}\n", hasfc::format_chain_config(chain, request.max_nr));
  fmt::print("horizon        {} h (warmup {} h), {} replications, seed {}\n", config.horizon,
             config.effective_warmup(), est.replications, config.seed);
  fmt::print("analytic       {}  ({})\n", hasfc::format_availability(analytic),
             hasfc::eval_mode_name(request.eval_mode));
  fmt::print("simulated      {}  +- {:.3e} (1 s.e.)\n", hasfc::format_availability(est.mean),
             est.std_error);
  fmt::print("z              {:.3f}\n", z);
  if (est.too_short) fmt::print("warning        horizon too short: a replication saw no events\n");
  return kExitOk;
}

int run_serve(const std::string& listen, hasfc::ServiceConfig config) {
  std::string host = "0.0.0.0";
  int port = 8080;
  if (auto colon = listen.rfind(':'); colon != std::string::npos) {
    host = listen.substr(0, colon);
    port = std::stoi(listen.substr(colon + 1));
  } else {
    port = std::stoi(listen);
  }

  // Route SIGINT/SIGTERM to a watcher thread so the server stops cleanly.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  hasfc::Service service(config);
  httplib::Server server;
  service.attach(server);
  // httplib also sets SO_REUSEPORT by default, which would let a second
  // instance share the port silently.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  if (!server.bind_to_port(host, port)) {
    fmt::print(stderr, "cannot listen on {}:{}\n", host, port);
    return kExitError;
  }
  std::atomic<bool> signalled{false};
  std::thread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    signalled = true;
    server.stop();
  });
  fmt::print("listening on {}:{}\n", host, port);
  std::fflush(stdout);
  server.listen_after_bind();
  // Stopped by something other than a signal: wake the watcher.
  if (!signalled) pthread_kill(watcher.native_handle(), SIGTERM);
  watcher.join();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Availability/cost optimizer for redundant service function chains"};
  app.require_subcommand(1);

  std::string request_path;
  std::string format = "table";
  std::string mode;
  auto* solve = app.add_subcommand("solve", "Select the cheapest chains meeting the target");
  solve->add_option("--request", request_path, "Request JSON file")->required();
  solve->add_option("--format", format)->check(CLI::IsMember({"table", "csv", "json"}));
  solve->add_option("--mode", mode, "Override eval_mode")
      ->check(CLI::IsMember({"exact", "structural"}));

  std::vector<std::string> compare_paths;
  std::string out_path;
  bool relaxed = false;
  auto* compare = app.add_subcommand("compare", "Top chains of several requests as CSV");
  compare->add_option("--requests", compare_paths, "Request JSON files");
  compare->add_option("--out", out_path, "Output CSV")->required();
  compare->add_flag("--relaxed", relaxed, "Emit the most available chain of infeasible requests");

  std::string chain_text;
  hasfc::SimConfig sim;
  double warmup = -1;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of one chain");
  simulate->add_option("--request", request_path, "Request JSON file")->required();
  simulate->add_option("--chain", chain_text, "e.g. \"3,3;3,3;1,1,1,1;2,2,2\"")->required();
  simulate->add_option("--horizon", sim.horizon, "Simulated hours per replication");
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--replications", sim.replications);
  simulate->add_option("--warmup", warmup, "Discarded hours (default horizon/10)");

  std::string listen = "127.0.0.1:8080";
  hasfc::ServiceConfig service_config;
  auto* serve = app.add_subcommand("serve", "Run the REST service");
  serve->add_option("--listen", listen, "host:port");
  serve->add_option("--workers", service_config.workers);
  serve->add_option("--cache-size", service_config.cache_capacity);
  serve->add_option("--queue-limit", service_config.queue_limit);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return run_solve(request_path, format, mode);
    if (*compare) return run_compare(compare_paths, out_path, relaxed);
    if (*simulate) {
      if (warmup >= 0) sim.warmup = warmup;
      return run_simulate(request_path, chain_text, sim);
    }
    if (*serve) return run_serve(listen, service_config);
  } catch (const InputError& e) {
    print_errors(request_path, e.errors);
    return kExitError;
  } catch (const hasfc::ValidationError& e) {
    print_errors(request_path, e.errors());
    return kExitError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitError;
  }
  return kExitError;
}
