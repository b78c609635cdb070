// Copyright 2026 The Gamepot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gamepot/analyzer.hpp"
#include "gamepot/clock.hpp"
#include "gamepot/errors.hpp"
#include "gamepot/game.hpp"
#include "gamepot/log.hpp"
#include "gamepot/net.hpp"
#include "gamepot/rng.hpp"
#include "gamepot/sim.hpp"
#include "gamepot/solver.hpp"

namespace {

using nlohmann::json;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw gamepot::ConfigError("cannot read '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

struct SolveOpts {
  std::string game_path;
  std::string builtin;
  std::string qre_csv;
  double lambda_max = 100.0;
  int steps = 60;
  double tol = 1e-10;
  double epsilon = 1e-9;
};

json mixture_json(const std::vector<std::string>& labels,
                  const std::vector<double>& probs) {
  json out = json::object();
  for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]] = probs[i];
  return out;
}

int run_solve(const SolveOpts& opt) {
  const gamepot::game::GameSpec spec =
      opt.builtin.empty() ? gamepot::game::game_from_json(slurp(opt.game_path))
                          : gamepot::game::builtin_game(opt.builtin);
  const gamepot::solver::NormalForm nf = gamepot::solver::to_normal_form(spec);

  gamepot::solver::QreOptions qre;
  qre.lambda_max = opt.lambda_max;
  qre.steps = opt.steps;
  qre.tolerance = opt.tol;
  const gamepot::solver::EquilibriumResult result =
      gamepot::solver::nash_from_qre(nf, qre, opt.epsilon);
  const gamepot::solver::Verification check =
      gamepot::solver::verify_equilibrium(nf, result.profile, opt.epsilon);
  const gamepot::solver::BehavioralStrategy behavioral =
      gamepot::solver::to_behavioral(nf, result.profile);

  json out;
  out["game"] = spec.name;
  out["normal_form"] = {{"attacker_strategies", nf.row_labels},
                        {"defender_strategies", nf.col_labels}};
  out["elimination_trace"] = json::array();
  for (const gamepot::solver::Elimination& e : result.trace) {
    out["elimination_trace"].push_back({{"iteration", e.iteration},
                                        {"player", to_string(e.player)},
                                        {"eliminated", e.eliminated},
                                        {"dominator", e.dominator}});
  }
  out["equilibrium"] = {
      {"method", result.method},
      {"attacker", mixture_json(nf.row_labels, result.profile.attacker)},
      {"defender", mixture_json(nf.col_labels, result.profile.defender)}};
  json nodes = json::array();
  for (const gamepot::solver::NodeMarginal& node : behavioral.defender) {
    nodes.push_back({{"node", node.label},
                     {"mixture",
                      mixture_json(node.actions, node.probabilities)}});
  }
  out["behavioral"] = {
      {"attacker", mixture_json(nf.row_labels, behavioral.attacker)},
      {"defender", nodes}};
  out["verification"] = {{"ok", check.ok},
                         {"epsilon", opt.epsilon},
                         {"attacker_gain", check.attacker_gain},
                         {"defender_gain", check.defender_gain}};
  if (!result.path.empty()) {
    out["qre"] = {{"points", result.path.size()},
                  {"lambda_max", result.path.back().lambda},
                  {"terminal_residual", result.path.back().residual}};
  }

  if (!opt.qre_csv.empty()) {
    std::ofstream csv(opt.qre_csv, std::ios::binary);
    if (!csv) throw gamepot::ConfigError("cannot write '" + opt.qre_csv + "'");
    csv << "lambda,residual,iterations";
    for (const std::string& label : nf.row_labels) csv << ",a:" << label;
    for (const std::string& label : nf.col_labels) csv << ",d:" << label;
    csv << "\n";
    char buf[64];
    for (const gamepot::solver::QrePoint& p : result.path) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%d", p.lambda, p.residual,
                    p.iterations);
      csv << buf;
      for (double v : p.attacker) {
        std::snprintf(buf, sizeof(buf), ",%.17g", v);
        csv << buf;
      }
      for (double v : p.defender) {
        std::snprintf(buf, sizeof(buf), ",%.17g", v);
        csv << buf;
      }
      csv << "\n";
    }
  }

  std::printf("%s\n", out.dump(2).c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// serve
// ---------------------------------------------------------------------------

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

struct ServeOpts {
  gamepot::net::ServeConfig config;
  std::string policy_file;
  std::string credentials_file;
};

int run_serve(ServeOpts opt) {
  if (!opt.policy_file.empty()) {
    opt.config.policy_config_json = slurp(opt.policy_file);
  }
  gamepot::net::CredentialStore creds =
      opt.credentials_file.empty()
          ? gamepot::net::CredentialStore::defaults()
          : gamepot::net::CredentialStore::from_json_file(
                opt.credentials_file);

  gamepot::SystemClock clock;
  gamepot::net::Service service(opt.config, std::move(creds), clock);
  service.start();
  std::printf("gamepot serve: %s on %s:%d (instance %s)\n",
              opt.config.transport.c_str(), opt.config.bind_address.c_str(),
              service.port(), opt.config.instance.c_str());
  if (!opt.config.log_path.empty()) {
    std::printf("gamepot serve: logging to %s\n", opt.config.log_path.c_str());
  }
  std::fflush(stdout);

  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop) {
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
  }
  service.stop();
  std::printf("gamepot serve: stopped after %d sessions\n",
              service.sessions_started());
  return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateOpts {
  std::vector<std::string> instances;  // label:policy:count
  std::vector<std::string> personas;
  std::string log_dir = ".";
  std::string username = "bruno";
  std::uint64_t seed = 20260814;
  int think_min_ms = 1000;
  int think_max_ms = 10000;
  // Remote mode.
  std::string connect;
  std::string password;
  int sessions = 1;
};

gamepot::sim::InstanceSpec parse_instance(const std::string& text,
                                          const std::string& log_dir,
                                          const std::string& username) {
  const std::size_t first = text.find(':');
  const std::size_t last = text.rfind(':');
  if (first == std::string::npos || first == last) {
    throw gamepot::ConfigError("instance spec '" + text +
                               "' is not label:policy:count");
  }
  gamepot::sim::InstanceSpec spec;
  spec.label = text.substr(0, first);
  const std::string policy = text.substr(first + 1, last - first - 1);
  if (!policy.empty() && policy[0] == '@') {
    spec.policy_config_json = slurp(policy.substr(1));
  } else {
    spec.policy_name = policy;
  }
  try {
    spec.sessions = std::stoi(text.substr(last + 1));
  } catch (const std::exception&) {
    throw gamepot::ConfigError("instance spec '" + text +
                               "' has a non-numeric count");
  }
  spec.log_path = log_dir + "/" + spec.label + ".ndjson";
  spec.username = username;
  return spec;
}

int run_simulate(const SimulateOpts& opt) {
  if (!opt.connect.empty()) {
    // Remote mode: type at a live service instead of an in-process shell.
    const std::size_t colon = opt.connect.rfind(':');
    if (colon == std::string::npos) {
      throw gamepot::ConfigError("--connect expects host:port");
    }
    const std::string host = opt.connect.substr(0, colon);
    const int port = std::stoi(opt.connect.substr(colon + 1));
    std::vector<std::string> rotation = opt.personas;
    if (rotation.empty()) {
      for (const gamepot::sim::Persona& p : gamepot::sim::builtin_personas()) {
        rotation.push_back(p.name);
      }
    }
    for (int s = 0; s < opt.sessions; ++s) {
      const std::string& name = rotation[s % rotation.size()];
      const gamepot::sim::Persona* persona = gamepot::sim::find_persona(name);
      if (persona == nullptr) {
        throw gamepot::ConfigError("unknown persona '" + name + "'");
      }
      gamepot::sim::TcpTerminal term(host, port, opt.username, opt.password);
      gamepot::sim::RunOptions run;
      run.seed = gamepot::mix_seed(opt.seed, static_cast<std::uint64_t>(s));
      const gamepot::sim::Transcript t =
          gamepot::sim::run_persona(*persona, term, run);
      std::printf("session %d: persona %s, %d commands, closed (%s)\n", s + 1,
                  name.c_str(), t.commands(), t.close_reason.c_str());
    }
    return 0;
  }

  if (opt.instances.empty()) {
    throw gamepot::ConfigError(
        "simulate needs at least one --instance label:policy:count");
  }
  std::vector<gamepot::sim::InstanceSpec> specs;
  for (const std::string& text : opt.instances) {
    specs.push_back(parse_instance(text, opt.log_dir, opt.username));
  }
  gamepot::sim::CampaignOptions campaign;
  campaign.seed = opt.seed;
  campaign.personas = opt.personas;
  campaign.think_min_ms = opt.think_min_ms;
  campaign.think_max_ms = opt.think_max_ms;

  const gamepot::sim::CampaignResult result =
      gamepot::sim::run_campaign(specs, campaign);
  for (const auto& instance : result.instances) {
    std::printf("%s: %d sessions -> %s\n", instance.label.c_str(),
                instance.sessions, instance.log_path.c_str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

struct AnalyzeOpts {
  std::vector<std::string> logs;
  std::string format = "text";
  bool by_instance = true;
  bool strict = false;
};

int run_analyze(const AnalyzeOpts& opt) {
  std::vector<gamepot::logging::Event> events;
  std::size_t skipped = 0;
  for (const std::string& path : opt.logs) {
    gamepot::logging::ParseResult parsed;
    try {
      parsed = gamepot::logging::parse_log_file(path, opt.strict);
    } catch (const gamepot::LogParseError& err) {
      throw gamepot::LogParseError(
          path + ":" + std::to_string(err.line()) + ": " + err.what(),
          err.line());
    }
    skipped += parsed.warnings.size();
    for (gamepot::logging::Event& ev : parsed.events) {
      events.push_back(std::move(ev));
    }
  }
  const gamepot::logging::SessionsReport sessions =
      gamepot::logging::sessions_from_events(events);
  if (skipped > 0) {
    std::fprintf(stderr, "gamepot analyze: skipped %zu malformed lines\n",
                 skipped);
  }
  for (const std::string& note : sessions.anomalies) {
    std::fprintf(stderr, "gamepot analyze: %s\n", note.c_str());
  }
  const gamepot::analyzer::Report report =
      gamepot::analyzer::analyze(sessions.sessions, opt.by_instance);
  std::fputs(gamepot::analyzer::render(report, opt.format).c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gamepot: deception-game honeypot toolkit"};
  app.require_subcommand(1);

  SolveOpts solve;
  CLI::App* cmd_solve =
      app.add_subcommand("solve", "solve the deception game");
  CLI::Option* solve_game =
      cmd_solve->add_option("--game", solve.game_path, "GameSpec JSON file");
  cmd_solve->add_option("--builtin", solve.builtin, "built-in game name")
      ->excludes(solve_game);
  cmd_solve->add_option("--lambda-max", solve.lambda_max,
                        "QRE homotopy endpoint");
  cmd_solve->add_option("--steps", solve.steps, "QRE schedule length");
  cmd_solve->add_option("--tol", solve.tol, "QRE fixed-point tolerance");
  cmd_solve->add_option("--epsilon", solve.epsilon,
                        "equilibrium verification tolerance");
  cmd_solve->add_option("--qre-csv", solve.qre_csv,
                        "write the QRE path to this CSV file");

  ServeOpts serve;
  serve.config.port = 2222;
  CLI::App* cmd_serve =
      app.add_subcommand("serve", "run the honeypot front end");
  cmd_serve->add_option("--bind", serve.config.bind_address, "bind address");
  cmd_serve->add_option("--port", serve.config.port, "TCP port");
  cmd_serve->add_option("--transport", serve.config.transport,
                        "transport (tcp)");
  cmd_serve->add_option("--policy", serve.config.policy_name, "policy name");
  cmd_serve->add_option("--policy-file", serve.policy_file,
                        "policy mixture JSON file");
  cmd_serve->add_option("--credentials", serve.credentials_file,
                        "credentials JSON file");
  cmd_serve->add_option("--log", serve.config.log_path, "event log path");
  cmd_serve->add_option("--capture-dir", serve.config.capture_dir,
                        "directory for captured downloads");
  cmd_serve->add_option("--instance", serve.config.instance,
                        "instance label stamped into events");
  cmd_serve->add_option("--seed", serve.config.seed, "policy RNG seed");
  cmd_serve->add_option("--max-attempts", serve.config.max_login_attempts,
                        "login attempts per connection");
  cmd_serve->add_option("--ban-threshold", serve.config.ban.max_failures,
                        "failures before a ban");
  cmd_serve->add_option("--ban-window", serve.config.ban.window_seconds,
                        "failure window, seconds");
  cmd_serve->add_option("--ban-seconds", serve.config.ban.ban_seconds,
                        "ban duration, seconds");
  cmd_serve->add_flag("--live-fetch", serve.config.live_fetch,
                      "really fetch http:// downloads");

  SimulateOpts simulate;
  CLI::App* cmd_simulate =
      app.add_subcommand("simulate", "replay attacker personas");
  cmd_simulate->add_option("--instance", simulate.instances,
                           "label:policy:count (policy may be @file.json)");
  cmd_simulate->add_option("--personas", simulate.personas,
                           "persona rotation (default: all built-ins)")
      ->delimiter(',');
  cmd_simulate->add_option("--log-dir", simulate.log_dir,
                           "directory for per-instance logs");
  cmd_simulate->add_option("--seed", simulate.seed, "campaign seed");
  cmd_simulate->add_option("--username", simulate.username,
                           "account the personas use");
  cmd_simulate->add_option("--think-min-ms", simulate.think_min_ms,
                           "minimum think time");
  cmd_simulate->add_option("--think-max-ms", simulate.think_max_ms,
                           "maximum think time");
  cmd_simulate->add_option("--connect", simulate.connect,
                           "host:port of a live service (remote mode)");
  cmd_simulate->add_option("--password", simulate.password,
                           "password for remote mode");
  cmd_simulate->add_option("--sessions", simulate.sessions,
                           "session count for remote mode");

  AnalyzeOpts analyze;
  CLI::App* cmd_analyze =
      app.add_subcommand("analyze", "summarize event logs");
  cmd_analyze->add_option("--log", analyze.logs, "event log path (repeatable)")
      ->required();
  cmd_analyze->add_option("--format", analyze.format, "text, csv, or json");
  cmd_analyze->add_option("--by-instance", analyze.by_instance,
                          "group by instance label (default true)");
  cmd_analyze->add_flag("--strict", analyze.strict,
                        "fail on the first malformed log line");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_solve->parsed()) {
      if (solve.builtin.empty() && solve.game_path.empty()) {
        throw gamepot::ConfigError("solve needs --game or --builtin");
      }
      return run_solve(solve);
    }
    if (cmd_serve->parsed()) return run_serve(std::move(serve));
    if (cmd_simulate->parsed()) return run_simulate(simulate);
    if (cmd_analyze->parsed()) return run_analyze(analyze);
  } catch (const std::exception& err) {
    std::fprintf(stderr, "gamepot: error: %s\n", err.what());
    return 1;
  }
  return 0;
}
