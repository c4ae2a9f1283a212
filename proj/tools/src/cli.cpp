#include "qcomp/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "qcomp/deficiency.hpp"
#include "qcomp/discrimination.hpp"
#include "qcomp/errors.hpp"
#include "qcomp/experiments.hpp"
#include "qcomp/io.hpp"
#include "qcomp/norms.hpp"
#include "qcomp/random.hpp"

namespace qcomp::cli {

namespace {

using io::json;
using CVector = Eigen::VectorXcd;

struct RunConfig {
  std::string command;
  double tol = 1e-6;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  std::string output;
  std::string suite;
  std::size_t k = 2;
  std::string map, ensemble, phi, psi, s, t;
  std::size_t dim = 2, d_in = 2, d_out = 2, n = 2;
};

/// Newline-delimited JSON sink: stdout or the --output file.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ValidationError("cannot write " + path);
      out_ = file_.get();
    }
  }
  void line(const json& j) { *out_ << j.dump() << '\n'; }
  void raw(const std::string& s) { *out_ << s; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
};

json certificates_json(const std::vector<sdp::Certificate>& certs) {
  json list = json::array();
  double gap = 0.0, pinf = 0.0, dinf = 0.0;
  for (const sdp::Certificate& c : certs) {
    list.push_back(io::to_json(c));
    gap = std::max(gap, c.gap);
    pinf = std::max(pinf, c.primal_infeas);
    dinf = std::max(dinf, c.dual_infeas);
  }
  return {{"certificates", std::move(list)},
          {"certified_gap", gap},
          {"residuals", {{"primal_infeas", pinf}, {"dual_infeas", dinf}, {"gap", gap}}}};
}

/// Runs `body` under a certification scope and wraps its values in a report.
json report(const RunConfig& cfg, const json& inputs, const std::function<json()>& body) {
  const auto start = std::chrono::steady_clock::now();
  sdp::CertificationScope scope;
  json values = body();
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json r = {{"command", cfg.command}, {"inputs", inputs}};
  for (auto& [key, v] : values.items()) r[key] = v;
  const json certs = certificates_json(scope.certificates());
  for (const auto& [key, v] : certs.items()) r[key] = v;
  r["wall_time"] = wall;
  return r;
}

HermitianMap load_map(const std::string& path) { return io::map_from_json(io::read_json(path)); }

Experiment load_experiment(const std::string& path) {
  return io::experiment_from_json(io::read_json(path));
}

/// d^2 pure states spanning the Hermitian matrices on C^d.
std::vector<CMatrix> spanning_states(std::size_t d) {
  std::vector<CMatrix> out;
  const auto ket = [d](std::size_t i) {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(d));
    v(static_cast<Eigen::Index>(i)) = 1.0;
    return v;
  };
  for (std::size_t i = 0; i < d; ++i) out.push_back(ket(i) * ket(i).adjoint());
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      const CVector plus = (ket(i) + ket(j)) / std::sqrt(2.0);
      const CVector phase = (ket(i) + Complex(0.0, 1.0) * ket(j)) / std::sqrt(2.0);
      out.push_back(plus * plus.adjoint());
      out.push_back(phase * phase.adjoint());
    }
  }
  return out;
}

Experiment spanning_experiment(std::size_t d) {
  std::vector<CMatrix> states = spanning_states(d);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < states.size(); ++i) labels.push_back("s" + std::to_string(i));
  return Experiment(std::move(labels), std::move(states));
}

bool is_diagonal(const Experiment& e) {
  for (const CMatrix& m : e.states()) {
    CMatrix off = m;
    off.diagonal().setZero();
    if (off.cwiseAbs().maxCoeff() > 1e-12) return false;
  }
  return true;
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t i) {
  return rng::Stream(seed).split(i).next_u64();
}

int cmd_single(const RunConfig& cfg, Sink& sink, const sdp::Options& opts) {
  const std::string& c = cfg.command;
  json r;
  if (c == "diamond" || c == "dual") {
    const HermitianMap phi = load_map(cfg.map);
    r = report(cfg, {{"map", cfg.map}}, [&] {
      return json{{"value", c == "diamond" ? diamond_norm(phi, opts) : dual_diamond_norm(phi, opts)}};
    });
  } else if (c == "psucc") {
    const Ensemble e = io::ensemble_from_json(io::read_json(cfg.ensemble));
    r = report(cfg, {{"ensemble", cfg.ensemble}}, [&] {
      const PsuccResult p = psucc(e, opts);
      json povm = json::array();
      for (const CMatrix& m : p.optimal_povm.elements()) povm.push_back(io::matrix_to_json(m));
      return json{{"value", p.value}, {"povm", povm}};
    });
  } else if (c == "ensemble-from-map") {
    const HermitianMap gamma = load_map(cfg.map);
    r = report(cfg, {{"map", cfg.map}}, [&] {
      const Ensemble e = ensemble_from_cp_map(gamma);
      return json{{"value", e.size()}, {"ensemble", io::to_json(e)}};
    });
  } else if (c == "deficiency") {
    const HermitianMap phi = load_map(cfg.phi);
    const HermitianMap psi = load_map(cfg.psi);
    r = report(cfg, {{"phi", cfg.phi}, {"psi", cfg.psi}}, [&] {
      const DeficiencyResult d = deficiency(phi, psi, opts);
      return json{{"value", d.value},
                  {"witness_value", d.witness_value},
                  {"minimax_gap", d.certified_gap},
                  {"projection_shift", d.projection_shift},
                  {"postprocessing", io::to_json(d.optimal_postprocessing)}};
    });
  } else if (c == "lecam") {
    const HermitianMap phi = load_map(cfg.phi);
    const HermitianMap psi = load_map(cfg.psi);
    r = report(cfg, {{"phi", cfg.phi}, {"psi", cfg.psi}},
               [&] { return json{{"value", lecam_distance(phi, psi, opts)}}; });
  } else if (c == "exp-deficiency") {
    const Experiment s = load_experiment(cfg.s);
    const Experiment t = load_experiment(cfg.t);
    r = report(cfg, {{"s", cfg.s}, {"t", cfg.t}}, [&] {
      const ExpDeficiencyResult d = exp_deficiency(s, t, opts);
      return json{{"value", d.epsilon},
                  {"projection_shift", d.projection_shift},
                  {"randomization", io::to_json(d.alpha)}};
    });
  } else if (c == "lecam-classical") {
    const Experiment s = load_experiment(cfg.s);
    const Experiment t = load_experiment(cfg.t);
    if (!is_diagonal(s) || !is_diagonal(t)) {
      throw ShapeError("lecam-classical: experiments must be diagonal");
    }
    r = report(cfg, {{"s", cfg.s}, {"t", cfg.t}}, [&] {
      const double st = exp_deficiency(s, t, opts).epsilon;
      const double ts = exp_deficiency(t, s, opts).epsilon;
      return json{{"value", std::max(st, ts)}, {"values", {{"delta_st", st}, {"delta_ts", ts}}}};
    });
  }
  sink.line(r);
  return kOk;
}

/// One line per trial, then a summary line; exit 1 when any check fails.
int cmd_verify(const RunConfig& cfg, Sink& sink, const sdp::Options& opts) {
  const bool channels = cfg.command == "verify";
  json inputs = channels ? json{{"phi", cfg.phi}, {"psi", cfg.psi}} : json{{"s", cfg.s}, {"t", cfg.t}};
  inputs["suite"] = cfg.suite;
  inputs["trials"] = cfg.trials;
  inputs["seed"] = cfg.seed;
  inputs["tol"] = cfg.tol;

  std::function<json(std::uint64_t)> trial;
  std::function<bool(const json&)> passes;
  std::optional<HermitianMap> phi, psi;
  std::optional<Experiment> s, t;
  if (channels) {
    phi = load_map(cfg.phi);
    psi = load_map(cfg.psi);
  } else {
    s = load_experiment(cfg.s);
    t = load_experiment(cfg.t);
  }

  if (channels && cfg.suite == "thm1") {
    inputs["check"] = "minimax witness, ensemble and decision-map inequalities";
    trial = [&](std::uint64_t sd) {
      const Thm1Report r = thm1_verify(*phi, *psi, 1, sd, opts);
      return json{{"delta", r.delta},
                  {"witness_value", r.witness_value},
                  {"slack_ii", r.min_slack_ii},
                  {"slack_iii", r.min_slack_iii},
                  {"violations", r.violations_ii + r.violations_iii},
                  {"saturation_residual", r.saturation_residual}};
    };
    passes = [&](const json& j) {
      return j["violations"].get<std::size_t>() == 0 &&
             j["saturation_residual"].get<double>() <= cfg.tol &&
             std::abs(j["delta"].get<double>() - j["witness_value"].get<double>()) <= cfg.tol;
    };
  } else if (channels && cfg.suite == "prop7") {
    inputs["k"] = cfg.k;
    trial = [&](std::uint64_t sd) {
      const ClassicalScanReport r = classical_comparison_scan(*phi, *psi, cfg.k, 1, sd, opts);
      return json{{"stat_i", r.stat_i},
                  {"stat_ii", r.stat_ii},
                  {"stat_iii", r.stat_iii},
                  {"stat_iv", r.stat_iv},
                  {"chain_consistent", r.chain_consistent}};
    };
    passes = [&](const json& j) {
      return j["chain_consistent"].get<bool>() &&
             j["stat_i"].get<double>() <= j["stat_iv"].get<double>() + cfg.tol;
    };
  } else if (channels && cfg.suite == "coro1") {
    const std::vector<CMatrix> states = spanning_states(phi->d_out());
    trial = [&, states](std::uint64_t sd) {
      const Coro1Report r = thm2_coro1_scan(*phi, *psi, states, 1, sd, opts);
      return json{{"delta", r.delta}, {"gap", r.max_gap}, {"consistent", r.consistent}};
    };
    passes = [&](const json& j) {
      return j["consistent"].get<bool>() &&
             (j["delta"].get<double>() > cfg.tol || j["gap"].get<double>() <= cfg.tol);
    };
  } else if (!channels && cfg.suite == "thm4") {
    trial = [&](std::uint64_t sd) {
      const Thm4Report r = thm4_verify(*s, *t, 1, sd, opts);
      return json{{"epsilon", r.epsilon},
                  {"gap_ii", r.max_gap_ii},
                  {"excess_i", r.max_excess_i},
                  {"violations", r.violations_ii + r.violations_i}};
    };
    passes = [&](const json& j) {
      return j["violations"].get<std::size_t>() == 0 && j["gap_ii"].get<double>() <= cfg.tol;
    };
  } else if (!channels && cfg.suite == "coro2") {
    const Experiment s0 = spanning_experiment(s->dim());
    trial = [&, s0](std::uint64_t sd) {
      const Coro2Report r = coro2_scan(*s, *t, s0, 1, sd, opts);
      return json{{"epsilon", r.epsilon}, {"gap", r.max_gap}, {"consistent", r.consistent}};
    };
    passes = [&](const json& j) {
      return j["consistent"].get<bool>() &&
             (j["epsilon"].get<double>() > cfg.tol || j["gap"].get<double>() <= cfg.tol);
    };
  } else {
    throw ValidationError("unknown suite '" + cfg.suite + "' for " + cfg.command);
  }

  std::size_t failures = 0;
  const auto start = std::chrono::steady_clock::now();
  std::vector<sdp::Certificate> all;
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    sdp::CertificationScope scope;
    json line = report(cfg, inputs, [&] { return trial(trial_seed(cfg.seed, i)); });
    line["trial"] = i;
    line["pass"] = passes(line);
    if (!line["pass"].get<bool>()) ++failures;
    all.insert(all.end(), scope.certificates().begin(), scope.certificates().end());
    sink.line(line);
  }
  json summary = {{"command", cfg.command}, {"inputs", inputs}, {"summary", true},
                  {"trials", cfg.trials}, {"violations", failures}};
  json certs = certificates_json(all);
  summary["certified_gap"] = certs["certified_gap"];
  summary["residuals"] = certs["residuals"];
  summary["certificate_count"] = all.size();
  summary["wall_time"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  sink.line(summary);
  return failures == 0 ? kOk : kViolations;
}

int cmd_gen(const RunConfig& cfg, Sink& sink, const std::string& kind) {
  rng::Stream st(cfg.seed);
  json artifact;
  if (kind == "channel") {
    const HermitianMap phi = random_channel(cfg.d_in, cfg.d_out, st);
    artifact = io::to_json(phi);
    io::map_from_json(artifact);
  } else if (kind == "ensemble") {
    artifact = io::to_json(random_ensemble(cfg.dim, cfg.n, st));
    io::ensemble_from_json(artifact);
  } else {
    artifact = io::to_json(random_experiment(cfg.dim, cfg.n, st));
    io::experiment_from_json(artifact);
  }
  sink.raw(artifact.dump(2) + "\n");
  return kOk;
}

void error_json(std::ostream& err, const std::string& type, const std::string& message) {
  err << json{{"error", type}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Diamond norms, state discrimination and deficiencies of channels and experiments",
               "qcomp"};
  app.require_subcommand(1);
  app.add_option("--tol", cfg.tol, "Verification tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--output", cfg.output, "Write the report to this file");

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol, "Verification tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--output", cfg.output, "Write the report to this file");
  };
  const auto map_cmd = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--map", cfg.map, "Map JSON")->required();
    common(sub);
  };
  map_cmd("diamond", "Diamond norm of a Hermitian-preserving map");
  map_cmd("dual", "Dual diamond norm of a Hermitian-preserving map");
  map_cmd("ensemble-from-map", "Covariant ensemble of a CP map");

  CLI::App* psucc_cmd = app.add_subcommand("psucc", "Optimal guessing probability");
  psucc_cmd->add_option("--ensemble", cfg.ensemble, "Ensemble JSON")->required();
  common(psucc_cmd);

  for (const char* name : {"deficiency", "lecam"}) {
    CLI::App* sub = app.add_subcommand(name, "Channel comparison");
    sub->add_option("--phi", cfg.phi, "Channel JSON")->required();
    sub->add_option("--psi", cfg.psi, "Channel JSON")->required();
    common(sub);
  }
  for (const char* name : {"exp-deficiency", "lecam-classical"}) {
    CLI::App* sub = app.add_subcommand(name, "Experiment comparison");
    sub->add_option("--s", cfg.s, "Experiment JSON")->required();
    sub->add_option("--t", cfg.t, "Experiment JSON")->required();
    common(sub);
  }

  CLI::App* verify = app.add_subcommand("verify", "Randomized checks for a channel pair");
  verify->add_option("--suite", cfg.suite, "thm1, prop7 or coro1")
      ->required()
      ->check(CLI::IsMember({"thm1", "prop7", "coro1"}));
  verify->add_option("--phi", cfg.phi, "Channel JSON")->required();
  verify->add_option("--psi", cfg.psi, "Channel JSON")->required();
  verify->add_option("--trials", cfg.trials, "Number of trials");
  verify->add_option("--k", cfg.k, "Outcome count for prop7")->check(CLI::PositiveNumber);
  common(verify);

  CLI::App* exp_verify = app.add_subcommand("exp-verify", "Randomized checks for experiments");
  exp_verify->add_option("--suite", cfg.suite, "thm4 or coro2")
      ->required()
      ->check(CLI::IsMember({"thm4", "coro2"}));
  exp_verify->add_option("--s", cfg.s, "Experiment JSON")->required();
  exp_verify->add_option("--t", cfg.t, "Experiment JSON")->required();
  exp_verify->add_option("--trials", cfg.trials, "Number of trials");
  common(exp_verify);

  std::string gen_kind;
  CLI::App* gen = app.add_subcommand("gen", "Seeded random instances");
  gen->add_option("kind", gen_kind, "channel, ensemble or experiment")
      ->required()
      ->check(CLI::IsMember({"channel", "ensemble", "experiment"}));
  gen->add_option("--din", cfg.d_in, "Channel input dimension")->check(CLI::PositiveNumber);
  gen->add_option("--dout", cfg.d_out, "Channel output dimension")->check(CLI::PositiveNumber);
  gen->add_option("--dim", cfg.dim, "State dimension")->check(CLI::PositiveNumber);
  gen->add_option("--n", cfg.n, "Number of items or labels")->check(CLI::PositiveNumber);
  common(gen);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    error_json(err, "UsageError", e.what());
    return kValidation;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    const sdp::Options opts = sdp::options_from_env();
    Sink sink(cfg.output, out);
    if (cfg.command == "verify" || cfg.command == "exp-verify") return cmd_verify(cfg, sink, opts);
    if (cfg.command == "gen") return cmd_gen(cfg, sink, gen_kind);
    return cmd_single(cfg, sink, opts);
  } catch (const ValidationError& e) {
    error_json(err, "ValidationError", e.what());
    return kValidation;
  } catch (const SolverFailure& e) {
    error_json(err, "SolverFailure", e.what());
    return kSolver;
  } catch (const io::json::exception& e) {
    error_json(err, "ValidationError", e.what());
    return kValidation;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace qcomp::cli
