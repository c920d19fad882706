#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "repsale/commitment.hpp"
#include "repsale/equilibrium.hpp"
#include "repsale/errors.hpp"
#include "repsale/linear_oracle.hpp"
#include "repsale/simulator.hpp"

namespace repsale::cli {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string dist = "uniform";
  std::string mu;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  double tol = 1e-6;
  std::string out;
  std::string format = "csv";
  int workers = 1;
  std::string model;
  double epsilon = 0.01;
  std::string profile = "example3pt";
  bool epsilon_search = false;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json num_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty())
    out << text;
  else
    write_atomic(cfg.out, text);
}

double single_mu(const RunConfig& cfg) {
  const auto grid = parse_mu_grid(cfg.mu);
  if (grid.size() != 1) throw UsageError("this command takes a single --mu value");
  return grid.front();
}

// ---- two-round rows ----

const char* kSweepHeader = "mu,p1,t,p2A,p2R_lo,p2R_hi,alpha_lo,regime,rev,rev_naive,rev_soph,welfare,schema_version\n";

std::string sweep_csv_row(double mu, const Continuation& c, double rev, const RevenueBreakdown& b) {
  std::ostringstream os;
  os << num(mu) << ',' << num(c.p1) << ',' << num(c.all_reject ? 1.0 : c.t) << ',' << num(c.p2A) << ','
     << num(c.p2R_lo()) << ',' << num(c.p2R_hi()) << ',' << num(c.alpha_lo()) << ',' << to_string(c.focus) << ','
     << num(rev) << ',' << num(b.rev_naive) << ',' << num(b.rev_soph) << ',' << num(b.welfare) << ','
     << kSchemaVersion << '\n';
  return os.str();
}

json continuation_json(const Continuation& c) {
  json lottery = json::array();
  for (const auto& pp : c.p2R) lottery.push_back({{"price", pp.price}, {"prob", pp.prob}});
  return {{"p1", c.p1},         {"t", c.all_reject ? 1.0 : c.t}, {"p2A", c.p2A},
          {"p2R", lottery},     {"all_reject", c.all_reject},     {"focus", to_string(c.focus)},
          {"indifference_gap", c.indifference_gap()}};
}

json breakdown_json(const RevenueBreakdown& b) {
  json j{{"rev", b.rev_total},         {"rev_round1", b.rev_round1}, {"rev_accept", b.rev_accept},
         {"rev_reject", b.rev_reject}, {"rev_naive", b.rev_naive},   {"rev_soph", b.rev_soph},
         {"welfare", b.welfare},       {"surplus", b.surplus}};
  j["reamortization_gap"] = b.reamortization_gap ? json(*b.reamortization_gap) : json(nullptr);
  return j;
}

json equilibrium_json(const TwoRoundEquilibrium& eq) {
  json j = breakdown_json(eq.rev);
  j["mu"] = eq.mu;
  j["regime"] = to_string(eq.regime);
  j["continuation"] = continuation_json(eq.cont);
  return j;
}

// ---- commands ----

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const Distribution d = parse_distribution(cfg.dist);
  const auto grid = parse_mu_grid(cfg.mu);
  const auto rows = sweep(d, grid, {}, cfg.workers);
  if (cfg.format == "csv") {
    std::string text = kSweepHeader;
    for (const auto& eq : rows) text += sweep_csv_row(eq.mu, eq.cont, eq.rev.rev_total, eq.rev);
    emit(cfg, text, out);
    return 0;
  }
  json j{{"schema_version", kSchemaVersion}, {"command", "sweep"}, {"dist", d.describe()}};
  j["rows"] = json::array();
  for (const auto& eq : rows) j["rows"].push_back(equilibrium_json(eq));
  const auto boundary = regime_boundary(d, rows, {}, cfg.tol);
  const auto mu_f = empirical_mu_f(rows);
  j["regime_boundary"] = boundary ? json(*boundary) : json(nullptr);
  j["mu_f"] = mu_f ? json(*mu_f) : json(nullptr);
  emit(cfg, j.dump(2) + "\n", out);
  return 0;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const Distribution d = parse_distribution(cfg.dist);
  const TwoRoundEquilibrium eq = solve_equilibrium(d, single_mu(cfg));
  if (cfg.format == "csv") {
    emit(cfg, kSweepHeader + sweep_csv_row(eq.mu, eq.cont, eq.rev.rev_total, eq.rev), out);
    return 0;
  }
  json j = equilibrium_json(eq);
  j["schema_version"] = kSchemaVersion;
  j["command"] = "solve";
  j["dist"] = d.describe();
  j["ordering_violations"] = ordering_violations(d, eq.cont);
  emit(cfg, j.dump(2) + "\n", out);
  return 0;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const Distribution d = parse_distribution(cfg.dist);
  const double mu = single_mu(cfg);
  if (cfg.trials < 1) throw UsageError("--trials must be at least 1");
  const TwoRoundEquilibrium eq = solve_equilibrium(d, mu);
  SimConfig sc;
  sc.trials = cfg.trials;
  sc.seed = cfg.seed;
  sc.mu = mu;
  sc.dist = d;
  sc.profile = eq.cont;
  sc.workers = cfg.workers;
  const SimReport r = simulate(sc);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "mu,trials,seed,rev_mean,rev_stderr,welfare_mean,welfare_stderr,rev_naive_mean,rev_soph_mean,"
          "accept_round1,accept_round2,rev_analytic,welfare_analytic,schema_version\n"
       << num(mu) << ',' << r.trials << ',' << r.seed << ',' << num(r.rev_mean) << ',' << num(r.rev_stderr) << ','
       << num(r.welfare_mean) << ',' << num(r.welfare_stderr) << ',' << num(r.rev_naive_mean) << ','
       << num(r.rev_soph_mean) << ',' << num(r.accept_round1) << ',' << num(r.accept_round2) << ','
       << num(eq.rev.rev_total) << ',' << num(eq.rev.welfare) << ',' << kSchemaVersion << '\n';
    emit(cfg, os.str(), out);
    return 0;
  }
  json j{{"schema_version", kSchemaVersion},
         {"command", "simulate"},
         {"dist", d.describe()},
         {"mu", mu},
         {"trials", r.trials},
         {"seed", r.seed},
         {"rev_mean", r.rev_mean},
         {"rev_stderr", r.rev_stderr},
         {"welfare_mean", r.welfare_mean},
         {"welfare_stderr", r.welfare_stderr},
         {"surplus_mean", r.surplus_mean},
         {"surplus_stderr", r.surplus_stderr},
         {"naive_count", r.naive_count},
         {"soph_count", r.soph_count},
         {"rev_naive_mean", r.rev_naive_mean},
         {"rev_naive_stderr", r.rev_naive_stderr},
         {"rev_soph_mean", r.rev_soph_mean},
         {"rev_soph_stderr", r.rev_soph_stderr},
         {"accept_round1", r.accept_round1},
         {"accept_round2", r.accept_round2},
         {"accept_round1_naive", r.accept_round1_naive},
         {"accept_round1_soph", r.accept_round1_soph}};
  j["analytic"] = breakdown_json(eq.rev);
  j["continuation"] = continuation_json(eq.cont);
  emit(cfg, j.dump(2) + "\n", out);
  return 0;
}

json state_json(const infinite::DiscreteModel& m, const infinite::BeliefState& b) {
  auto support = [&](const infinite::Support& s) {
    json a = json::array();
    for (int i = s.lo; i < s.hi; ++i) a.push_back(m.values[i]);
    return a;
  };
  return {{"naive", support(b.naive)}, {"soph", support(b.soph)}};
}

int cmd_verify_infinite(const RunConfig& cfg, std::ostream& out) {
  using namespace infinite;
  if (cfg.format != "json") throw UsageError("verify-infinite emits JSON only");
  const DiscreteModel m = cfg.model.empty() ? DiscreteModel::example(cfg.epsilon) : load_model(cfg.model);
  StrategyProfile prof;
  if (cfg.profile == "example3pt")
    prof = example3pt(m);
  else if (cfg.profile == "no_learning")
    prof = no_learning(m);
  else
    throw UsageError("unknown profile '" + cfg.profile + "'");

  CertificateOptions copts;
  copts.tol = cfg.tol;
  const Evaluator ev(m, prof);
  const Certificate cert = verify_one_shot_deviation(m, prof, copts);
  const PropertyReport props = check_properties_ab(m, prof, cert.states);
  const auto values = discounted_values(m, prof);
  const double revenue = values.front().revenue;
  const double lower = revenue_lower_bound(m);
  const BenchmarkReport bench = commitment_benchmark(m);
  const MdpResult mdp = naive_mdp_value(m);
  const double trivial = std::max(m.lowest() / (1.0 - m.delta), (1.0 - m.mu) * mdp.value);

  json j{{"schema_version", kSchemaVersion}, {"command", "verify-infinite"}, {"profile", prof.name}};
  j["model"] = {{"values", m.values}, {"probs_naive", m.probs_naive}, {"probs_soph", m.probs_soph},
                {"mu", m.mu},         {"delta", m.delta},             {"grid_size", num_or_null(m.grid_size())}};
  j["revenue"] = revenue;
  j["soph_revenue"] = values.front().soph_revenue;

  j["states"] = json::array();
  for (const auto& b : cert.states) {
    json s = state_json(m, b);
    s["price"] = prof.seller(b);
    s["revenue"] = ev.seller_value(b);
    s["on_path"] = false;
    for (const auto& v : values)
      if (v.state == b) {
        s["on_path"] = true;
        s["soph_utility"] = v.soph_utility;
      }
    j["states"].push_back(s);
  }

  json sv = json::array(), bv = json::array();
  for (const auto& v : cert.seller_violations) {
    json x = state_json(m, v.state);
    x.update({{"prescribed_price", v.prescribed_price},
              {"prescribed_revenue", v.prescribed_value},
              {"deviation_price", v.deviation_price},
              {"deviation_revenue", v.deviation_value}});
    sv.push_back(x);
  }
  for (const auto& v : cert.buyer_violations) {
    json x = state_json(m, v.state);
    x.update({{"price", v.price},
              {"value", v.value},
              {"prescribed", v.prescribed == Decision::accept ? "accept" : "reject"},
              {"prescribed_utility", v.prescribed_utility},
              {"alternative_utility", v.alternative_utility}});
    bv.push_back(x);
  }
  j["certificate"] = {{"clean", cert.clean()},
                      {"states_checked", cert.states.size()},
                      {"worst_seller_gain", cert.worst_seller_gain},
                      {"worst_buyer_gain", cert.worst_buyer_gain},
                      {"seller_violations", sv},
                      {"buyer_violations", bv}};
  j["properties"] = {{"naive_justified_prices", props.naive_justified},
                     {"revenue_above_baseline", props.above_baseline}};
  j["bounds"] = {{"revenue_lower_bound", lower},
                 {"naive_mdp_value", mdp.value},
                 {"naive_mdp_root_price", mdp.root_price},
                 {"trivial_bound", trivial},
                 {"commitment_benchmark", bench.benchmark},
                 {"benchmark_soph_part", bench.soph_part},
                 {"benchmark_naive_part", bench.naive_part},
                 {"discrete_bound_lhs", bench.bound_lhs},
                 {"discrete_bound_rhs", num_or_null(bench.bound_rhs)},
                 {"discrete_bound_slack", num_or_null(bench.discrete_slack)},
                 {"revenue_meets_lower_bound", revenue >= lower - 1e-9},
                 {"revenue_meets_trivial_bound", revenue >= trivial - 1e-9}};
  if (cfg.epsilon_search) {
    if (prof.name != "example3pt") throw UsageError("--epsilon-search applies to the example3pt profile");
    const EpsilonSearch es = epsilon_search({}, 1e-6);
    j["epsilon_search"] = {{"largest_clean", num_or_null(es.largest_clean)},
                           {"smallest_failing", num_or_null(es.smallest_failing)}};
  }
  emit(cfg, j.dump(2) + "\n", out);
  return 0;
}

int cmd_commitment(const RunConfig& cfg, std::ostream& out) {
  const Distribution d = parse_distribution(cfg.dist);
  CommitmentOptions opts;
  opts.workers = cfg.workers;
  const auto rows = sweep_commitment(d, parse_mu_grid(cfg.mu), opts);
  if (cfg.format == "csv") {
    std::string text = "mu,p1,p2R,p2A,t,rev,schema_version\n";
    for (const auto& r : rows)
      text += num(r.mu) + ',' + num(r.schedule.p1) + ',' + num(r.schedule.p2R) + ',' + num(r.schedule.p2A) + ',' +
              num(r.schedule.t()) + ',' + num(r.revenue) + ',' + std::to_string(kSchemaVersion) + '\n';
    emit(cfg, text, out);
    return 0;
  }
  json j{{"schema_version", kSchemaVersion}, {"command", "commitment"}, {"dist", d.describe()}};
  j["rows"] = json::array();
  for (const auto& r : rows)
    j["rows"].push_back({{"mu", r.mu},
                         {"p1", r.schedule.p1},
                         {"p2R", r.schedule.p2R},
                         {"p2A", r.schedule.p2A},
                         {"t", r.schedule.t()},
                         {"rev", r.revenue}});
  emit(cfg, j.dump(2) + "\n", out);
  return 0;
}

int cmd_linear_oracle(const RunConfig& cfg, std::ostream& out) {
  if (cfg.dist != "uniform") throw UsageError("the linear oracle covers --dist uniform only");
  const Distribution d = Distribution::uniform();
  const auto grid = parse_mu_grid(cfg.mu);
  if (cfg.format == "csv") {
    std::string text = kSweepHeader;
    for (double mu : grid) {
      const Continuation c = linear::on_path(mu);
      text += sweep_csv_row(mu, c, linear::rev_closed(mu), revenue_of_continuation(d, mu, c));
    }
    emit(cfg, text, out);
    return 0;
  }
  const auto& k = linear::constants();
  json j{{"schema_version", kSchemaVersion}, {"command", "linear-oracle"}, {"mu_hat", k.mu_hat}, {"mu_bar", k.mu_bar}};
  j["rows"] = json::array();
  for (double mu : grid) {
    const Continuation c = linear::on_path(mu);
    json row = breakdown_json(revenue_of_continuation(d, mu, c));
    row["mu"] = mu;
    row["rev"] = linear::rev_closed(mu);
    row["regime"] = to_string(c.focus);
    row["continuation"] = continuation_json(c);
    row["welfare_closed"] = mu >= k.mu_bar ? json(linear::welfare_closed(mu)) : json(nullptr);
    j["rows"].push_back(row);
  }
  emit(cfg, j.dump(2) + "\n", out);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Equilibria of repeated sales to naive and sophisticated buyers", "repsale"};
  app.require_subcommand(1);

  auto add_dist = [&](CLI::App* sub) {
    sub->add_option("--dist", cfg.dist, "uniform | power:<c> | table:<path>");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "output file (stdout when omitted)");
    sub->add_option("--format", cfg.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_mu = [&](CLI::App* sub, const char* help) { sub->add_option("--mu", cfg.mu, help)->required(); };
  auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", cfg.workers, "worker threads")->check(CLI::Range(1, 1024));
  };

  auto* sweep_cmd = app.add_subcommand("sweep", "equilibrium table over a mu grid");
  add_dist(sweep_cmd);
  add_mu(sweep_cmd, "grid start:end:step or a value");
  sweep_cmd->add_option("--tol", cfg.tol, "regime boundary tolerance")->check(CLI::PositiveNumber);
  add_workers(sweep_cmd);
  add_output(sweep_cmd);

  auto* solve_cmd = app.add_subcommand("solve", "equilibrium at one mu");
  add_dist(solve_cmd);
  add_mu(solve_cmd, "sophistication probability");
  add_output(solve_cmd);

  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo play of the on-path equilibrium");
  add_dist(sim_cmd);
  add_mu(sim_cmd, "sophistication probability");
  sim_cmd->add_option("--trials", cfg.trials, "number of buyers drawn");
  sim_cmd->add_option("--seed", cfg.seed, "64-bit seed");
  add_workers(sim_cmd);
  add_output(sim_cmd);

  auto* inf_cmd = app.add_subcommand("verify-infinite", "certificate for an infinite-horizon profile");
  inf_cmd->add_option("--model", cfg.model, "model JSON (values, probs_naive, probs_soph, mu, delta)");
  inf_cmd->add_option("--epsilon", cfg.epsilon, "naive mass of the built-in {1,10,20} model")
      ->check(CLI::Range(0.0, 1.0));
  inf_cmd->add_option("--profile", cfg.profile, "example3pt | no_learning")
      ->check(CLI::IsMember({"example3pt", "no_learning"}));
  inf_cmd->add_flag("--epsilon-search", cfg.epsilon_search, "report the largest certified naive mass");
  inf_cmd->add_option("--tol", cfg.tol, "certificate tolerance")->check(CLI::PositiveNumber);
  add_output(inf_cmd);

  auto* com_cmd = app.add_subcommand("commitment", "optimal committed schedules over a mu grid");
  add_dist(com_cmd);
  add_mu(com_cmd, "grid start:end:step or a value");
  add_workers(com_cmd);
  add_output(com_cmd);

  auto* lin_cmd = app.add_subcommand("linear-oracle", "closed forms for uniform values");
  add_dist(lin_cmd);
  add_mu(lin_cmd, "grid start:end:step or a value");
  add_output(lin_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  if (inf_cmd->parsed()) {
    if (inf_cmd->count("--format") == 0) cfg.format = "json";
    if (inf_cmd->count("--tol") == 0) cfg.tol = 1e-9;
  }
  try {
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, out);
    if (solve_cmd->parsed()) return cmd_solve(cfg, out);
    if (sim_cmd->parsed()) return cmd_simulate(cfg, out);
    if (inf_cmd->parsed()) return cmd_verify_infinite(cfg, out);
    if (com_cmd->parsed()) return cmd_commitment(cfg, out);
    return cmd_linear_oracle(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace repsale::cli
