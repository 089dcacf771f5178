// bb84eve: eavesdropping analysis for the four-state protocol.
//
// Subcommands:
//   incoherent   single-qubit optimal-attack curves over a disturbance grid
//   coherent     two-qubit attack maximization curves (seeded, reproducible)
//   simulate     Monte Carlo check of an attack file against analytic values
//   validate     relation residuals and Gram feasibility of an attack file
//   symmetrize   run the symmetrization construction on an attack file
//
// Exit codes: 0 success, 1 usage, 2 infeasibility, 3 internal consistency.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bb84/attack_file.hpp"
#include "bb84/coherent.hpp"
#include "bb84/entropy.hpp"
#include "bb84/errors.hpp"
#include "bb84/incoherent.hpp"
#include "bb84/optimizer.hpp"
#include "bb84/simulate.hpp"
#include "bb84/symmetrize.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitInternal = 3;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::invalid_argument("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct Cell {
  std::string key;
  std::string text;
  bool numeric;
};

struct Row {
  std::vector<Cell> cells;
  void add(const std::string& key, double v) {
    const bool finite = std::isfinite(v);
    cells.push_back(Cell{key, finite ? fmt(v) : "nan", finite});
  }
  void add(const std::string& key, const std::string& v) {
    cells.push_back(Cell{key, v, false});
  }
};

void write_table(std::ostream& os, const std::vector<Row>& rows, const std::string& format,
                 const std::string& comment) {
  if (rows.empty()) return;
  if (format == "csv") {
    if (!comment.empty()) os << "# " << comment << "\n";
    for (std::size_t i = 0; i < rows[0].cells.size(); ++i) {
      os << (i ? "," : "") << rows[0].cells[i].key;
    }
    os << "\n";
    for (const Row& r : rows) {
      for (std::size_t i = 0; i < r.cells.size(); ++i) {
        os << (i ? "," : "") << r.cells[i].text;
      }
      os << "\n";
    }
  } else {
    for (const Row& r : rows) {
      os << "{";
      for (std::size_t i = 0; i < r.cells.size(); ++i) {
        os << (i ? "," : "") << "\"" << r.cells[i].key << "\":";
        if (r.cells[i].numeric) {
          os << r.cells[i].text;
        } else if (r.cells[i].text == "nan") {
          os << "null";
        } else {
          os << "\"" << r.cells[i].text << "\"";
        }
      }
      os << "}\n";
    }
  }
}

std::vector<double> grid(double d_min, double d_max, int steps) {
  std::vector<double> out;
  out.reserve(steps);
  if (steps == 1) {
    out.push_back(d_min);
    return out;
  }
  for (int i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / (steps - 1);
    out.push_back(d_min + t * (d_max - d_min));
  }
  return out;
}

int cmd_incoherent(double d_min, double d_max, int steps, const std::string& format,
                   const std::string& out_path) {
  if (!(d_min >= 0.0 && d_min < d_max && d_max <= 0.5)) {
    std::cerr << "incoherent: need 0 <= d-min < d-max <= 0.5\n";
    return kExitUsage;
  }
  if (steps < 2) {
    std::cerr << "incoherent: need steps >= 2\n";
    return kExitUsage;
  }
  std::vector<Row> rows;
  for (double d : grid(d_min, d_max, steps)) {
    const bb84::IncoherentParams p = bb84::optimal_attack(d);
    const auto [ib, pb] = bb84::bob_metrics(d);
    const double ie = bb84::eve_information(p);
    Row r;
    r.add("D", d);
    r.add("I_e_opt", ie);
    r.add("I_b", ib);
    r.add("I_sum", ie + ib);
    r.add("P_e_opt", bb84::eve_success(p));
    r.add("P_b", pb);
    rows.push_back(std::move(r));
  }
  Output out(out_path);
  write_table(out.stream(), rows, format, "");
  return kExitOk;
}

int cmd_coherent(double d_min, double d_max, int steps, const std::string& objective,
                 std::uint64_t seed, const std::string& format, const std::string& out_path) {
  const bool single_point = steps == 1;
  if (!(d_min >= 0.0 && d_max <= 0.5 && (single_point ? d_min == d_max : d_min < d_max))) {
    std::cerr << "coherent: need 0 <= d-min < d-max <= 0.5 (or d-min == d-max with steps 1)\n";
    return kExitUsage;
  }
  if (steps < 1) {
    std::cerr << "coherent: need steps >= 1\n";
    return kExitUsage;
  }

  bb84::OptimizationOptions opts;
  opts.seed = seed;
  const bool want_success = objective == "success" || objective == "both";
  const bool want_information = objective == "information" || objective == "both";

  std::vector<Row> rows;
  for (double d : grid(d_min, d_max, steps)) {
    const bb84::IncoherentParams q = bb84::optimal_attack(d);
    const double p_single = bb84::eve_success(q);
    Row r;
    r.add("D", d);
    if (format == "json") r.add("seed", static_cast<double>(seed));
    std::string error;
    if (want_success) {
      r.add("P1", p_single * p_single);
      try {
        const bb84::Optimum best = bb84::maximize_pair_success(d, opts);
        r.add("P2", best.value);
        r.add("relative_gain", (best.value - p_single * p_single) / (p_single * p_single));
        r.add("Pb2", bb84::bob_pair_success(best.params));
      } catch (const bb84::OptimizationError& e) {
        r.add("P2", "nan");
        r.add("relative_gain", "nan");
        r.add("Pb2", "nan");
        error = e.what();
      }
    }
    if (want_information) {
      r.add("I1", 2.0 * bb84::eve_information(q));
      try {
        const bb84::Optimum best = bb84::maximize_pair_information(d, opts);
        r.add("I2", best.value);
        if (!want_success) r.add("Pb2", bb84::bob_pair_success(best.params));
      } catch (const bb84::OptimizationError& e) {
        r.add("I2", "nan");
        if (!want_success) r.add("Pb2", "nan");
        error = e.what();
      }
    }
    r.add("Pb1", (1.0 - d) * (1.0 - d));
    r.add("error", error);
    rows.push_back(std::move(r));
  }
  Output out(out_path);
  write_table(out.stream(), rows, format, "seed=" + std::to_string(seed));
  return kExitOk;
}

int cmd_simulate(const std::string& attack_path, long shots, std::uint64_t seed,
                 const std::string& format, const std::string& out_path) {
  const bb84::AttackFile attack = bb84::load_attack_file(attack_path);
  const bb84::RealizedAttack realized = attack.incoherent
                                            ? bb84::build_isometry(*attack.incoherent)
                                            : bb84::build_isometry(*attack.coherent);
  const bb84::SimulationReport rep = bb84::simulate(realized, shots, seed);

  const auto z = [&](double emp, double analytic) {
    const double sd = std::sqrt(analytic * (1.0 - analytic) / static_cast<double>(rep.shots));
    if (sd == 0.0) return emp == analytic ? 0.0 : std::numeric_limits<double>::infinity();
    return (emp - analytic) / sd;
  };
  const double dist_sd =
      std::sqrt(realized.analytic_disturbance * (1.0 - realized.analytic_disturbance) /
                static_cast<double>(rep.shots));

  Row r;
  r.add("n", static_cast<double>(rep.n));
  r.add("shots", static_cast<double>(rep.shots));
  r.add("seed", static_cast<double>(rep.seed));
  r.add("disturbance", rep.disturbance);
  r.add("disturbance_se", rep.disturbance_se);
  r.add("disturbance_analytic", realized.analytic_disturbance);
  r.add("disturbance_z",
        dist_sd == 0.0 ? (rep.disturbance == realized.analytic_disturbance
                              ? 0.0
                              : std::numeric_limits<double>::infinity())
                       : (rep.disturbance - realized.analytic_disturbance) / dist_sd);
  r.add("bob_success", rep.bob_success);
  r.add("bob_success_se", rep.bob_success_se);
  r.add("bob_success_analytic", realized.analytic_bob_success);
  r.add("bob_success_z", z(rep.bob_success, realized.analytic_bob_success));
  r.add("eve_success", rep.eve_success);
  r.add("eve_success_se", rep.eve_success_se);
  r.add("eve_success_analytic", realized.analytic_eve_success);
  r.add("eve_success_z", z(rep.eve_success, realized.analytic_eve_success));
  r.add("eve_information", rep.eve_information);
  r.add("eve_information_analytic", realized.analytic_eve_information);
  for (std::size_t s = 0; s < rep.syndrome_counts.size(); ++s) {
    r.add("syndrome_count_" + std::to_string(s), static_cast<double>(rep.syndrome_counts[s]));
  }
  std::vector<Row> rows;
  rows.push_back(std::move(r));
  Output out(out_path);
  write_table(out.stream(), rows, format, "seed=" + std::to_string(seed));
  return kExitOk;
}

int cmd_validate(const std::string& attack_path) {
  std::ifstream in(attack_path);
  if (!in) {
    std::cerr << "validate: cannot open " << attack_path << "\n";
    return kExitUsage;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "validate: " << e.what() << "\n";
    return kExitUsage;
  }
  if (!j.is_object() || !j.contains("type")) {
    std::cerr << "validate: expected an object with a \"type\" field\n";
    return kExitUsage;
  }

  const double tol = 1e-9;
  const std::string type = j.at("type").get<std::string>();
  if (type == "incoherent") {
    bb84::IncoherentParams p{};
    p.D = j.at("D").get<double>();
    p.D1 = j.at("D1").get<double>();
    p.F = 1.0 - p.D;
    p.F1 = p.F - p.D - p.D1;
    const double min_eig = bb84::min_eigenvalue(bb84::gram4(p));
    std::printf("type=incoherent\n");
    std::printf("fidelity_closure_residual=%s\n", fmt(p.F + p.D - 1.0).c_str());
    std::printf("balance_residual=%s\n", fmt((p.F - p.D) - (p.F1 + p.D1)).c_str());
    std::printf("min_eigenvalue=%s\n", fmt(min_eig).c_str());
    const bool ok = min_eig >= -tol && p.D >= 0.0 && p.D <= 1.0;
    std::printf("feasible=%s\n", ok ? "true" : "false");
    return ok ? kExitOk : kExitInfeasible;
  }
  if (type == "coherent") {
    bb84::CoherentParams p{};
    const bool ten = j.contains("A");
    if (ten) {
      p.A = j.at("A").get<double>();
      p.A1 = j.at("A1").get<double>();
      p.A2 = j.at("A2").get<double>();
      p.B = j.at("B").get<double>();
      p.B1 = j.at("B1").get<double>();
      p.B2 = j.at("B2").get<double>();
      p.B3 = j.at("B3").get<double>();
      p.C = j.at("C").get<double>();
      p.C1 = j.at("C1").get<double>();
      p.C2 = j.at("C2").get<double>();
    } else {
      p = bb84::solve_free_chart(j.at("B").get<double>(), j.at("C").get<double>(),
                                 j.at("A1").get<double>(), j.at("B2").get<double>(),
                                 j.at("C1").get<double>());
    }
    const auto res = bb84::relation_residuals(p);
    const double min_eig = bb84::min_eigenvalue(bb84::gram16(p));
    std::printf("type=coherent\n");
    bool relations_ok = true;
    for (int k = 0; k < 5; ++k) {
      std::printf("relation_%d_residual=%s\n", k + 1, fmt(res[k]).c_str());
      relations_ok = relations_ok && std::abs(res[k]) <= tol;
    }
    std::printf("min_eigenvalue=%s\n", fmt(min_eig).c_str());
    const bool ok = relations_ok && min_eig >= -tol && p.A >= -tol && p.B >= -tol && p.C >= -tol;
    std::printf("feasible=%s\n", ok ? "true" : "false");
    return ok ? kExitOk : kExitInfeasible;
  }
  std::cerr << "validate: unknown type \"" << type << "\"\n";
  return kExitUsage;
}

int cmd_symmetrize(const std::string& attack_path, const std::string& out_path) {
  const bb84::AttackFile attack = bb84::load_attack_file(attack_path);
  const bb84::RawAttack raw = attack.incoherent ? bb84::raw_from_incoherent(*attack.incoherent)
                                                : bb84::raw_from_coherent(*attack.coherent);
  const bb84::RawAttack sym = bb84::full_symmetrize(raw);

  Output out(out_path);
  std::ostream& os = out.stream();
  os << "branches_before=" << raw.branches.size() << "\n";
  os << "branches_after=" << sym.branches.size() << "\n";
  const auto gens = bb84::generator_set(raw.n);
  const auto asym = [](const bb84::RawAttack& a, const bb84::ProtocolTransform& t) {
    return (a.gram().entries - bb84::apply_transform(t, a).gram().entries).cwiseAbs().maxCoeff();
  };
  for (std::size_t g = 0; g < gens.size(); ++g) {
    os << "generator_" << g << "_asymmetry_before=" << fmt(asym(raw, gens[g])) << "\n";
    os << "generator_" << g << "_asymmetry_after=" << fmt(asym(sym, gens[g])) << "\n";
  }
  const std::pair<const char*, bb84::AveragedMetric> metrics[] = {
      {"disturbance", bb84::AveragedMetric::Disturbance},
      {"eve_success", bb84::AveragedMetric::EveSuccess},
      {"eve_information", bb84::AveragedMetric::EveInformation},
  };
  for (const auto& [name, metric] : metrics) {
    os << "averaged_" << name << "_before=" << fmt(bb84::averaged_metric(raw, metric)) << "\n";
    os << "averaged_" << name << "_after=" << fmt(bb84::averaged_metric(sym, metric)) << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eavesdropping analysis for the four-state protocol"};
  app.require_subcommand(1);

  double d_min = 0.0, d_max = 0.5;
  int steps = 51;
  std::string format = "csv";
  std::string out_path;
  std::string objective = "both";
  std::string attack_path;
  long shots = 100000;
  std::uint64_t seed = 42;

  auto* inc = app.add_subcommand("incoherent", "optimal single-qubit attack curves");
  inc->add_option("--d-min", d_min, "grid start")->capture_default_str();
  inc->add_option("--d-max", d_max, "grid end")->capture_default_str();
  inc->add_option("--steps", steps, "number of grid points")->capture_default_str();
  inc->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  inc->add_option("--out", out_path, "output path (default stdout)");

  auto* coh = app.add_subcommand("coherent", "two-qubit attack maximization curves");
  coh->add_option("--d-min", d_min, "grid start")->capture_default_str();
  coh->add_option("--d-max", d_max, "grid end")->capture_default_str();
  coh->add_option("--steps", steps, "number of grid points")->capture_default_str();
  coh->add_option("--objective", objective, "success, information or both")
      ->check(CLI::IsMember({"success", "information", "both"}));
  coh->add_option("--seed", seed, "optimizer seed")->capture_default_str();
  coh->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  coh->add_option("--out", out_path, "output path (default stdout)");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo check of an attack file");
  sim->add_option("attack", attack_path, "attack JSON file")->required();
  sim->add_option("--shots", shots, "number of sifted rounds")->capture_default_str();
  sim->add_option("--seed", seed, "sampler seed")->capture_default_str();
  sim->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sim->add_option("--out", out_path, "output path (default stdout)");

  auto* val = app.add_subcommand("validate", "relation residuals and feasibility");
  val->add_option("attack", attack_path, "attack JSON file")->required();

  auto* sym = app.add_subcommand("symmetrize", "symmetrization construction report");
  sym->add_option("attack", attack_path, "attack JSON file")->required();
  sym->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (inc->parsed()) return cmd_incoherent(d_min, d_max, steps, format, out_path);
    if (coh->parsed()) return cmd_coherent(d_min, d_max, steps, objective, seed, format, out_path);
    if (sim->parsed()) {
      if (shots < 1) {
        std::cerr << "simulate: shots must be >= 1\n";
        return kExitUsage;
      }
      return cmd_simulate(attack_path, shots, seed, format, out_path);
    }
    if (val->parsed()) return cmd_validate(attack_path);
    if (sym->parsed()) return cmd_symmetrize(attack_path, out_path);
  } catch (const bb84::InfeasibilityError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const bb84::InternalError& e) {
    std::cerr << "internal: " << e.what() << "\n";
    return kExitInternal;
  } catch (const bb84::OptimizationError& e) {
    std::cerr << "optimization: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
