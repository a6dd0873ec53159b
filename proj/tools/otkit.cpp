// Command-line surface: construct, certify, check and search the exact
// point sequences, with JSON files and reproducible manifests.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "otkit/construct.hpp"
#include "otkit/homogeneity.hpp"
#include "otkit/io.hpp"
#include "otkit/search.hpp"

using namespace otkit;

namespace {

// Exit codes: 0 verified/success, 1 claim refuted, 2 usage or guard error.
constexpr int kOk = 0;
constexpr int kRefuted = 1;
constexpr int kUsage = 2;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

Predicate predicate_by_name(const std::string& name, int dim) {
  if (name == "orientation") return orientation_predicate(dim);
  if (name == "moment-curve-2") return moment_curve_orientation(2);
  if (name == "moment-curve-3") return moment_curve_orientation(3);
  if (name == "moment-curve-4") return moment_curve_orientation(4);
  throw argument_error("unknown predicate: " + name +
                       " (use orientation | moment-curve-2 | moment-curve-3 | moment-curve-4)");
}

CertifyMode mode_by_name(const std::string& name) {
  if (name == "exhaustive") return CertifyMode::exhaustive;
  if (name == "sampled") return CertifyMode::sampled;
  if (name == "auto") return CertifyMode::auto_by_budget;
  throw argument_error("unknown mode: " + name);
}

json limits_to_json(const Limits& l) {
  return json{{"max_points", l.max_points},
              {"tuple_budget", l.tuple_budget},
              {"sample_size", l.sample_size},
              {"threads", l.threads}};
}

int run(int argc, char** argv) {
  CLI::App app{"exact stepped-up point sequences, homogeneity checkers and searches"};
  app.require_subcommand(1);

  Limits limits = limits_from_env();
  uint64_t seed = 0x5EED;
  std::string mode_name = "auto";
  app.add_option("--seed", seed, "seed for sampled certification checks");
  app.add_option("--threads", limits.threads, "worker threads for certification scans");
  app.add_option("--max-points", limits.max_points, "construction size guard");
  app.add_option("--tuple-budget", limits.tuple_budget, "exhaustive enumeration ceiling");
  app.add_option("--sample-size", limits.sample_size, "samples per check when over budget");

  // tower
  auto* tower_cmd = app.add_subcommand("tower", "print an exact tower value");
  int tower_h = 1;
  int64_t tower_x = 0;
  tower_cmd->add_option("height", tower_h)->required();
  tower_cmd->add_option("x", tower_x)->required();

  // construct
  auto* construct_cmd = app.add_subcommand("construct", "build the tower-sized witness sequence");
  int cd = 1, cn = 2;
  std::string construct_out;
  construct_cmd->add_option("--d", cd, "dimension")->required();
  construct_cmd->add_option("--n", cn, "target subsequence length")->required();
  construct_cmd->add_option("--out", construct_out, "output point file (JSON)");
  construct_cmd->add_option("--mode", mode_name, "exhaustive | sampled | auto");

  // stepup
  auto* stepup_cmd = app.add_subcommand("stepup", "step a sequence up one dimension");
  std::string stepup_in, stepup_out, stepup_pred = "orientation", stepup_eps;
  stepup_cmd->add_option("--in", stepup_in)->required();
  stepup_cmd->add_option("--out", stepup_out);
  stepup_cmd->add_option("--predicate", stepup_pred, "orientation | moment-curve-K");
  stepup_cmd->add_option("--epsilon", stepup_eps, "explicit epsilon (rational, e.g. 1/16)");
  stepup_cmd->add_option("--mode", mode_name, "exhaustive | sampled | auto");

  // check
  auto* check_cmd = app.add_subcommand("check", "run a homogeneity checker");
  std::string check_in, checker;
  int check_k = 0;
  check_cmd->add_option("--in", check_in)->required();
  check_cmd
      ->add_option("--checker", checker,
                   "order-type | super-order-type | k-order-type | monotone | super-monotone | "
                   "markov | general-position")
      ->required();
  check_cmd->add_option("--k", check_k, "level for the k-graded checkers");

  // search
  auto* search_cmd = app.add_subcommand("search", "search for homogeneous subsequences");
  std::string search_in, search_kind = "super-ot", expect;
  int search_n = 2;
  uint64_t budget = 100'000'000;
  search_cmd->add_option("--in", search_in)->required();
  search_cmd->add_option("--n", search_n, "target length")->required();
  search_cmd->add_option("--kind", search_kind, "super-ot | monotone | phi:<predicate>");
  search_cmd->add_option("--budget", budget, "node budget");
  search_cmd->add_option("--expect", expect, "found | absent (sets the exit code)");

  // export
  auto* export_cmd = app.add_subcommand("export", "decimal CSV approximation of a point file");
  std::string export_in, export_out;
  export_cmd->add_option("--in", export_in)->required();
  export_cmd->add_option("--csv", export_out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (tower_cmd->parsed()) {
    std::cout << tower(tower_h, tower_x, limits).to_string() << "\n";
    return kOk;
  }

  if (construct_cmd->parsed()) {
    Timer timer;
    BuildResult b = tower_witness(cd, cn, mode_by_name(mode_name), limits, seed);
    json params{{"d", cd}, {"n", cn}, {"mode", mode_name}, {"seed", seed}};
    json manifest = make_manifest("construct", params);
    manifest["limits"] = limits_to_json(limits);
    json levels = json::array();
    for (const LevelRecord& rec : b.levels) levels.push_back(level_record_to_json(rec));
    manifest["levels"] = std::move(levels);
    if (!construct_out.empty()) write_point_file(construct_out, b.points, manifest);
    std::cout << b.points.size() << " points in R^" << b.points.dim << "\n";
    std::cerr << "construct: " << timer.ms() << " ms"
              << (construct_out.empty() ? " (no --out, not written)" : ", wrote " + construct_out)
              << "\n";
    return kOk;
  }

  if (stepup_cmd->parsed()) {
    Timer timer;
    LoadedPoints in = read_point_file(stepup_in);
    Predicate phi = predicate_by_name(stepup_pred, in.points.dim);
    if (phi.dim != 0 && phi.dim != in.points.dim)
      throw argument_error("predicate dimension does not match the input file");
    OrderPredicate prec = first_coord_order();
    CertifyMode mode = mode_by_name(mode_name);
    Rational eps;
    CertifyOutcome outcome;
    PointSequence stepped;
    if (!stepup_eps.empty()) {
      eps = Rational::from_string(stepup_eps);
      stepped = step_up_sequence(in.points, phi, prec, eps, limits);
      outcome = certify_points(stepped, in.points, phi, prec, eps, mode, limits, seed);
    } else {
      ChosenEpsilon chosen = choose_epsilon(in.points, phi, prec, mode, limits, seed);
      eps = chosen.epsilon;
      stepped = std::move(chosen.stepped);
      outcome.ok = true;
      outcome.cert = chosen.cert;
    }
    json params{{"in", stepup_in}, {"predicate", stepup_pred}, {"mode", mode_name}, {"seed", seed}};
    json manifest = make_manifest("stepup", params);
    manifest["certificate"] = certificate_to_json(outcome.cert);
    manifest["certified"] = outcome.ok;
    if (!outcome.ok) {
      manifest["failed_check"] = outcome.failed_check;
      manifest["witness"] = outcome.witness;
    }
    if (!stepup_out.empty()) write_point_file(stepup_out, stepped, manifest);
    std::cout << manifest.dump(2) << "\n";
    std::cerr << "stepup: " << timer.ms() << " ms\n";
    return outcome.ok ? kOk : kRefuted;
  }

  if (check_cmd->parsed()) {
    LoadedPoints in = read_point_file(check_in);
    const PointSequence& seq = in.points;
    json out;
    bool pass = false;
    if (checker == "order-type") {
      HomogeneityVerdict v = is_order_type_homogeneous(seq);
      pass = v.homogeneous();
      out["status"] = v.status == Homogeneity::positive   ? "positive"
                      : v.status == Homogeneity::negative ? "negative"
                                                          : "not_homogeneous";
      if (v.witness) out["witness"] = *v.witness;
    } else if (checker == "super-order-type") {
      pass = is_super_order_type_homogeneous(seq);
      out["status"] = pass;
    } else if (checker == "k-order-type") {
      if (check_k < 1) throw argument_error("k-order-type needs --k");
      pass = is_order_type_homogeneous_to_level(seq, check_k);
      out["status"] = pass;
    } else if (checker == "monotone") {
      if (check_k < 1) throw argument_error("monotone needs --k");
      MonotoneReport rep = monotone_to_level_report(seq, check_k);
      pass = rep.monotone;
      out["status"] = pass;
      if (rep.level) out["level"] = *rep.level;
      if (rep.window) out["window"] = *rep.window;
    } else if (checker == "super-monotone") {
      MonotoneReport rep = monotone_to_level_report(seq, seq.dim);
      pass = rep.monotone;
      out["status"] = pass;
      if (rep.level) out["level"] = *rep.level;
    } else if (checker == "markov") {
      pass = is_markov_system(seq);
      out["status"] = pass;
    } else if (checker == "general-position") {
      pass = certify_general_position(seq, limits);
      out["status"] = pass;
    } else {
      throw argument_error("unknown checker: " + checker);
    }
    out["checker"] = checker;
    std::cout << out.dump(2) << "\n";
    return pass ? kOk : kRefuted;
  }

  if (search_cmd->parsed()) {
    Timer timer;
    LoadedPoints in = read_point_file(search_in);
    if (in.points.empty()) throw argument_error("search: empty point file");
    SearchOptions opts;
    opts.node_budget = budget;
    SearchResult res;
    if (search_kind == "super-ot") {
      res = find_super_homogeneous_subsequence(in.points, search_n, opts);
    } else if (search_kind == "monotone") {
      std::vector<Rational> xs;
      for (const Point& p : in.points.pts) xs.push_back(p[0]);
      res = longest_monotone_subsequence(xs);
      res.found = static_cast<int>(res.witness.size()) >= search_n;
    } else if (search_kind.rfind("phi:", 0) == 0) {
      Predicate phi = predicate_by_name(search_kind.substr(4), in.points.dim);
      res = find_homogeneous_subsequence(in.points, phi, search_n, opts);
    } else {
      throw argument_error("unknown search kind: " + search_kind);
    }
    json out = search_result_to_json(res);
    out["n"] = search_n;
    out["kind"] = search_kind;
    std::cout << out.dump(2) << "\n";
    std::cerr << "search: " << timer.ms() << " ms, " << res.nodes << " nodes\n";
    if (expect.empty()) return kOk;
    if (expect == "found") return res.found ? kOk : kRefuted;
    if (expect == "absent") return !res.found && res.exhaustive ? kOk : kRefuted;
    throw argument_error("unknown --expect value: " + expect);
  }

  if (export_cmd->parsed()) {
    LoadedPoints in = read_point_file(export_in);
    if (export_out.empty()) {
      export_csv(std::cout, in.points);
    } else {
      std::ofstream out(export_out);
      if (!out) throw argument_error("cannot open for writing: " + export_out);
      export_csv(out, in.points);
    }
    return kOk;
  }

  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const guard_error& e) {
    std::cerr << "guard: " << e.what() << "\n";
    return kUsage;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
