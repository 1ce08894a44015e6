// rulecbf command line: simulate, passfail, coverage, score.
#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rulecbf/artifacts.hpp"

namespace fs = std::filesystem;
using namespace rulecbf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

struct Overrides {
  std::optional<double> dt, T;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string out;
};

ScenarioSpec load_with_overrides(const fs::path& path, const Overrides& o) {
  ScenarioSpec sc = load_scenario(path);
  if (o.dt) sc.planner.dt = *o.dt;
  if (o.T) sc.planner.horizon = *o.T;
  if (o.seed) sc.planner.seed = *o.seed;
  try {
    sc.validate();
  } catch (const std::exception& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
  return sc;
}

std::string csv_text(const Trajectory& t, const std::map<std::string, std::vector<double>>& slack = {}) {
  std::ostringstream os;
  write_trajectory_csv(os, t, slack);
  return os.str();
}

void write_run(const fs::path& dir, const ScenarioSpec& sc, const PlanResult& res) {
  write_text(dir / "report.json", plan_json(sc, res).dump(2) + "\n");
  if (!res.feasible()) return;
  write_text(dir / "trajectory.csv", csv_text(res.trajectory, res.slack));
  write_text(dir / "scene.svg", scene_svg(sc, {{"ego", &res.trajectory, &res.report, false}}));
}

int simulate_one(const fs::path& path, const Overrides& o) {
  const ScenarioSpec sc = load_with_overrides(path, o);
  const PlanContext ctx(sc);
  const PlanResult res = algorithm1(ctx, o.jobs);
  std::cout << plan_json(sc, res).dump(2) << "\n";
  if (!o.out.empty()) write_run(o.out, sc, res);
  return res.feasible() ? kExitOk : kExitInfeasible;
}

// Every *.json with a "map" key in `dir`, run `jobs` at a time.
int simulate_batch(const fs::path& dir, const Overrides& o) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".json") continue;
    std::ifstream in(e.path());
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_object() && j.contains("map")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<int> codes(files.size(), kExitOk);
  std::vector<std::string> lines(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < files.size(); k = next++) {
      try {
        const ScenarioSpec sc = load_with_overrides(files[k], o);
        const PlanContext ctx(sc);
        const PlanResult res = algorithm1(ctx, 1);
        if (!o.out.empty()) write_run(fs::path(o.out) / files[k].stem(), sc, res);
        std::string rr;
        for (const auto& r : res.r_relax) rr += (rr.empty() ? "" : ",") + r;
        lines[k] = fmt::format("{}: {} level {} R_relax {{{}}} ({:.2f} s)", files[k].filename().string(),
                               to_string(res.status), res.level, rr, res.runtime_s);
        codes[k] = res.feasible() ? kExitOk : kExitInfeasible;
      } catch (const std::exception& e) {
        lines[k] = fmt::format("{}: error: {}", files[k].filename().string(), e.what());
        codes[k] = kExitError;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::max(1, o.jobs); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& l : lines) std::cout << l << "\n";
  if (std::count(codes.begin(), codes.end(), kExitError) > 0) return kExitError;
  if (std::count(codes.begin(), codes.end(), kExitInfeasible) > 0) return kExitInfeasible;
  return kExitOk;
}

int passfail(const fs::path& scenario, const fs::path& candidate, const Overrides& o) {
  const ScenarioSpec sc = load_with_overrides(scenario, o);
  const PlanContext ctx(sc);
  const Trajectory cand = candidate.extension() == ".csv"
                              ? replay_trajectory(ctx, load_trajectory_csv(candidate).trajectory)
                              : track_candidate(ctx, load_candidate(candidate));
  const Verdict v = evaluate(ctx, cand, o.jobs);
  std::cout << verdict_json(sc, v).dump(2) << "\n";
  if (!o.out.empty()) {
    const fs::path dir = o.out;
    write_text(dir / "verdict.json", verdict_json(sc, v).dump(2) + "\n");
    write_text(dir / "candidate.csv", csv_text(v.candidate));
    std::vector<SvgTrack> tracks{{"candidate", &v.candidate, &v.candidate_report, true}};
    if (v.alternative && v.alternative->feasible()) {
      write_text(dir / "alternative.csv", csv_text(v.alternative->trajectory, v.alternative->slack));
      tracks.push_back({"alternative", &v.alternative->trajectory, &v.alternative->report, false});
    }
    write_text(dir / "scene.svg", scene_svg(sc, tracks));
  }
  return kExitOk;
}

int coverage(double w, double l, double pad_lo, double pad_hi, double beta, int z_max) {
  const Footprint fp{l, w};
  const PadInterval p{pad_lo, pad_hi};
  std::vector<CoverCost> table;
  const DiskCover best = optimize_cover(fp, {p, p, p, p}, beta, z_max, &table);
  std::cout << fmt::format("{:>3}  {:>10}  {:>12}  {:>12}\n", "z", "radius", "sigma_int", "cost");
  for (const auto& c : table) {
    std::cout << fmt::format("{:>3}  {:>10.6f}  {:>12.6f}  {:>12.6f}{}\n", c.z, c.radius, c.sigma_integral, c.cost,
                             c.z == best.count ? "  *" : "");
  }
  std::cout << fmt::format("best z = {}, radius = {:.6f}\n", best.count, best.radius);
  return kExitOk;
}

int score(const fs::path& scenario, const fs::path& csv, const Overrides& o) {
  const ScenarioSpec sc = load_with_overrides(scenario, o);
  const SceneGeometry geo(sc);
  const RecordedTrajectory rec = load_trajectory_csv(csv);
  std::cout << scores_json(sc, score_trajectory(sc, geo, rec.trajectory)).dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rule-prioritized trajectory synthesis and pass/fail evaluation"};
  app.require_subcommand(1);
  Overrides o;
  double dt = 0.0, T = 0.0;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub, bool with_out) {
    sub->add_option("--dt", dt, "override the time step [s]")->check(CLI::PositiveNumber);
    sub->add_option("--T", T, "override the horizon [s]")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "recorded in the run configuration");
    sub->add_option("--jobs", o.jobs, "relaxation levels (or scenarios) evaluated concurrently")
        ->check(CLI::Range(1, 256));
    if (with_out) sub->add_option("--out", o.out, "artifact directory");
  };

  std::string scenario, candidate, csv;
  auto* sim = app.add_subcommand("simulate", "run the recursive relaxation on a scenario (or a directory of them)");
  sim->add_option("scenario", scenario, "scenario .json or directory")->required();
  add_common(sim, true);

  auto* pf = app.add_subcommand("passfail", "evaluate a candidate trajectory (.json waypoints or recorded .csv)");
  pf->add_option("scenario", scenario)->required()->check(CLI::ExistingFile);
  pf->add_option("candidate", candidate)->required()->check(CLI::ExistingFile);
  add_common(pf, true);

  double w = 1.8, l = 4.0, beta = 2.0, pad_lo = 0.0, pad_hi = 0.0;
  int z_max = 8;
  auto* cov = app.add_subcommand("coverage", "disk-count table for a footprint");
  cov->add_option("--w", w, "width [m]")->check(CLI::PositiveNumber);
  cov->add_option("--l", l, "length [m]")->check(CLI::PositiveNumber);
  cov->add_option("--pad-lo", pad_lo, "lower end of the uniform pad range [m]")->check(CLI::NonNegativeNumber);
  cov->add_option("--pad-hi", pad_hi, "upper end of the uniform pad range [m]")->check(CLI::NonNegativeNumber);
  cov->add_option("--beta", beta, "weight of the over-coverage integral")->check(CLI::NonNegativeNumber);
  cov->add_option("--zmax", z_max, "largest disk count")->check(CLI::Range(1, 64));

  auto* sco = app.add_subcommand("score", "re-score a stored trajectory");
  sco->add_option("scenario", scenario)->required()->check(CLI::ExistingFile);
  sco->add_option("trajectory", csv)->required()->check(CLI::ExistingFile);
  add_common(sco, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }
  for (auto* sub : {sim, pf, sco}) {
    if (!sub->parsed()) continue;
    if (sub->count("--dt")) o.dt = dt;
    if (sub->count("--T")) o.T = T;
    if (sub->count("--seed")) o.seed = seed;
  }

  try {
    if (sim->parsed()) {
      return fs::is_directory(scenario) ? simulate_batch(scenario, o) : simulate_one(scenario, o);
    }
    if (pf->parsed()) return passfail(scenario, candidate, o);
    if (cov->parsed()) {
      if (pad_hi < pad_lo) throw std::invalid_argument("--pad-hi must not be below --pad-lo");
      return coverage(w, l, pad_lo, pad_hi, beta, z_max);
    }
    if (sco->parsed()) return score(scenario, csv, o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
