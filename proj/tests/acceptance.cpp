// Acceptance gate: one PASS/FAIL line per criterion; exits 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "ibba/fixtures.hpp"
#include "ibba/ibba.hpp"
#include "ibba/oracle.hpp"
#include "support.hpp"

using namespace ibba;

namespace {

int failures = 0;

void report(int id, const char* title, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s -- %s\n", pass ? "PASS" : "FAIL", id, title, detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

constexpr double kP7Eps = 1e-4 * 5.0;
constexpr double kP7X = -0.774575;
constexpr double kP7F_ibba = -0.33007410;
constexpr double kP7F_pen = -0.33007412;


const std::vector<fixtures::GeneratedProblem>& battery() {
  static const auto b = fixtures::generate_battery(10);
  return b;
}

const oracle::GridReport& battery_grid(std::size_t i) {
  static std::vector<oracle::GridReport> grids = [] {
    std::vector<oracle::GridReport> out;
    for (const auto& g : battery()) out.push_back(oracle::grid_minimize(g.spec, 1000000));
    return out;
  }();
  return grids[i];
}

void criterion1() {
  const auto p = fixtures::problem7();
  bool ks_valid = true;
  for (std::size_t j = 1; j <= p.level_count(); ++j) {
    ks_valid = ks_valid && p.level(j).K > oracle::estimate_lipschitz(p.level(j).function, p.a(), p.b(), 1000000);
  }
  SolverConfig config;
  config.epsilon = kP7Eps;
  const auto t0 = std::chrono::steady_clock::now();
  const auto out = solve(p, config);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const Trial* best = out.best();
  const bool solved = out.status == SolveStatus::AccuracyReached && best != nullptr;
  const double x = best ? best->x : NAN;
  const double f = best ? best->raw : NAN;
  const bool x_ok = std::fabs(x - kP7X) <= 1e-3;
  const bool f_ok = std::fabs(f - kP7F_ibba) <= 1e-3;
  const bool pass = ks_valid && solved && x_ok && f_ok && seconds < 1.0 && out.trials.size() < 5000;
  report(1, "Problem 7 golden (IBBA)", pass,
         fmt("status=%s K>L_hat=%s x=%.8f (|dx|=%.2e %s) f=%.8f (|df|=%.2e %s) iterations=%zu time=%.3fs",
             to_string(out.status), ks_valid ? "yes" : "no", x, std::fabs(x - kP7X), x_ok ? "ok" : "FAIL", f,
             std::fabs(f - kP7F_ibba), f_ok ? "ok" : "FAIL", out.trials.size(), seconds));
}

void criterion2() {
  const auto p = fixtures::problem7();
  const auto out = tune_penalty(p, PenaltyConfig{}, kP7Eps);
  const bool feasible = out.feasible && evaluate_index(p, out.x).index == p.level_count();
  const bool f_ok = std::fabs(out.objective - kP7F_pen) <= 1e-3;
  report(2, "Problem 7 PEN with P*=15", feasible && f_ok && out.pstar == 15.0,
         fmt("feasible=%s P*=%g x=%.8f f=%.8f (|df|=%.2e %s)", feasible ? "yes" : "no", out.pstar, out.x,
             out.objective, std::fabs(out.objective - kP7F_pen), f_ok ? "ok" : "FAIL"));
}

void criterion3() {
  const auto p = fixtures::problem7();
  SolverConfig config;
  config.epsilon = kP7Eps;
  const auto ibba_run = solve(p, config);
  const auto pen = tune_penalty(p, PenaltyConfig{}, kP7Eps);
  const std::size_t ii = ibba_run.ledger.iterations(), pi = pen.ledger.iterations();
  const std::size_t ie = ibba_run.ledger.weighted_evaluations(), pe = pen.ledger.weighted_evaluations();
  report(3, "relative efficiency on Problem 7", ie < pe && ii < pi,
         fmt("iterations PEN=%zu IBBA=%zu (speedup %.2f); evaluations PEN=%zu IBBA=%zu (speedup %.2f)", pi, ii,
             double(pi) / double(ii), pe, ie, double(pe) / double(ie)));
}

void criterion4() {
  const ProblemSpec constant("constant_infeasible", 0, 1, {{Expression::parse("1"), 1, false}},
                             {Expression::parse("x"), 1, false});
  const ProblemSpec disjoint("disjoint", 0, 1,
                             {{Expression::parse("x - 0.4"), 1.5, false}, {Expression::parse("0.6 - x"), 1.5, false}},
                             {Expression::parse("x"), 1.5, false});
  std::string detail;
  bool pass = true;
  for (const auto* p : {&constant, &disjoint}) {
    SolverConfig config;
    const auto out = solve(*p, config);
    const bool ok = out.status == SolveStatus::InfeasibleDetected && out.ledger.objective_trials() == 0 &&
                    out.trials.size() <= config.max_iterations;
    pass = pass && ok;
    detail += fmt("%s: %s after %zu trials, N_f=%zu; ", p->name().c_str(), to_string(out.status),
                  out.trials.size(), out.ledger.objective_trials());
  }
  report(4, "infeasibility detection", pass, detail);
}

void criterion5() {
  std::size_t splits = 0, violations = 0;
  for (const auto& g : battery()) {
    std::vector<double> L;
    for (std::size_t j = 1; j <= g.spec.level_count(); ++j) {
      L.push_back(oracle::estimate_lipschitz(g.spec.level(j).function, g.spec.a(), g.spec.b(), 1000000) *
                  (1 + 1e-6));
    }
    const auto [out, log] = checks::run_with_subdivisions(g.spec, SolverConfig{});
    splits += log.size();
    violations += checks::contraction_violations(log, L, g.spec.overestimates());
  }
  report(5, "contraction bound on 10 generated problems", violations == 0 && splits > 0,
         fmt("%zu subdivisions checked, %zu violations", splits, violations));
}

void criterion6() {
  const std::vector<ProblemSpec> fixtures_{
      ProblemSpec("trig", 0, 2, {{Expression::parse("sin(4*x) + 0.3"), 4.5, false}},
                  {Expression::parse("cos(3*x) + 0.2*x"), 3.5, false}),
      ProblemSpec("two-constraints", -1, 1,
                  {{Expression::parse("cos(5*x) - 0.5"), 6, false}, {Expression::parse("x^2 - 0.6"), 2.5, false}},
                  {Expression::parse("sin(3*x) + 0.5*abs(x)"), 4, false}),
      ProblemSpec("unconstrained", 0, 1, {}, {Expression::parse("abs(x - 0.3) + 0.1*sin(20*x)"), 3.5, false}),
  };
  std::size_t checked = 0, violations = 0;
  double worst = -1e300;
  for (const auto& p : fixtures_) {
    checks::DominanceCount count;
    SolverConfig config;
    config.epsilon = 1e-3 * (p.b() - p.a());
    config.observer = [&](const IterationView& v) { checks::check_dominance(p, v, 1e-3, 1e-12, count); };
    solve(p, config);
    checked += count.checked;
    violations += count.violations;
    worst = std::max(worst, count.worst);
  }
  report(6, "support functions dominated by phi_k", violations == 0 && checked > 0,
         fmt("%zu grid comparisons, %zu violations, worst psi-phi=%.3e", checked, violations, worst));
}

void criterion7() {
  std::size_t feasible = 0, bad = 0, chain_failures = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < battery().size(); ++i) {
    const auto& p = battery()[i].spec;
    const auto& grid = battery_grid(i);
    const auto out = solve(p);
    if (!grid.feasible()) continue;
    ++feasible;
    const double K = p.objective().K;
    const double tol = K * out.epsilon + K * (p.b() - p.a()) / 1e6;
    if (!out.zstar.present() || out.status != SolveStatus::AccuracyReached) {
      ++bad;
      continue;
    }
    const double gap = std::fabs(out.zstar.value() - grid.best_f);
    worst = std::max(worst, gap / tol);
    if (gap > tol) ++bad;
    if (evaluate_index(p, out.best()->x).index != p.level_count()) ++chain_failures;
  }
  report(7, "oracle equivalence on the generated battery", feasible > 0 && bad == 0 && chain_failures == 0,
         fmt("%zu feasible problems, %zu outside tolerance (worst gap/tol=%.3f), %zu minimizers failing the chain",
             feasible, bad, worst, chain_failures));
}

void criterion8() {
  std::size_t enclosures = 0, misses = 0;
  for (std::size_t i = 0; i < battery().size(); ++i) {
    const auto& p = battery()[i].spec;
    const auto out = solve(p);
    if (!out.bounds || out.bounds->kind != BoundKind::Enclosure) continue;
    ++enclosures;
    const auto& grid = battery_grid(i);
    const double slack = p.objective().K * (p.b() - p.a()) / 1e6;
    if (!grid.feasible() || grid.best_f < out.bounds->lower || grid.best_f > out.bounds->upper + slack) ++misses;
  }
  report(8, "enclosure [R_t+Z*, Z*] contains the grid minimum", misses == 0,
         fmt("%zu enclosures returned, %zu missed the grid minimum", enclosures, misses));
}

void criterion9() {
  std::vector<ProblemSpec> problems{fixtures::problem7()};
  for (const auto& g : battery()) problems.push_back(g.spec);
  std::size_t same_twice = 0, same_full = 0;
  for (const auto& p : problems) {
    SolverConfig inc;
    inc.emit_trace = true;
    SolverConfig full = inc;
    full.update = CharacteristicUpdate::Full;
    const auto a = solve(p, inc);
    const auto b = solve(p, inc);
    const auto c = solve(p, full);
    same_twice += a.trials == b.trials && a.trace == b.trace;
    same_full += a.trials == c.trials && a.trace == c.trace;
  }
  report(9, "determinism and incremental/full equivalence",
         same_twice == problems.size() && same_full == problems.size(),
         fmt("%zu/%zu repeated runs identical, %zu/%zu incremental runs identical to full recomputation", same_twice,
             problems.size(), same_full, problems.size()));
}

void criterion10() {
  const std::vector<ProblemSpec> fixtures_{
      ProblemSpec("abs", 0, 1, {}, {Expression::parse("abs(x - 0.3)"), 1.5, false}),
      ProblemSpec("trig", -2, 3, {}, {Expression::parse("sin(3*x) + 0.5*cos(7*x) + 0.1*x"), 7.5, false}),
      ProblemSpec("kink", 0, 4, {}, {Expression::parse("abs(sin(2*x)) - 0.3*x"), 2.5, false}),
  };
  std::size_t identical = 0;
  std::string detail;
  for (const auto& p : fixtures_) {
    const auto out = solve(p);
    const auto pj = pijavskii_minimize(p.objective().function, p.objective().K, p.a(), p.b(), out.epsilon);
    bool same = out.trials.size() == pj.trials.size();
    for (std::size_t i = 0; same && i < pj.trials.size(); ++i) {
      same = out.trials[i].x == pj.trials[i].x && out.trials[i].raw == pj.trials[i].value;
    }
    identical += same;
    detail += fmt("%s: %zu vs %zu trials %s; ", p.name().c_str(), out.trials.size(), pj.trials.size(),
                  same ? "identical" : "DIFFER");
  }
  report(10, "unconstrained reduction to Pijavskii", identical == fixtures_.size(), detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
