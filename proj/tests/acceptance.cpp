// Acceptance gate: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit code 0 only when everything passes.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <list>
#include <sstream>

#include "gentle/invariants.hpp"
#include "gentle/io.hpp"
#include "gentle/keys.hpp"
#include "gentle/suites.hpp"

using namespace gentle;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void line(int n, const std::string& what, bool pass, double secs, const std::string& note = "") {
  std::printf("CRITERION %d %s: %s (%.1fs)%s\n", n, pass ? "PASS" : "FAIL", what.c_str(), secs,
              note.empty() ? "" : ("  -- " + note).c_str());
  if (!pass) ++failures;
}

struct Timed {
  Clock::time_point t0 = Clock::now();
  double secs() const { return std::chrono::duration<double>(Clock::now() - t0).count(); }
};

bool all_pass(const cli::Report& r, std::string& note) {
  for (const auto& c : r.checks)
    if (!c.pass) {
      note += (note.empty() ? "" : "; ") + c.name;
      return false;
    }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli_path = argc > 1 ? argv[1] : "";
  cli::SuiteOptions opt;
  opt.seed = 7;

  // 1. nilpotency of the augmentation ideal of elementary abelian p-groups
  {
    Timed t;
    bool ok = true;
    std::string note;
    for (uint32_t p : {2u, 3u}) {
      for (uint32_t m : {1u, 2u, 3u}) {
        std::size_t order = 1;
        for (uint32_t i = 0; i < m; ++i) order *= p;
        if (order > 27) continue;
        auto res = grp::check_lemma_3_1(p, m);
        if (!res.top_vanishes || !res.sharp) {
          ok = false;
          note += "p=" + std::to_string(p) + ",m=" + std::to_string(m) + " ";
        }
      }
    }
    double s = t.secs();
    line(1, "lemma 3.1 suite (vanishing + sharpness, p^m <= 27)", ok && s < 10.0, s,
         s >= 10.0 ? "over time budget" : note);
  }

  // 2. projection congruence and kernel intersection
  {
    Timed t;
    cli::Report r;
    r.caps = opt.caps;
    cli::suite_lemma7(r, opt);
    std::string note;
    bool ok = all_pass(r, note);
    double s = t.secs();
    line(2, "lemma 7.1 suite (exhaustive identities + 100 membership trials)", ok && s < 30.0, s, note);
  }

  // 3. the section-3 bounds
  {
    Timed t;
    cli::Report r;
    r.caps = opt.caps;
    cli::suite_lemma3(r, opt);
    // keep only the bound checks (criterion 1 already covered 3.1)
    std::string note;
    bool ok = all_pass(r, note);
    double s = t.secs();
    line(3, "section-3 bounds (3.3/3.4 exhaustive, 3.5 seeded, 3.8, 3.11 window, A5 stability)", ok && s < 60.0,
         s, note);
  }

  // 4. simplicial core on the catalog
  {
    Timed t;
    bool ok = true;
    std::string note;
    std::size_t cap = cli::catalog_module_cap(opt.caps);
    std::vector<simp::CrewPtr> crews;
    for (const auto& ref : cli::catalog_crew_refs()) crews.push_back(cli::resolve_ref(ref, cap).crew);
    for (auto& K : crews) {
      if (!K->validate().empty()) ok = false;
      for (uint32_t p : {2u, 3u}) {
        try {
          simp::normalized_chains(*K, p, K->dim()).validate();
        } catch (const std::exception&) {
          ok = false;
          note += "dd!=0 ";
        }
      }
    }
    std::vector<simp::ModulePtr> targets;
    for (const auto& ref : cli::catalog_target_refs()) targets.push_back(cli::resolve_ref(ref, cap).module);
    for (auto& T : targets)
      if (!cli::dold_kan_round_trip_ok(*T, std::min<std::size_t>(T->cap(), 6))) {
        ok = false;
        note += "round-trip ";
      }
    for (auto& K : crews)
      for (auto& T : targets) {
        simp::Pi0 c = simp::pi0(K, simp::module_target(T), opt.caps);
        if (!c.cross_check_ok) {
          ok = false;
          note += "cross-check(" + K->name + "/" + T->name() + ") ";
        }
      }
    double s = t.secs();
    line(4, "simplicial core (dd=0, Dold-Kan round trip, pi0 cross-check)", ok && s < 60.0, s, note);
  }

  // 5 and 6 share the per-pair analyses
  {
    Timed t;
    bool ok5 = true, ok6 = true;
    std::string note5, note6;
    std::size_t cap = cli::catalog_module_cap(opt.caps);
    std::list<inv::SliceAnalysis> analyses;
    std::vector<std::pair<std::string, inv::SliceAnalysis*>> pairs;
    for (const auto& kref : cli::catalog_crew_refs())
      for (const auto& tref : cli::catalog_target_refs()) {
        analyses.emplace_back(cli::resolve_ref(kref, cap).crew,
                              simp::module_target(cli::resolve_ref(tref, cap).module), opt.caps);
        pairs.emplace_back(kref + "/" + tref, &analyses.back());
      }
    for (auto& [name, a] : pairs) {
      auto stab = a->stabilization_r(opt.caps.r_max);
      if (!stab) {
        ok5 = false;
        note5 += name + ":not-reached ";
        continue;
      }
      if (name == "sphere:1/em:2,1" && *stab != 1) {
        ok5 = false;
        note5 += "sphere:1/em:2,1 radius " + std::to_string(*stab) + " != 1 ";
      }
      // every table bounded by the stabilization radius
      const simp::Pi0& classes = a->classes();
      uint32_t p = classes.slice.p;
      std::size_t total = 1;
      for (std::size_t i = 0; i < classes.class_count(); ++i) total *= p;
      for (uint32_t r = 0; r <= *stab; ++r) a->power_kernel(r);
      std::vector<uint8_t> oks(total, 0);
      parallel_for(total, [&](std::size_t code) {
        inv::InvariantTable f;
        f.context = &classes;
        f.values.resize(classes.class_count());
        std::size_t c = code;
        for (std::size_t i = 0; i < classes.class_count(); ++i) {
          f.values[i] = static_cast<uint32_t>(c % p);
          c /= p;
        }
        auto deg = a->simplicial_degree(f, *stab, false);
        oks[code] = deg.degree.has_value() ? 1 : 0;
      });
      for (auto v : oks)
        if (!v) {
          ok5 = false;
          note5 += name + ":unbounded-table ";
          break;
        }
      for (uint32_t r = 0; r < 3; ++r) {
        if (!gf::subspace_leq(a->power_kernel(r + 1), a->power_kernel(r)).holds) {
          ok6 = false;
          note6 += name + ":r=" + std::to_string(r) + " ";
        }
      }
    }
    double s = t.secs();
    line(5, "stabilization radii finite, sphere:1/em:2,1 = 1, all tables bounded", ok5 && s < 300.0, s, note5);
    line(6, "kernel monotonicity for r < 3 on every catalog pair", ok6, s, note6);
  }

  // 7. section-12 and 10.1 checks
  {
    Timed t;
    cli::Report r;
    r.caps = opt.caps;
    cli::suite_lemma12(r, opt);
    std::string note;
    bool ok = all_pass(r, note);
    double s = t.secs();
    line(7, "lemma 12.1 cancellation, 12.2 polynomial bound (p=2,3), 10.1 triples", ok, s, note);
  }

  // 8. the section-4 suite
  {
    Timed t;
    cli::Report r;
    r.caps = opt.caps;
    cli::SuiteOptions o4 = opt;
    o4.trials = 50;
    cli::suite_lemma4(r, o4);
    std::string note;
    bool ok = all_pass(r, note);
    double s = t.secs();
    line(8, "50 seeded key trials + lifts + sectors + function-square key", ok && s < 60.0, s, note);
  }

  // 9. byte-identical machine-readable reports across thread counts
  {
    Timed t;
    bool ok = false;
    std::string note;
    if (cli_path.empty()) {
      note = "no CLI path given";
    } else {
      auto run = [&](const std::string& threads, const std::string& out) {
        std::string cmd = "GENTLE_THREADS=" + threads + " " + cli_path + " suite all --seed 7 --out " + out +
                          " > /dev/null 2>&1";
        return std::system(cmd.c_str());
      };
      int rc1 = run("1", "acc_report_a.json");
      int rc2 = run("3", "acc_report_b.json");
      int rc3 = run("2", "acc_report_c.json");
      auto slurp = [](const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
      };
      std::string a = slurp("acc_report_a.json"), b = slurp("acc_report_b.json"), c = slurp("acc_report_c.json");
      ok = !a.empty() && a == b && b == c && rc1 == rc2 && rc2 == rc3;
      if (!ok) note = "reports differ across runs/threads";
    }
    line(9, "suite all --seed 7 reports byte-identical for any thread count", ok, t.secs(), note);
  }

  std::printf("%s: %d criterion(s) failing\n", failures == 0 ? "ALL PASS" : "RESULT", failures);
  return failures == 0 ? 0 : 1;
}
