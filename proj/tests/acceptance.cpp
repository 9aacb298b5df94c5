// Desk-scale acceptance suite: one PASS/FAIL line per criterion.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "vectormix/verification.hpp"

using namespace vectormix;

namespace {

int failures = 0;

void line(const std::string& criterion, bool passed, const std::string& detail) {
  std::printf("%s %s: %s\n", passed ? "PASS" : "FAIL", criterion.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!passed) ++failures;
}

void line(const std::string& criterion, const std::vector<CheckReport>& reports) {
  bool ok = true;
  std::string detail;
  for (const auto& r : reports) {
    ok = ok && r.passed;
    if (!detail.empty()) detail += "; ";
    detail += r.check + " " + r.message;
  }
  line(criterion, ok, detail);
}

SpectralField dipole(int n) {
  InitSpec s;
  s.kind = InitKind::Dipole;
  s.grid = GridSpec::with_cutoff(n);
  return build_initial(s);
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  VerifyParams p;  // N = 64, t_end = 5, rtol = 1e-8, levels 16/32/64, N_ref = 256

  const SimConfig cfg = dipole_config(p.n_cutoff, 1.0, p.t_end, p.rtol);
  const NormSeries run = evolve(cfg, make_provider(cfg));
  line("energy identity (N=64, t=5, drift <= 1e-7)", {check_energy(run, 1e-7)});
  line("divergence invariant (<= 1e-11 at every output)", {check_divergence(run, 1e-11)});

  line("optimizer identity (FD 1e-4, |grad U| = 1 to 1e-12)",
       {check_optimizer_identity(dipole(64), 1.0, 1e-5, 1e-4, 1e-12)});
  line("degenerate stirring for u = (0, sin x)", {check_degenerate(64, 1.0)});
  line("Groenwall envelope (alpha = 1, 5% slack)", {check_groenwall_envelope(run, 0.05)});

  line("Sobolev growth orders 1 and 2 (cellular U, t=2, 5% slack)", run_suite("growth", p));
  line("stability identity (random pair, cellular U, t=2, 1e-7)", run_suite("stability", p));
  line("convergence (16/32/64 vs 256, T=1) and translation closed form (1e-8)", run_suite("converge", p));
  line("bound calculators (unity cases, envelope endpoints)", {check_bounds_unity()});

  std::vector<CheckReport> fits;
  for (double alpha : {1.0, 0.5}) {
    SimConfig c = dipole_config(128, alpha, 5.0, p.rtol);
    c.output_interval = 0.05;
    fits.push_back(check_exponential_fit(evolve(c, make_provider(c)), 1.0, 5.0, 0.95));
  }
  line("exponential fit (N=128, [1,5], rate < 0, R^2 >= 0.95)", fits);
  std::printf("INFO |rate(alpha=1/2)| = %.6g, |rate(alpha=1)| = %.6g\n", -fits[1].metric("rate"),
              -fits[0].metric("rate"));

  line("four-cell structure of the optimal field (N=64, 8x8 scan)", {check_four_cells(dipole(64), 1.0)});

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d failure(s), %.1f s\n", failures, secs);
  return failures == 0 ? 0 : 1;
}
