#include "l0flow/check.hpp"

#include <cmath>
#include <cstdint>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "l0flow/correction.hpp"
#include "l0flow/rng.hpp"
#include "l0flow/smoothing.hpp"

namespace l0flow {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

bool near_breakpoint(double s, double mu, double eps) {
  return std::abs(s - mu / 3) < eps || std::abs(s - mu) < eps;
}

}  // namespace

std::vector<CheckResult> run_invariant_checks(const CheckOptions& options) {
  std::vector<CheckResult> out;
  Rng rng(options.seed);
  const double fault = options.inject_fault ? 1.01 : 1.0;

  {
    double worst = 0;
    for (double mu : {0.6, 1e-3, 7.0}) {
      for (double s : {mu / 3, mu}) {
        const double e = 1e-10 * mu;
        worst = std::max(worst, std::abs(theta(s + e, mu) - theta(s - e, mu)));
        // gradient jump relative to its scale 1/mu
        worst = std::max(worst, mu * std::abs(theta_grad_s(s + e, mu) - theta_grad_s(s - e, mu)));
      }
    }
    out.push_back({"theta continuity at breakpoints", worst < 1e-8, "max jump " + fmt(worst)});
  }

  {
    double worst = 0;
    int n = 0;
    while (n < 1000) {
      const double mu = std::exp(rng.uniform(std::log(1e-2), std::log(10.0)));
      const double s = rng.uniform(0.0, 1.5 * mu);
      if (near_breakpoint(s, mu, 1e-6 * mu) || s < 1e-6 * mu) continue;
      if (std::abs(mu - s) < 1e-6 * mu || std::abs(mu - 3 * s) < 1e-6 * mu) continue;
      const double hs = 1e-7 * mu;
      const double fd_s = (theta(s + hs, mu) - theta(s - hs, mu)) / (2 * hs);
      const double fd_mu = (theta(s, mu + hs) - theta(s, mu - hs)) / (2 * hs);
      const double gs = fault * theta_grad_s(s, mu);
      const double gm = theta_grad_mu(s, mu);
      worst = std::max(worst, std::abs(fd_s - gs) / std::max(std::abs(gs), 1.0 / mu));
      worst = std::max(worst, std::abs(fd_mu - gm) / std::max(std::abs(gm), 1.0 / mu));
      ++n;
    }
    out.push_back({"theta gradients match finite differences", worst <= 1e-6, "max rel err " + fmt(worst)});
  }

  {
    bool ok = true;
    for (int k = 0; k < 1000; ++k) {
      const double mu = rng.uniform(1e-3, 5.0);
      const double s = rng.uniform(0.0, 3 * mu);
      const double v = theta(s, mu);
      ok = ok && v >= 0 && v <= 1 && theta_grad_s(s, mu) >= 0 && theta_grad_mu(s, mu) <= 0;
    }
    out.push_back({"theta bounds and monotonicity", ok, ""});
  }

  {
    const Index n = 6;
    const BoxSet box(Vector::Zero(n), rng.uniform_in(Vector::Constant(n, 4.0)));
    bool idem = true;
    double worst = 0;
    for (int k = 0; k < 500; ++k) {
      const Vector u = 3 * rng.normal_vector(n);
      const Vector w = 3 * rng.normal_vector(n);
      const Vector pu = box.project(u);
      idem = idem && box.project(pu) == pu && box.contains(pu);
      worst = std::max(worst, (pu - box.project(w)).norm() - (u - w).norm());
    }
    out.push_back({"projection idempotent", idem, ""});
    out.push_back({"projection nonexpansive", worst <= 1e-12, "max excess " + fmt(std::max(worst, 0.0))});
  }

  {
    bool ok = true;
    for (int k = 0; k < 200; ++k) {
      const Index n = 8;
      const double mu_star = rng.uniform(1e-3, 1.0);
      const BoxSet box = BoxSet::uniform(n, 1.0);
      Vector x = rng.uniform_in(box.upper()) * mu_star;
      if (k % 3 == 0) x(0) = mu_star / 6;
      if (k % 3 == 1) x(0) = mu_star / 2;
      const SupportPartition p = partition(x, mu_star, box);
      std::vector<int> seen(static_cast<std::size_t>(n), 0);
      for (const auto* set : {&p.I, &p.J, &p.K})
        for (Index i : *set) ++seen[static_cast<std::size_t>(i)];
      for (int c : seen) ok = ok && c == 1;
      for (Index i : p.I) ok = ok && x(i) < mu_star / 6;
      for (Index i : p.J) ok = ok && x(i) >= mu_star / 6 && x(i) < mu_star / 2;
      for (Index i : p.K) ok = ok && x(i) >= mu_star / 2;
      const Vector u = mu_update_point(x, mu_star);
      ok = ok && cardinality(u) <= cardinality(x);
      ok = ok && mu_update_point(u, mu_star) == u;
    }
    out.push_back({"partition exhaustive and disjoint", ok, ""});
  }
  return out;
}

void print_checks(const std::vector<CheckResult>& results, std::ostream& os, bool json) {
  if (json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results) arr.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    os << arr.dump(2) << '\n';
    return;
  }
  for (const auto& r : results) {
    os << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) os << " (" << r.detail << ")";
    os << '\n';
  }
}

}  // namespace l0flow
