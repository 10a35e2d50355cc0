#include "fockprep/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "fockprep/errors.hpp"
#include "fockprep/grid.hpp"
#include "fockprep/parallel.hpp"

namespace fockprep {

namespace {

constexpr const char* kReversedPrefix = "reversed(";

bool is_reversed_label(const std::string& m) { return m.rfind(kReversedPrefix, 0) == 0 && m.back() == ')'; }

std::string strip_reversed(const std::string& m) {
  return m.substr(std::char_traits<char>::length(kReversedPrefix),
                  m.size() - std::char_traits<char>::length(kReversedPrefix) - 1);
}

std::size_t profile_k(std::size_t n, const ProfileOptions& options) {
  const std::size_t k = options.k == 0 ? n + 3 : options.k;
  if (k < n + 3) throw InvalidArgument("profile: need at least n_target + 3 eigenstates");
  return k;
}

void check_g(double g, double lambda) {
  if (!std::isfinite(g)) throw NumericalError("profile: non-finite integrand at lambda = " + std::to_string(lambda));
  if (!(g > 0.0)) {
    throw FlatDirectionError("profile: integrand vanishes at lambda = " + std::to_string(lambda));
  }
}

std::vector<double> evaluate_many(Method method, const DeformationPath& path, const SpatialGrid& grid, std::size_t n,
                                  const std::vector<double>& lambdas, const ProfileOptions& options) {
  std::vector<double> g(lambdas.size());
  parallel_for(lambdas.size(), options.jobs, [&](std::size_t i) {
    g[i] = evaluate_integrand(method, path, grid, n, lambdas[i], options);
    check_g(g[i], lambdas[i]);
  });
  return g;
}

AdiabaticityProfile build_profile(Method method, const DeformationPath& path, const SpatialGrid& grid, std::size_t n,
                                  std::vector<double> lambda_grid, const ProfileOptions& options) {
  if (method == Method::linear) throw InvalidArgument("profile: linear ramps have no adiabaticity profile");
  if (lambda_grid.size() < 2) throw InvalidArgument("profile: lambda grid needs at least two nodes");
  for (std::size_t i = 0; i + 1 < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] < lambda_grid[i + 1])) throw InvalidArgument("profile: lambda grid must ascend");
  }
  profile_k(n, options);

  AdiabaticityProfile prof;
  prof.method = method;
  prof.n_target = n;
  prof.lambda = std::move(lambda_grid);
  prof.g = evaluate_many(method, path, grid, n, prof.lambda, options);
  if (!options.refine) return prof;

  // Interval bisection until every midpoint agrees with the trapezoid average.
  std::vector<std::size_t> pending(prof.lambda.size() - 1);
  for (std::size_t i = 0; i < pending.size(); ++i) pending[i] = i;
  for (int level = 0; level < options.max_refine_levels && !pending.empty(); ++level) {
    std::vector<double> mids(pending.size());
    for (std::size_t j = 0; j < pending.size(); ++j) {
      const std::size_t i = pending[j];
      mids[j] = 0.5 * (prof.lambda[i] + prof.lambda[i + 1]);
    }
    const auto gm = evaluate_many(method, path, grid, n, mids, options);

    std::vector<double> lam, g;
    std::vector<std::size_t> next;
    lam.reserve(prof.lambda.size() + pending.size());
    g.reserve(prof.lambda.size() + pending.size());
    std::size_t j = 0;
    for (std::size_t i = 0; i < prof.lambda.size(); ++i) {
      lam.push_back(prof.lambda[i]);
      g.push_back(prof.g[i]);
      if (j < pending.size() && pending[j] == i) {
        const double avg = 0.5 * (prof.g[i] + prof.g[i + 1]);
        if (std::abs(gm[j] / avg - 1.0) > options.refine_tol) {
          next.push_back(lam.size() - 1);
          next.push_back(lam.size());
          lam.push_back(mids[j]);
          g.push_back(gm[j]);
        }
        ++j;
      }
    }
    prof.lambda = std::move(lam);
    prof.g = std::move(g);
    pending = std::move(next);
  }
  return prof;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::faquad:
      return "faquad";
    case Method::la:
      return "la";
    case Method::linear:
      return "linear";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "faquad") return Method::faquad;
  if (name == "la") return Method::la;
  if (name == "linear") return Method::linear;
  throw InvalidArgument("unknown method '" + name + "' (expected faquad, la or linear)");
}

Schedule::Schedule(DeformationPath path, double t_f, std::vector<double> t, std::vector<double> A, std::string method,
                   std::optional<double> c)
    : path_(path), t_f_(t_f), method_(std::move(method)), c_(c) {
  if (!std::isfinite(t_f) || !(t_f > 0.0)) throw InvalidArgument("schedule: t_f must be positive");
  if (t.size() < 2 || t.size() != A.size()) throw InvalidArgument("schedule: need at least two (t, A) samples");
  if (t.front() != 0.0 || t.back() != t_f) throw InvalidArgument("schedule: samples must span [0, t_f]");
  const double dir = A.back() - A.front();
  for (std::size_t i = 0; i + 1 < A.size(); ++i) {
    if ((A[i + 1] - A[i]) * dir < 0.0) throw InvalidArgument("schedule: A(t) must be monotone");
  }
  interp_ = MonotoneCubic(std::move(t), std::move(A));
}

std::vector<double> Schedule::times() const {
  const auto& t = interp_.x();
  if (!reversed_) return t;
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = t_f_ - t[t.size() - 1 - i];
  out.front() = 0.0;
  out.back() = t_f_;
  return out;
}

std::vector<double> Schedule::alphas() const {
  auto a = interp_.y();
  if (reversed_) std::reverse(a.begin(), a.end());
  return a;
}

double Schedule::alpha_at(double t) const { return reversed_ ? interp_(t_f_ - t) : interp_(t); }

double Schedule::rate_at(double t) const {
  return reversed_ ? -interp_.derivative(t_f_ - t) : interp_.derivative(t);
}

Schedule reverse(const Schedule& s) {
  Schedule r = s;
  if (s.reversed_) {
    r.reversed_ = false;
    r.method_ = strip_reversed(s.method_);
  } else if (is_reversed_label(s.method_)) {
    // Read back from a file: samples are already time-reversed.
    r.reversed_ = true;
    r.method_ = strip_reversed(s.method_);
  } else {
    r.reversed_ = true;
    r.method_ = kReversedPrefix + s.method_ + ")";
  }
  return r;
}

double AdiabaticityProfile::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < lambda.size(); ++i) s += 0.5 * (g[i] + g[i + 1]) * (lambda[i + 1] - lambda[i]);
  return s;
}

std::vector<double> uniform_lambda_grid(double from, double to, std::size_t nodes) {
  if (nodes < 2) throw InvalidArgument("lambda grid: need at least two nodes");
  std::vector<double> out(nodes);
  const double step = (to - from) / static_cast<double>(nodes - 1);
  for (std::size_t i = 0; i < nodes; ++i) out[i] = from + static_cast<double>(i) * step;
  out.back() = to;
  return out;
}

double faquad_integrand(const EigenSet& eig, const DeformationPath& path, const SpatialGrid& grid, std::size_t n) {
  const auto nc = dh_dlambda_elements(eig, path, grid, n);
  double g = 0.0;
  for (std::size_t j = 0; j < nc.neighbors.size(); ++j) g += nc.couplings[j] / (nc.gaps[j] * nc.gaps[j]);
  return g;
}

double la_integrand(const EigenSet& eig, std::size_t n) {
  if (n >= eig.k()) throw InvalidArgument("la_integrand: target outside eigenset");
  double g = 0.0;
  for (std::size_t m : neighbor_indices(n, eig.k())) {
    const double gap = eig.energies[n] - eig.energies[m];
    if (std::abs(gap) < 1e-14) throw DegeneratePairError("la_integrand: degenerate levels");
    g += 1.0 / (gap * gap);
  }
  return g;
}

double evaluate_integrand(Method method, const DeformationPath& path, const SpatialGrid& grid, std::size_t n,
                          double lambda, const ProfileOptions& options) {
  const auto eig = eigensolve(path.at(lambda), grid, profile_k(n, options), options.eigen);
  return method == Method::faquad ? faquad_integrand(eig, path, grid, n) : la_integrand(eig, n);
}

AdiabaticityProfile faquad_profile(const DeformationPath& path, const SpatialGrid& grid, std::size_t n_target,
                                   std::vector<double> lambda_grid, const ProfileOptions& options) {
  return build_profile(Method::faquad, path, grid, n_target, std::move(lambda_grid), options);
}

AdiabaticityProfile la_profile(const DeformationPath& path, const SpatialGrid& grid, std::size_t n_target,
                               std::vector<double> lambda_grid, const ProfileOptions& options) {
  return build_profile(Method::la, path, grid, n_target, std::move(lambda_grid), options);
}

AdiabaticityProfile design_profile(Method method, const DeformationPath& path, const SpatialGrid& grid,
                                   std::size_t n_target, const ProfileOptions& options) {
  if (!(path.A0 < path.Af)) throw InvalidArgument("profile: designed paths run from A0 up to Af > A0");
  return build_profile(method, path, grid, n_target, uniform_lambda_grid(path.A0, path.Af, options.nodes), options);
}

Schedule invert_profile(const AdiabaticityProfile& profile, const DeformationPath& path, double t_f) {
  if (!std::isfinite(t_f) || !(t_f > 0.0)) throw InvalidArgument("invert_profile: t_f must be positive");
  const std::size_t n = profile.lambda.size();
  if (n < 2 || profile.g.size() != n) throw InvalidArgument("invert_profile: malformed profile");
  for (std::size_t i = 0; i < n; ++i) check_g(profile.g[i], profile.lambda[i]);

  std::vector<double> cumulative(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    cumulative[i] =
        cumulative[i - 1] + 0.5 * (profile.g[i - 1] + profile.g[i]) * (profile.lambda[i] - profile.lambda[i - 1]);
  }
  const double total = cumulative.back();
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = t_f * (cumulative[i] / total);
  t.front() = 0.0;
  t.back() = t_f;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(t[i] < t[i + 1])) throw NumericalError("invert_profile: non-monotone t(lambda)");
  }
  return Schedule(path, t_f, std::move(t), profile.lambda, to_string(profile.method), total / t_f);
}

Schedule linear_schedule(const DeformationPath& path, double t_f, std::size_t n_samples) {
  if (n_samples < 2) throw InvalidArgument("linear_schedule: need at least two samples");
  if (!std::isfinite(t_f) || !(t_f > 0.0)) throw InvalidArgument("linear_schedule: t_f must be positive");
  std::vector<double> t(n_samples), A(n_samples);
  const double last = static_cast<double>(n_samples - 1);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double s = static_cast<double>(i) / last;
    t[i] = t_f * s;
    A[i] = path.A0 + (path.Af - path.A0) * s;
  }
  t.back() = t_f;
  A.back() = path.Af;
  return Schedule(path, t_f, std::move(t), std::move(A), "linear", std::nullopt);
}

void write_schedule(std::ostream& out, const Schedule& s) {
  const auto& p = s.path();
  out << std::setprecision(17);
  out << "# fockprep schedule v1\n";
  out << "# method = " << s.method() << "\n";
  out << "# t_f = " << s.t_f() << "\n";
  if (s.c()) out << "# c = " << *s.c() << "\n";
  out << "# A0 = " << p.A0 << "\n# Af = " << p.Af << "\n# B0 = " << p.B0 << "\n# kappa = " << p.kappa
      << "\n# eps = " << p.eps << "\n# C = " << p.C << "\n# n_target = " << p.n_target << "\n";
  const auto t = s.times();
  const auto a = s.alphas();
  for (std::size_t i = 0; i < t.size(); ++i) out << t[i] << " " << a[i] << "\n";
  if (!out) throw IoError("write_schedule: stream failure");
}

Schedule read_schedule(std::istream& in) {
  std::map<std::string, std::string> header;
  std::vector<double> t, a;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      auto trim = [](std::string v) {
        const auto b = v.find_first_not_of(" \t");
        const auto e = v.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : v.substr(b, e - b + 1);
      };
      header[trim(line.substr(1, eq - 1))] = trim(line.substr(eq + 1));
      continue;
    }
    std::istringstream row(line);
    double ti = 0.0, ai = 0.0;
    if (!(row >> ti >> ai)) throw IoError("read_schedule: malformed sample line '" + line + "'");
    t.push_back(ti);
    a.push_back(ai);
  }
  auto get = [&](const char* key) -> const std::string& {
    const auto it = header.find(key);
    if (it == header.end()) throw IoError(std::string("read_schedule: missing header key ") + key);
    return it->second;
  };
  DeformationPath p;
  p.A0 = std::stod(get("A0"));
  p.Af = std::stod(get("Af"));
  p.B0 = std::stod(get("B0"));
  p.kappa = std::stod(get("kappa"));
  p.eps = std::stod(get("eps"));
  p.C = std::stod(get("C"));
  p.n_target = std::stoi(get("n_target"));
  std::optional<double> c;
  if (header.count("c")) c = std::stod(header["c"]);
  return Schedule(p, std::stod(get("t_f")), std::move(t), std::move(a), get("method"), c);
}

}  // namespace fockprep
