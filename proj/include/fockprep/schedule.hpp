#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fockprep/interpolation.hpp"
#include "fockprep/model.hpp"
#include "fockprep/spectral.hpp"

namespace fockprep {

class SpatialGrid;

enum class Method { faquad, la, linear };

std::string to_string(Method m);
Method parse_method(const std::string& name);

/// Sampled time course A(t) on [0, t_f] together with the path that supplies
/// beta(A) and the constant bias. Immutable after construction.
class Schedule {
 public:
  Schedule(DeformationPath path, double t_f, std::vector<double> t, std::vector<double> A, std::string method,
           std::optional<double> c);

  const DeformationPath& path() const { return path_; }
  double t_f() const { return t_f_; }
  /// "faquad", "la", "linear", or "reversed(<base>)".
  const std::string& method() const { return method_; }
  /// Realized adiabaticity constant; absent for linear ramps.
  std::optional<double> c() const { return c_; }

  std::vector<double> times() const;
  std::vector<double> alphas() const;
  std::size_t size() const { return interp_.x().size(); }

  double alpha_at(double t) const;
  double rate_at(double t) const;
  PotentialParams params_at(double t) const { return path_.at(alpha_at(t)); }

  friend Schedule reverse(const Schedule& s);

 private:
  DeformationPath path_;
  double t_f_;
  std::string method_;
  std::optional<double> c_;
  MonotoneCubic interp_;
  bool reversed_ = false;  // evaluate the stored samples at t_f - t
};

/// Integrand g(lambda) of the adiabaticity condition on a lambda grid
/// ascending from A0 to Af.
struct AdiabaticityProfile {
  Method method = Method::faquad;
  std::size_t n_target = 0;
  std::vector<double> lambda;
  std::vector<double> g;

  /// Trapezoid integral of g over the grid.
  double integral() const;
};

struct ProfileOptions {
  std::size_t nodes = 1024;
  /// Bisect intervals whose midpoint g differs from the trapezoid average by
  /// more than refine_tol, so the realized discrete c stays constant.
  bool refine = true;
  double refine_tol = 0.005;
  int max_refine_levels = 14;
  /// Eigenstates kept per node; 0 means n_target + 3.
  std::size_t k = 0;
  std::size_t jobs = 1;
  EigensolveOptions eigen;
};

std::vector<double> uniform_lambda_grid(double from, double to, std::size_t nodes);

/// sum over neighbors m of |<n|dH/dlambda|m>| / (E_n - E_m)^2.
double faquad_integrand(const EigenSet& eig, const DeformationPath& path, const SpatialGrid& grid, std::size_t n);
/// sum over neighbors m of 1 / (E_n - E_m)^2.
double la_integrand(const EigenSet& eig, std::size_t n);

/// One eigensolve at `lambda` followed by the method's integrand.
double evaluate_integrand(Method method, const DeformationPath& path, const SpatialGrid& grid, std::size_t n,
                          double lambda, const ProfileOptions& options);

AdiabaticityProfile faquad_profile(const DeformationPath& path, const SpatialGrid& grid, std::size_t n_target,
                                   std::vector<double> lambda_grid, const ProfileOptions& options = {});
AdiabaticityProfile la_profile(const DeformationPath& path, const SpatialGrid& grid, std::size_t n_target,
                               std::vector<double> lambda_grid, const ProfileOptions& options = {});
/// Profile on the default uniform grid from path.A0 to path.Af.
AdiabaticityProfile design_profile(Method method, const DeformationPath& path, const SpatialGrid& grid,
                                   std::size_t n_target, const ProfileOptions& options = {});

/// Constant-c schedule: c = (integral of g) / t_f, t(lambda) = (1/c) * integral
/// of g from A0 to lambda.
Schedule invert_profile(const AdiabaticityProfile& profile, const DeformationPath& path, double t_f);

Schedule linear_schedule(const DeformationPath& path, double t_f, std::size_t n_samples = 1025);

/// Time-reversed schedule (t, A) -> (t_f - t, A). reverse(reverse(s)) reproduces s exactly.
Schedule reverse(const Schedule& s);

/// Plain-text form: "# key = value" header lines, then one "t A" pair per line
/// with 17 significant digits.
void write_schedule(std::ostream& out, const Schedule& s);
Schedule read_schedule(std::istream& in);

}  // namespace fockprep
