#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "pqfreq/energy.hpp"

namespace pqfreq {

enum class LinearBackend { cholesky, cg };

// Symmetric positive definite solves on a lower-triangle matrix. The
// Cholesky backend analyzes the pattern on the first compute() and only
// refactors numerically afterwards; the CG backend is Jacobi-preconditioned.
class SpdSolver {
 public:
  explicit SpdSolver(LinearBackend backend = LinearBackend::cholesky, double cg_tol = 1e-13);
  ~SpdSolver();
  SpdSolver(SpdSolver&&) noexcept;
  SpdSolver& operator=(SpdSolver&&) noexcept;

  // Returns false when the factorization fails (matrix not positive definite).
  bool compute(const SpMat& lower);
  Vec solve(const Vec& rhs) const;
  LinearBackend backend() const { return backend_; }
  int last_cg_iterations() const;

 private:
  struct Impl;
  LinearBackend backend_;
  double cg_tol_;
  std::unique_ptr<Impl> impl_;
};

// y = A x for a symmetric matrix stored as its lower triangle.
Vec sym_multiply(const SpMat& lower, const Vec& x);

struct EigenOptions {
  double tol = 1e-11;       // relative eigenvalue change
  int max_iter = 2000;
  // Applied to every trial vector, e.g. to remove constants.
  std::function<void(Vec&)> project;
};

struct EigenResult {
  double value = 0.0;
  Vec vector;  // M-normalized
  int iterations = 0;
  double residual = 0.0;  // last relative eigenvalue change
  bool converged = false;
};

// Smallest eigenpair of K x = lambda M x (M diagonal, given by `mass`) by
// locally optimal preconditioned iteration: each step minimizes the Rayleigh
// quotient over span{x, T r, previous direction} with T an SPD solve.
EigenResult smallest_eigenpair(const SpMat& K_lower, const std::vector<double>& mass, Vec x0,
                               const SpdSolver& preconditioner, const EigenOptions& options);

}  // namespace pqfreq
