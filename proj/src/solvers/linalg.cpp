#include <cmath>

#include <Eigen/CholmodSupport>
#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>

#include "pqfreq/linalg.hpp"

namespace pqfreq {

struct SpdSolver::Impl {
  Eigen::CholmodDecomposition<SpMat, Eigen::Lower> chol;
  Eigen::ConjugateGradient<SpMat, Eigen::Lower, Eigen::DiagonalPreconditioner<double>> cg;
  bool analyzed = false;
  bool ok = false;
  Eigen::Index n = -1;
};

SpdSolver::SpdSolver(LinearBackend backend, double cg_tol)
    : backend_(backend), cg_tol_(cg_tol), impl_(std::make_unique<Impl>()) {
  // Simplicial mode stays off BLAS; supernodal LLt trips on some OpenBLAS AVX-512 kernels.
  impl_->chol.setMode(Eigen::CholmodSimplicialLLt);
}

SpdSolver::~SpdSolver() = default;
SpdSolver::SpdSolver(SpdSolver&&) noexcept = default;
SpdSolver& SpdSolver::operator=(SpdSolver&&) noexcept = default;

bool SpdSolver::compute(const SpMat& lower) {
  if (backend_ == LinearBackend::cholesky) {
    if (!impl_->analyzed || impl_->n != lower.rows()) {
      impl_->chol.analyzePattern(lower);
      impl_->analyzed = true;
      impl_->n = lower.rows();
    }
    impl_->chol.factorize(lower);
    impl_->ok = impl_->chol.info() == Eigen::Success;
  } else {
    impl_->cg.setTolerance(cg_tol_);
    impl_->cg.setMaxIterations(std::max<Eigen::Index>(1000, 20 * lower.rows()));
    impl_->cg.compute(lower);
    impl_->ok = impl_->cg.info() == Eigen::Success;
  }
  return impl_->ok;
}

Vec SpdSolver::solve(const Vec& rhs) const {
  if (!impl_->ok) throw std::runtime_error("SpdSolver: no valid factorization");
  if (backend_ == LinearBackend::cholesky) return impl_->chol.solve(rhs);
  return impl_->cg.solve(rhs);
}

int SpdSolver::last_cg_iterations() const {
  return backend_ == LinearBackend::cg ? static_cast<int>(impl_->cg.iterations()) : 0;
}

Vec sym_multiply(const SpMat& lower, const Vec& x) {
  Vec y = lower.selfadjointView<Eigen::Lower>() * x;
  return y;
}

namespace {

double mdot(const Vec& a, const Vec& b, const Vec& m) { return (a.array() * b.array() * m.array()).sum(); }

}  // namespace

EigenResult smallest_eigenpair(const SpMat& K, const std::vector<double>& mass, Vec x,
                               const SpdSolver& T, const EigenOptions& opt) {
  const Eigen::Index n = K.rows();
  Vec m = Eigen::Map<const Vec>(mass.data(), n);
  auto project = [&](Vec& v) {
    if (opt.project) opt.project(v);
  };
  project(x);
  x /= std::sqrt(mdot(x, x, m));
  Vec Kx = sym_multiply(K, x);
  double lambda = x.dot(Kx);

  EigenResult out;
  Vec p, Kp;
  int stalls = 0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    Vec r = Kx - lambda * (m.array() * x.array()).matrix();
    Vec w = T.solve(r);
    project(w);

    // M-orthonormal basis of span{x, w, p}
    std::vector<Vec> basis{x};
    std::vector<Vec> kbasis{Kx};
    auto absorb = [&](Vec v) {
      double n0 = std::sqrt(std::max(mdot(v, v, m), 0.0));
      if (!(n0 > 0.0)) return;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) v -= mdot(v, b, m) * b;
      double n1 = std::sqrt(std::max(mdot(v, v, m), 0.0));
      if (!(n1 > 1e-10 * n0)) return;
      v /= n1;
      kbasis.push_back(sym_multiply(K, v));
      basis.push_back(std::move(v));
    };
    absorb(w);
    if (p.size() == n) absorb(p);

    const int k = static_cast<int>(basis.size());
    Eigen::MatrixXd A(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b <= a; ++b) A(a, b) = A(b, a) = basis[a].dot(kbasis[b]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    Eigen::VectorXd y = es.eigenvectors().col(0);
    double theta = es.eigenvalues()[0];

    Vec xn = y[0] * basis[0];
    Vec Kxn = y[0] * kbasis[0];
    Vec pn = Vec::Zero(n), Kpn = Vec::Zero(n);
    for (int a = 1; a < k; ++a) {
      pn += y[a] * basis[a];
      Kpn += y[a] * kbasis[a];
    }
    xn += pn;
    Kxn += Kpn;
    double nx = std::sqrt(mdot(xn, xn, m));
    x = xn / nx;
    Kx = Kxn / nx;
    p = pn;
    Kp = Kpn;

    double change = std::abs(lambda - theta) / std::abs(theta);
    lambda = theta;
    out.iterations = it;
    out.residual = change;
    stalls = change < opt.tol ? stalls + 1 : 0;
    if (stalls >= 2 || k == 1) {
      out.converged = true;
      break;
    }
  }
  // Sign convention: positive mass-weighted sum when possible.
  if ((m.array() * x.array()).sum() < 0.0) x = -x;
  out.value = lambda;
  out.vector = std::move(x);
  return out;
}

}  // namespace pqfreq
