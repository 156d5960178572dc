#include "ccsolid/iga.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#ifdef CCSOLID_HAVE_CHOLMOD
#include <Eigen/CholmodSupport>
#endif

#include "ccsolid/quadrature.hpp"

namespace ccsolid {

namespace {

// Physical basis gradients at the quadrature points of a sub-cube, each
// column scaled by sqrt(weight * det J) so stiffness blocks become G_p G_q^T.
struct ScaledGradients {
  std::array<Eigen::MatrixXd, 3> g;
};

template <class Visit>
void for_each_point(const BezierVolume& vol, const SubCell& sub, int quad_order, Visit&& visit) {
  if (sub.level < 0) throw Error("sub-cell level must be non-negative");
  const int n = 1 << sub.level;
  for (int t = 0; t < 3; ++t) {
    if (sub.index[t] < 0 || sub.index[t] >= n) throw Error("sub-cell index out of range");
  }
  const QuadratureRule rule = gauss_legendre(quad_order);
  const double h = 1.0 / n;
  const double scale = h * h * h;
  int q = 0;
  for (int a = 0; a < quad_order; ++a) {
    for (int b = 0; b < quad_order; ++b) {
      for (int c = 0; c < quad_order; ++c, ++q) {
        const double u = (sub.index[0] + rule.points[a]) * h;
        const double v = (sub.index[1] + rule.points[b]) * h;
        const double w = (sub.index[2] + rule.points[c]) * h;
        const TrivariateBasis basis = trivariate_basis(u, v, w);
        Mat3 J = Mat3::Zero();
        for (int i = 0; i < 64; ++i) J += vol.points[i] * basis.gradient[i].transpose();
        const double det = J.determinant();
        if (!(det > 0.0)) {
          throw Error("non-positive Jacobian determinant " + std::to_string(det) + " at parameter (" +
                      std::to_string(u) + ", " + std::to_string(v) + ", " + std::to_string(w) + ")");
        }
        const Mat3 Jinv_t = J.inverse().transpose();
        visit(q, basis, Jinv_t, rule.weights[a] * rule.weights[b] * rule.weights[c] * scale * det);
      }
    }
  }
}

ScaledGradients scaled_gradients(const BezierVolume& vol, const SubCell& sub, int quad_order) {
  const int nq = quad_order * quad_order * quad_order;
  ScaledGradients out;
  for (auto& g : out.g) g.resize(64, nq);
  for_each_point(vol, sub, quad_order, [&](int q, const TrivariateBasis& basis, const Mat3& Jinv_t, double weight) {
    const double s = std::sqrt(weight);
    for (int i = 0; i < 64; ++i) {
      const Vec3 grad = Jinv_t * basis.gradient[i];
      for (int p = 0; p < 3; ++p) out.g[p](i, q) = s * grad[p];
    }
  });
  return out;
}

Eigen::MatrixXd heat_from(const ScaledGradients& sg) {
  Eigen::MatrixXd K = sg.g[0] * sg.g[0].transpose();
  K.noalias() += sg.g[1] * sg.g[1].transpose();
  K.noalias() += sg.g[2] * sg.g[2].transpose();
  return K;
}

Eigen::MatrixXd elastic_from(const ScaledGradients& sg, const Material& mat) {
  // M_pq(a, b) = integral of dN_a/dx_p dN_b/dx_q.
  std::array<std::array<Eigen::MatrixXd, 3>, 3> M;
  for (int p = 0; p < 3; ++p) {
    for (int q = p; q < 3; ++q) M[p][q] = sg.g[p] * sg.g[q].transpose();
    for (int q = 0; q < p; ++q) M[p][q] = M[q][p].transpose();
  }
  const Eigen::MatrixXd trace = M[0][0] + M[1][1] + M[2][2];
  const double lambda = mat.lambda(), mu = mat.mu();
  Eigen::MatrixXd K(192, 192);
  for (int p = 0; p < 3; ++p) {
    for (int q = 0; q < 3; ++q) {
      Eigen::MatrixXd block = lambda * M[p][q] + mu * M[q][p];
      if (p == q) block += mu * trace;
      for (int a = 0; a < 64; ++a) {
        for (int b = 0; b < 64; ++b) K(3 * a + p, 3 * b + q) = block(a, b);
      }
    }
  }
  return K;
}

}  // namespace

double Material::modulus_factor(double rho) const { return mu_min + (1.0 - mu_min) * std::pow(rho, p); }

void Material::validate() const {
  if (!(E0 > 0.0)) throw Error("E0 must be positive");
  if (!(nu >= 0.0 && nu < 0.5)) throw Error("Poisson ratio must lie in [0, 0.5)");
  if (!(p >= 1.0)) throw Error("penalization exponent must be at least 1");
  if (!(mu_min > 0.0 && mu_min < 1.0)) throw Error("mu_min must lie in (0, 1)");
}

Eigen::MatrixXd element_stiffness_heat(const BezierVolume& vol, int quad_order) {
  return subelement_stiffness(vol, SubCell{}, Problem::Heat, Material{}, quad_order);
}

Eigen::MatrixXd element_stiffness_elastic(const BezierVolume& vol, const Material& mat, int quad_order) {
  return subelement_stiffness(vol, SubCell{}, Problem::Elasticity, mat, quad_order);
}

Eigen::MatrixXd subelement_stiffness(const BezierVolume& vol, const SubCell& sub, Problem problem, const Material& mat,
                                     int quad_order) {
  if (problem == Problem::Elasticity) mat.validate();
  const ScaledGradients sg = scaled_gradients(vol, sub, quad_order);
  return problem == Problem::Heat ? heat_from(sg) : elastic_from(sg, mat);
}

double subcell_volume(const BezierVolume& vol, const SubCell& sub, int quad_order) {
  double volume = 0.0;
  for_each_point(vol, sub, quad_order, [&](int, const TrivariateBasis&, const Mat3&, double w) { volume += w; });
  return volume;
}

Eigen::VectorXd element_source(const BezierVolume& vol, int quad_order) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(64);
  for_each_point(vol, SubCell{}, quad_order, [&](int, const TrivariateBasis& basis, const Mat3&, double w) {
    for (int i = 0; i < 64; ++i) f(i) += w * basis.value[i];
  });
  return f;
}

bool Box::contains(const Vec3& p) const {
  return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
}

// ---------------------------------------------------------------------------

struct Analysis::DirectSolver {
  using Matrix = Eigen::SparseMatrix<double>;
#ifdef CCSOLID_HAVE_CHOLMOD
  Eigen::CholmodSupernodalLLT<Matrix, Eigen::Lower> factor;
#else
  Eigen::SimplicialLDLT<Matrix, Eigen::Lower> factor;
#endif
  bool analyzed = false;
};

Analysis::Analysis(const SplineModel& model, Problem problem, const Material& mat, const BoundaryConditions& bcs,
                   int density_level, SolverOptions options)
    : model_(&model),
      problem_(problem),
      mat_(mat),
      level_(density_level),
      options_(options),
      ncomp_(components(problem)) {
  mat_.validate();
  if (level_ < 0 || level_ > 4) throw Error("density level must lie in [0, 4]");
  const auto nc = static_cast<Index>(model.num_cells());
  const auto np = static_cast<Index>(model.control_points.size());
  const Index ndof = np * ncomp_;
  const Index nl = 64 * ncomp_;

  // With density sub-cubes the whole-cell matrix is the sum of its sub-cube
  // matrices, so K_full - K_i stays positive semidefinite on curved cells.
  patches_.reserve(nc);
  full_.resize(nc);
  for (Index c = 0; c < nc; ++c) {
    patches_.push_back(model.patch(c));
    try {
      full_[c] = unit_subelement(c, 0);
      for (int i = 1; i < (1 << (3 * level_)); ++i) full_[c] += unit_subelement(c, i);
    } catch (const Error& e) {
      throw Error("cell " + std::to_string(c) + ": " + e.what());
    }
  }
  element_.resize(nc);

  // Constraints.
  std::vector<char> fixed(ndof, 0);
  prescribed_ = Eigen::VectorXd::Zero(ndof);
  std::array<bool, 3> constrained{false, false, false};
  for (const auto& d : bcs.dirichlet) {
    for (Index i = 0; i < np; ++i) {
      const Vec3& x = model.control_points[i];
      if (!d.box.contains(x)) continue;
      for (int p = 0; p < ncomp_; ++p) {
        if (!d.components[p]) continue;
        fixed[i * ncomp_ + p] = 1;
        prescribed_(i * ncomp_ + p) = d.field ? d.field(x, p) : d.value;
        constrained[p] = true;
      }
    }
  }
  for (int p = 0; p < ncomp_; ++p) {
    if (!constrained[p]) {
      throw Error("insufficient Dirichlet constraints: component " + std::to_string(p) +
                  " is unconstrained and the system is singular");
    }
  }
  free_index_.assign(ndof, -1);
  for (Index i = 0; i < ndof; ++i) {
    if (!fixed[i]) free_index_[i] = num_free_++;
  }

  // Loads.
  load_ = Eigen::VectorXd::Zero(ndof);
  for (const auto& l : bcs.loads) {
    for (Index i = 0; i < np; ++i) {
      if (!l.box.contains(model.control_points[i])) continue;
      for (int p = 0; p < ncomp_; ++p) load_(i * ncomp_ + p) += l.vector[p];
    }
  }
  if (problem_ == Problem::Heat && bcs.heat_source != 0.0) {
    for (Index c = 0; c < nc; ++c) {
      const Eigen::VectorXd fe = element_source(patches_[c], options_.quad_order);
      for (int a = 0; a < 64; ++a) load_(model.cells[c][a]) += bcs.heat_source * fe(a);
    }
  }

  // Sparsity over free dofs, built from point adjacency.
  std::vector<std::vector<Index>> point_adj(np);
  for (Index c = 0; c < nc; ++c) {
    for (Index a : model.cells[c]) {
      for (Index b : model.cells[c]) point_adj[a].push_back(b);
    }
  }
  for (auto& row : point_adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  Eigen::VectorXi row_nnz = Eigen::VectorXi::Zero(num_free_);
  for (Index i = 0; i < np; ++i) {
    for (int p = 0; p < ncomp_; ++p) {
      const Index r = free_index_[i * ncomp_ + p];
      if (r < 0) continue;
      for (Index j : point_adj[i]) {
        for (int q = 0; q < ncomp_; ++q) row_nnz(r) += free_index_[j * ncomp_ + q] >= 0;
      }
    }
  }
  K_.resize(num_free_, num_free_);
  K_.reserve(row_nnz);
  for (Index i = 0; i < np; ++i) {
    for (int p = 0; p < ncomp_; ++p) {
      const Index r = free_index_[i * ncomp_ + p];
      if (r < 0) continue;
      for (Index j : point_adj[i]) {
        for (int q = 0; q < ncomp_; ++q) {
          const Index col = free_index_[j * ncomp_ + q];
          if (col >= 0) K_.insert(r, col) = 0.0;
        }
      }
    }
  }
  K_.makeCompressed();
  point_adj.clear();

  const int* outer = K_.outerIndexPtr();
  const int* inner = K_.innerIndexPtr();
  scatter_.resize(nc);
  for (Index c = 0; c < nc; ++c) {
    auto& slots = scatter_[c];
    slots.assign(static_cast<std::size_t>(nl) * nl, -1);
    for (int a = 0; a < nl; ++a) {
      const Index r = free_index_[model.cells[c][a / ncomp_] * ncomp_ + a % ncomp_];
      if (r < 0) continue;
      for (int b = 0; b < nl; ++b) {
        const Index col = free_index_[model.cells[c][b / ncomp_] * ncomp_ + b % ncomp_];
        if (col < 0) continue;
        const int* pos = std::lower_bound(inner + outer[r], inner + outer[r + 1], col);
        slots[static_cast<std::size_t>(a) * nl + b] = static_cast<Index>(pos - inner);
      }
    }
  }
  solution_.problem = problem_;
}

Eigen::MatrixXd Analysis::unit_subelement(Index c, int sub) const {
  const int n = 1 << level_;
  const SubCell cell{level_, {sub / (n * n), (sub / n) % n, sub % n}};
  Eigen::MatrixXd K = subelement_stiffness(patches_[c], cell, problem_, mat_, options_.quad_order);
  if (problem_ == Problem::Heat) K *= mat_.E0;
  return K;
}

void Analysis::update_elements(std::span<const double> rho) {
  const std::size_t per_cell = std::size_t{1} << (3 * level_);
  if (rho.size() != model_->num_cells() * per_cell) {
    throw Error("density vector has " + std::to_string(rho.size()) + " entries, expected " +
                std::to_string(model_->num_cells() * per_cell));
  }
  const double full_factor = mat_.modulus_factor(1.0);
  for (Index c = 0; c < static_cast<Index>(model_->num_cells()); ++c) {
    const std::size_t base = c * per_cell;
    if (have_rho_ && std::equal(rho.begin() + base, rho.begin() + base + per_cell, rho_.begin() + base)) continue;
    if (std::all_of(rho.begin() + base, rho.begin() + base + per_cell, [&](double r) { return r == rho[base]; })) {
      element_[c] = mat_.modulus_factor(rho[base]) * full_[c];
      continue;
    }
    element_[c] = full_factor * full_[c];
    for (std::size_t i = 0; i < per_cell; ++i) {
      if (rho[base + i] == 1.0) continue;
      element_[c] += (mat_.modulus_factor(rho[base + i]) - full_factor) * unit_subelement(c, static_cast<int>(i));
    }
  }
  rho_.assign(rho.begin(), rho.end());
  have_rho_ = true;
}

void Analysis::assemble() {
  const Index nl = 64 * ncomp_;
  double* values = K_.valuePtr();
  std::fill(values, values + K_.nonZeros(), 0.0);
  rhs_ = Eigen::VectorXd::Zero(num_free_);
  for (Index i = 0; i < static_cast<Index>(free_index_.size()); ++i) {
    if (free_index_[i] >= 0) rhs_(free_index_[i]) = load_(i);
  }
  for (Index c = 0; c < static_cast<Index>(model_->num_cells()); ++c) {
    const Eigen::MatrixXd& Ke = element_[c];
    const auto& slots = scatter_[c];
    const auto& pts = model_->cells[c];
    for (int a = 0; a < nl; ++a) {
      const Index r = free_index_[pts[a / ncomp_] * ncomp_ + a % ncomp_];
      if (r < 0) continue;
      for (int b = 0; b < nl; ++b) {
        const Index slot = slots[static_cast<std::size_t>(a) * nl + b];
        if (slot >= 0) {
          values[slot] += Ke(a, b);
        } else {
          const Index g = pts[b / ncomp_] * ncomp_ + b % ncomp_;
          rhs_(r) -= Ke(a, b) * prescribed_(g);
        }
      }
    }
  }
}

const Solution& Analysis::solve(std::span<const double> rho) {
  update_elements(rho);
  assemble();

  Eigen::VectorXd x(num_free_);
  if (options_.method == SolverOptions::Method::Cholesky) {
    // K_ is symmetric, so its row-major arrays read as a column-major matrix.
    const Eigen::Map<const DirectSolver::Matrix> K(num_free_, num_free_, K_.nonZeros(), K_.outerIndexPtr(),
                                                   K_.innerIndexPtr(), K_.valuePtr());
    if (!direct_) direct_ = std::make_shared<DirectSolver>();
    if (!direct_->analyzed) {
      direct_->factor.analyzePattern(K);
      direct_->analyzed = true;
    }
    direct_->factor.factorize(K);
    if (direct_->factor.info() != Eigen::Success) throw Error("stiffness matrix is singular or indefinite");
    x = direct_->factor.solve(rhs_);
    solution_.iterations = 0;
    const double bnorm = rhs_.norm();
    solution_.residual = bnorm > 0 ? (K_ * x - rhs_).norm() / bnorm : 0.0;
  } else if (options_.method == SolverOptions::Method::Dense) {
    const Eigen::MatrixXd dense(K_);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(dense);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) throw Error("stiffness matrix is singular");
    x = ldlt.solve(rhs_);
    solution_.iterations = 0;
    const double bnorm = rhs_.norm();
    solution_.residual = bnorm > 0 ? (K_ * x - rhs_).norm() / bnorm : 0.0;
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double, Eigen::RowMajor>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(options_.tolerance);
    cg.setMaxIterations(options_.max_iterations > 0 ? options_.max_iterations : 50 * std::max<Index>(num_free_, 1));
    cg.compute(K_);
    Eigen::VectorXd guess = Eigen::VectorXd::Zero(num_free_);
    if (solution_.U.size() == static_cast<Eigen::Index>(free_index_.size())) {
      for (Index i = 0; i < static_cast<Index>(free_index_.size()); ++i) {
        if (free_index_[i] >= 0) guess(free_index_[i]) = solution_.U(i);
      }
    }
    x = cg.solveWithGuess(rhs_, guess);
    if (cg.info() != Eigen::Success) {
      throw Error("conjugate gradients did not converge: residual " + std::to_string(cg.error()) + " after " +
                  std::to_string(cg.iterations()) + " iterations");
    }
    solution_.iterations = static_cast<int>(cg.iterations());
    solution_.residual = cg.error();
  }

  solution_.U = prescribed_;
  for (Index i = 0; i < static_cast<Index>(free_index_.size()); ++i) {
    if (free_index_[i] >= 0) solution_.U(i) = x(free_index_[i]);
  }
  double energy = 0.0;
  Eigen::VectorXd ue(64 * ncomp_);
  for (Index c = 0; c < static_cast<Index>(model_->num_cells()); ++c) {
    const auto& pts = model_->cells[c];
    for (int a = 0; a < 64 * ncomp_; ++a) ue(a) = solution_.U(pts[a / ncomp_] * ncomp_ + a % ncomp_);
    energy += ue.dot(element_[c] * ue);
  }
  solution_.compliance = 0.5 * energy;
  solution_.revision = ++revision_;
  return solution_;
}

std::vector<double> Analysis::subelement_energies(const Solution& sol) const {
  if (sol.revision == 0 || sol.revision != revision_) throw Error("stale solution: densities changed since the solve");
  const int n = 1 << level_;
  const int per_cell = n * n * n;
  const double lambda = mat_.lambda(), mu = mat_.mu();
  std::vector<double> out(model_->num_cells() * per_cell, 0.0);
  for (Index c = 0; c < static_cast<Index>(model_->num_cells()); ++c) {
    const auto& pts = model_->cells[c];
    for (int s = 0; s < per_cell; ++s) {
      const SubCell sub{level_, {s / (n * n), (s / n) % n, s % n}};
      double energy = 0.0;
      for_each_point(patches_[c], sub, options_.quad_order,
                     [&](int, const TrivariateBasis& basis, const Mat3& Jinv_t, double w) {
                       if (problem_ == Problem::Heat) {
                         Vec3 grad = Vec3::Zero();
                         for (int i = 0; i < 64; ++i) grad += sol.U(pts[i]) * basis.gradient[i];
                         grad = Jinv_t * grad;
                         energy += w * mat_.E0 * grad.squaredNorm();
                       } else {
                         Mat3 H = Mat3::Zero();  // H(p, q) = du_p / dx_q
                         for (int i = 0; i < 64; ++i) {
                           const Vec3 g = Jinv_t * basis.gradient[i];
                           const Vec3 u(sol.U(3 * pts[i]), sol.U(3 * pts[i] + 1), sol.U(3 * pts[i] + 2));
                           H += u * g.transpose();
                         }
                         const Mat3 eps = 0.5 * (H + H.transpose());
                         const double tr = eps.trace();
                         energy += w * (lambda * tr * tr + 2.0 * mu * eps.squaredNorm());
                       }
                     });
      out[static_cast<std::size_t>(c) * per_cell + s] = energy;
    }
  }
  return out;
}

Eigen::SparseMatrix<double> Analysis::global_matrix() const {
  std::vector<Eigen::Triplet<double>> triplets;
  const int nl = 64 * ncomp_;
  for (Index c = 0; c < static_cast<Index>(model_->num_cells()); ++c) {
    if (element_[c].size() == 0) throw Error("global_matrix requires a prior solve");
    const auto& pts = model_->cells[c];
    for (int a = 0; a < nl; ++a) {
      for (int b = 0; b < nl; ++b) {
        triplets.emplace_back(pts[a / ncomp_] * ncomp_ + a % ncomp_, pts[b / ncomp_] * ncomp_ + b % ncomp_,
                              element_[c](a, b));
      }
    }
  }
  Eigen::SparseMatrix<double> K(free_index_.size(), free_index_.size());
  K.setFromTriplets(triplets.begin(), triplets.end());
  return K;
}

Solution assemble_and_solve(const SplineModel& model, std::span<const double> rho, int density_level,
                            const Material& mat, const BoundaryConditions& bcs, Problem problem,
                            SolverOptions options) {
  Analysis analysis(model, problem, mat, bcs, density_level, options);
  return analysis.solve(rho);
}

}  // namespace ccsolid
