#include "prodsys/cluster.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include <Eigen/Eigenvalues>

#include "prodsys/errors.hpp"
#include "prodsys/kernels.hpp"

namespace prodsys::cluster {

using kernels::ipow;
using linalg::ComplexMatrix;

// Eigenvalues of a sum of projectors at or below this count as zero.
constexpr double kSpectralCut = 1e-10;

namespace {

// F^-_n together with E_n - F^-_n. A vector is orthogonal to every piece
// (E_r - F1_r) (x) (E_{n-r} - F2_{n-r}) iff it lies in the kernel of the sum
// of their projectors, so one Hermitian eigensolve yields both subspaces.
struct Split {
  std::vector<Subspace> ominus;
  std::vector<Subspace> rest;
};

Split split_levels(std::size_t g, const std::function<Subspace(std::size_t)>& level1,
                   const std::function<Subspace(std::size_t)>& level2, std::size_t depth) {
  std::vector<ComplexMatrix> q1, q2;  // I - P_{F_r}, r = 1..depth-1
  for (std::size_t r = 1; r < depth; ++r) {
    const auto dim = static_cast<Eigen::Index>(ipow(g, r));
    q1.push_back(ComplexMatrix::Identity(dim, dim) - linalg::projector(level1(r)));
    q2.push_back(ComplexMatrix::Identity(dim, dim) - linalg::projector(level2(r)));
  }
  Split out;
  for (std::size_t n = 1; n <= depth; ++n) {
    const auto dim = static_cast<Eigen::Index>(ipow(g, n));
    if (n == 1) {
      out.ominus.push_back(Subspace::zero(g));
      out.rest.push_back(Subspace::full(g));
      continue;
    }
    ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
    for (std::size_t r = 1; r < n; ++r) sum += linalg::kron(q1[r - 1], q2[n - r - 1]);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sum);
    const auto& values = es.eigenvalues();
    Eigen::Index kernel = 0;
    while (kernel < values.size() && values(kernel) <= kSpectralCut) ++kernel;
    out.rest.push_back(Subspace::unchecked(es.eigenvectors().leftCols(kernel)));
    out.ominus.push_back(Subspace::unchecked(es.eigenvectors().rightCols(dim - kernel)));
  }
  return out;
}

Subsystem at_depth(const Subsystem& f, std::size_t depth) {
  if (depth == 0) throw RangeError("cluster depth must be positive");
  return f.depth() == depth ? f : f.with_depth(depth);
}

struct Worst {
  double defect = 0.0;
  std::string where;
  void update(double d, std::string w) {
    if (d >= defect) {
      defect = d;
      where = std::move(w);
    }
  }
};

CheckResult make_check(std::string name, const Worst& w, double tol) {
  return {std::move(name), w.defect < tol, w.defect, w.where};
}

std::string pair_label(std::size_t s, std::size_t t) {
  return "s=" + std::to_string(s) + ",t=" + std::to_string(t);
}

}  // namespace

std::vector<Subspace> ominus_levels(const Subsystem& f, std::size_t depth) {
  const Subsystem fd = at_depth(f, depth);
  const auto level = [&fd](std::size_t r) { return fd.level(r); };
  return split_levels(fd.slot_dim(), level, level, depth).ominus;
}

ClusterReport cluster_report(const Subsystem& f, std::size_t depth) {
  const Subsystem fd = at_depth(f, depth);
  const std::size_t g = fd.slot_dim();
  std::vector<Subspace> f_levels;
  for (std::size_t n = 1; n <= depth; ++n) f_levels.push_back(fd.level(n));
  const auto F = [&f_levels](std::size_t n) -> const Subspace& { return f_levels[n - 1]; };

  auto split = split_levels(g, F, F, depth);
  ClusterReport report{std::move(split.ominus), InclusionSystem(g, std::move(split.rest)), {}, {}, {}};
  for (std::size_t n = 1; n <= depth; ++n) {
    report.ominus_dims.push_back(report.ominus[n - 1].rank());
    report.inclusion_dims.push_back(report.inclusion.level(n).rank());
  }
  const auto C = [&report](std::size_t n) -> const Subspace& { return report.inclusion.level(n); };

  Worst contains_f;
  for (std::size_t n = 1; n <= depth; ++n) {
    contains_f.update(linalg::containment_defect(C(n), F(n)), "n=" + std::to_string(n));
  }
  report.checks.push_back(make_check("contains_input", contains_f, linalg::kContainTol));

  Worst compat;
  compat.update(report.inclusion.compatibility_defect(), "all levels");
  report.checks.push_back(make_check("inclusion_compatible", compat, linalg::kContainTol));

  Worst left, right, left_refined, right_refined;
  const bool can_refine = report.checks.front().pass;
  std::vector<Subspace> refined;  // F^-+_n (-) F_n
  if (can_refine) {
    for (std::size_t n = 1; n <= depth; ++n) refined.push_back(linalg::difference(C(n), F(n)));
  }
  for (std::size_t total = 2; total <= depth; ++total) {
    for (std::size_t s = 1; s < total; ++s) {
      const std::size_t t = total - s;
      const auto label = pair_label(s, t);
      left.update(linalg::containment_defect(C(total), linalg::tensor(C(s), F(t))), label);
      right.update(linalg::containment_defect(C(total), linalg::tensor(F(s), C(t))), label);
      if (can_refine) {
        const Subspace& target = refined[total - 1];
        left_refined.update(linalg::containment_defect(target, linalg::tensor(refined[s - 1], F(t))), label);
        right_refined.update(linalg::containment_defect(target, linalg::tensor(F(s), refined[t - 1])), label);
      }
    }
  }
  report.checks.push_back(make_check("cluster_tensor_input", left, linalg::kContainTol));
  report.checks.push_back(make_check("input_tensor_cluster", right, linalg::kContainTol));
  if (!can_refine) {
    left_refined = {1.0, "input not contained"};
    right_refined = {1.0, "input not contained"};
  }
  report.checks.push_back(make_check("refined_cluster_tensor_input", left_refined, linalg::kContainTol));
  report.checks.push_back(make_check("input_tensor_refined_cluster", right_refined, linalg::kContainTol));
  return report;
}

InclusionSystem cluster_inclusion(const Subsystem& f, std::size_t depth) {
  auto report = cluster_report(f, depth);
  for (const auto& c : report.checks) {
    if (!c.pass) {
      throw VerificationFailure("cluster check " + c.name + " failed at " + c.detail + " (defect " +
                                std::to_string(c.max_defect) + ")");
    }
  }
  return std::move(report.inclusion);
}

Subsystem cluster_system(const Subsystem& f, std::size_t depth) {
  return lattice::generate_product_system(cluster_inclusion(f, depth));
}

InclusionSystem pair_cluster(const InclusionSystem& f1, const InclusionSystem& f2,
                             std::size_t depth) {
  if (f1.slot_dim() != f2.slot_dim()) throw DimensionError("pair cluster inputs live over different slots");
  if (depth == 0 || depth > f1.depth() || depth > f2.depth()) {
    throw RangeError("pair cluster depth exceeds the input depth");
  }
  if (!f1.is_compatible()) throw InvalidInclusionSystem("first input is not inclusion compatible");
  if (!f2.is_compatible()) throw InvalidInclusionSystem("second input is not inclusion compatible");
  auto split = split_levels(f1.slot_dim(), [&f1](std::size_t r) { return f1.level(r); },
                            [&f2](std::size_t r) { return f2.level(r); }, depth);
  return InclusionSystem(f1.slot_dim(), std::move(split.rest));
}

std::vector<Subspace> x_spaces(const ComplexVector& u, std::size_t depth) {
  const auto inc = cluster_inclusion(Subsystem::unit_line(u, depth), depth);
  std::vector<Subspace> out;
  for (std::size_t n = 1; n <= depth; ++n) {
    out.push_back(linalg::difference(inc.level(n), Subspace::line(lattice::unit_section(u, n))));
  }
  return out;
}

Subspace x_space(const ComplexVector& u, std::size_t n) { return x_spaces(u, n).back(); }

CheckResult x_decomposition_check(const ComplexVector& u, std::size_t m, std::size_t n) {
  if (m == 0 || n == 0) throw RangeError("x decomposition needs positive levels");
  return x_decomposition_check(x_spaces(u, m + n), u, m, n);
}

CheckResult x_decomposition_check(const std::vector<Subspace>& xs, const ComplexVector& u, std::size_t m,
                                  std::size_t n) {
  if (m == 0 || n == 0 || m + n > xs.size()) throw RangeError("x decomposition levels outside the given X spaces");
  const Subspace left = linalg::tensor(xs[m - 1], Subspace::line(lattice::unit_section(u, n)));
  const Subspace right = linalg::tensor(Subspace::line(lattice::unit_section(u, m)), xs[n - 1]);
  const double overlap =
      left.is_zero() || right.is_zero() ? 0.0 : linalg::operator_norm(left.basis().adjoint() * right.basis());
  const double distance = linalg::projector_distance(xs[m + n - 1], linalg::join(left, right));
  const double defect = std::max(overlap, distance);
  return {"x_decomposition", defect < linalg::kSubspaceEqualTol, defect,
          "m=" + std::to_string(m) + ",n=" + std::to_string(n)};
}

CheckResult shift_orthogonality_check(const ComplexVector& u, std::size_t m, std::size_t depth) {
  if (m == 0 || m >= depth) throw RangeError("shift orthogonality needs 0 < m < depth");
  return shift_orthogonality_check(x_spaces(u, depth), u, m);
}

CheckResult shift_orthogonality_check(const std::vector<Subspace>& xs, const ComplexVector& u, std::size_t m) {
  const std::size_t depth = xs.size();
  if (m == 0 || m >= depth) throw RangeError("shift orthogonality needs 0 < m < depth");
  const linalg::ComplexMatrix um = lattice::unit_section(u, m);
  double worst = 0.0;
  std::string where = "none";
  for (std::size_t s = 1; m + s <= depth; ++s) {
    for (std::size_t p = 0; m + s + p <= depth; ++p) {
      const linalg::ComplexMatrix up = lattice::unit_section(u, p);
      const linalg::ComplexMatrix left = linalg::kron(linalg::kron(um, xs[s - 1].basis()), up);
      const linalg::ComplexMatrix right =
          linalg::kron(xs[m - 1].basis(), linalg::ComplexMatrix(lattice::unit_section(u, s + p)));
      if (left.cols() == 0 || right.cols() == 0) continue;
      const double d = (left.adjoint() * right).cwiseAbs().maxCoeff();
      if (d >= worst) {
        worst = d;
        where = "s=" + std::to_string(s) + ",p=" + std::to_string(p);
      }
    }
  }
  return {"shift_orthogonality", worst < 1e-12, worst, where};
}

}  // namespace prodsys::cluster
