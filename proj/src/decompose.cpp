#include "ramanpcr/decompose.hpp"

#include <algorithm>
#include <string>

namespace ramanpcr {

namespace {

constexpr double kRankTolerance = 1e-12;

void finish(PcaModel& model, Index found, double total_ss) {
  model.loadings.conservativeResize(Eigen::NoChange, found);
  model.scores.conservativeResize(Eigen::NoChange, found);
  model.residual_path.conservativeResize(found + 1);
  model.explained_variance.resize(found);
  for (Index a = 0; a < found; ++a)
    model.explained_variance[a] = total_ss > 0.0 ? model.scores.col(a).squaredNorm() / total_ss : 0.0;
  model.residual_fro = model.residual_path[found];
}

}  // namespace

NoConvergenceError::NoConvergenceError(Index component, PcaModel partial)
    : Error(ErrorCode::NoConvergence, "component=" + std::to_string(component + 1)),
      component_(component),
      partial_(std::move(partial)) {}

PcaModel PcaModel::truncated(Index m) const {
  if (m < 1 || m > components())
    throw Error(ErrorCode::BadOrder, "cannot truncate a " + std::to_string(components()) +
                                         "-component model to " + std::to_string(m));
  PcaModel out;
  out.axis = axis;
  out.mean_spectrum = mean_spectrum;
  out.loadings = loadings.leftCols(m);
  out.scores = scores.leftCols(m);
  out.explained_variance = explained_variance.head(m);
  out.residual_path = residual_path.head(m + 1);
  out.residual_fro = residual_path[m];
  out.rank_deficient = rank_deficient && m == components();
  for (const Index a : unconverged)
    if (a < m) out.unconverged.push_back(a);
  return out;
}

PcaModel nipals_fit(const Eigen::MatrixXd& x, Index k, const NipalsOptions& options) {
  const Index i = x.rows();
  const Index j = x.cols();
  if (k < 1 || k > std::min(i - 1, j))
    throw Error(ErrorCode::BadOrder, "k=" + std::to_string(k) + " outside [1, min(i-1, j)] for a " +
                                         std::to_string(i) + "x" + std::to_string(j) + " matrix");
  if (!(options.tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "tol must be > 0");
  if (options.max_iter < 10) throw Error(ErrorCode::InvalidParameter, "max_iter must be >= 10");

  PcaModel model;
  model.mean_spectrum = x.colwise().mean().transpose();
  Eigen::MatrixXd residual = x.rowwise() - model.mean_spectrum.transpose();
  const double total = residual.norm();
  const double total_ss = total * total;
  model.loadings.resize(j, k);
  model.scores.resize(i, k);
  model.residual_path.resize(k + 1);
  model.residual_path[0] = total;

  Eigen::VectorXd t(i), t_next(i), p(j);
  for (Index a = 0; a < k; ++a) {
    if (!(model.residual_path[a] > kRankTolerance * total)) {
      model.rank_deficient = true;
      finish(model, a, total_ss);
      return model;
    }
    Index start = 0;
    residual.colwise().squaredNorm().maxCoeff(&start);
    t = residual.col(start);
    bool converged = false;
    for (int it = 0; it < options.max_iter; ++it) {
      p.noalias() = residual.transpose() * t;
      p.normalize();
      t_next.noalias() = residual * p;
      const double change = (t_next - t).norm() / t_next.norm();
      t.swap(t_next);
      if (change < options.tol) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      if (!options.accept_unconverged) {
        finish(model, a, total_ss);
        throw NoConvergenceError(a, std::move(model));
      }
      model.unconverged.push_back(a);
    }
    Index peak = 0;
    p.cwiseAbs().maxCoeff(&peak);
    if (p[peak] < 0.0) {
      p = -p;
      t = -t;
    }
    residual.noalias() -= t * p.transpose();
    model.loadings.col(a) = p;
    model.scores.col(a) = t;
    model.residual_path[a + 1] = residual.norm();
  }
  finish(model, k, total_ss);
  return model;
}

PcaModel nipals_fit(const SpectraSet& set, Index k, const NipalsOptions& options) {
  PcaModel model = nipals_fit(set.matrix(), k, options);
  model.axis = set.axis();
  return model;
}

Eigen::MatrixXd project(const PcaModel& model, const Eigen::MatrixXd& x) {
  if (x.cols() != model.mean_spectrum.size())
    throw Error(ErrorCode::AxisMismatch, "spectra have " + std::to_string(x.cols()) + " channels, model has " +
                                             std::to_string(model.mean_spectrum.size()));
  return (x.rowwise() - model.mean_spectrum.transpose()) * model.loadings;
}

Eigen::MatrixXd project(const PcaModel& model, const SpectraSet& set) {
  if (model.axis.size() > 0) require_same_axis(model.axis, set.axis());
  return project(model, set.matrix());
}

}  // namespace ramanpcr
