#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/LevenbergMarquardt>
#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "qsocket/analysis.hpp"

namespace qsocket {

namespace {

// Parameters and frequencies are shifted by `center` and divided by `scale`
// so that both unknowns are O(1) for the solver.
struct BranchModel : Eigen::DenseFunctor<double> {
  BranchModel(const AnticrossingData& data, double center, double scale)
      : Eigen::DenseFunctor<double>(2, static_cast<int>(2 * data.points.size())) {
    for (const auto& p : data.points) {
      u.push_back((p.f_r - center) / scale);
      lower.push_back((p.lower - center) / scale);
      upper.push_back((p.upper - center) / scale);
      w_lower.push_back(p.sigma_lower ? scale / *p.sigma_lower : 1.0);
      w_upper.push_back(p.sigma_upper ? scale / *p.sigma_upper : 1.0);
    }
  }

  int operator()(const InputType& x, ValueType& f) const {
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double delta = x[1] - u[i];
      const double r = std::sqrt(x[0] * x[0] + delta * delta);
      const double mid = 0.5 * (x[1] + u[i]);
      f[static_cast<Eigen::Index>(2 * i)] = w_lower[i] * (mid - 0.5 * r - lower[i]);
      f[static_cast<Eigen::Index>(2 * i + 1)] = w_upper[i] * (mid + 0.5 * r - upper[i]);
    }
    return 0;
  }

  int df(const InputType& x, JacobianType& j) const {
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double delta = x[1] - u[i];
      const double r = std::max(std::sqrt(x[0] * x[0] + delta * delta), 1e-300);
      const auto a = static_cast<Eigen::Index>(2 * i);
      j(a, 0) = -w_lower[i] * 0.5 * x[0] / r;
      j(a, 1) = w_lower[i] * (0.5 - 0.5 * delta / r);
      j(a + 1, 0) = w_upper[i] * 0.5 * x[0] / r;
      j(a + 1, 1) = w_upper[i] * (0.5 + 0.5 * delta / r);
    }
    return 0;
  }

  std::vector<double> u, lower, upper, w_lower, w_upper;
};

bool converged(Eigen::LevenbergMarquardtSpace::Status s) {
  using namespace Eigen::LevenbergMarquardtSpace;
  switch (s) {
    case RelativeReductionTooSmall:
    case RelativeErrorTooSmall:
    case RelativeErrorAndReductionTooSmall:
    case CosinusTooSmall:
    case FtolTooSmall:
    case XtolTooSmall:
    case GtolTooSmall:
      return true;
    default:
      return false;
  }
}

}  // namespace

void AnticrossingData::validate() const {
  if (points.size() < 4) {
    throw InvalidInput(fmt::format("insufficient data: {} points, need at least 4", points.size()));
  }
  const bool weighted = points.front().sigma_lower.has_value();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!std::isfinite(p.f_r) || !std::isfinite(p.lower) || !std::isfinite(p.upper)) {
      throw InvalidInput(fmt::format("point {} is not finite", i));
    }
    if (!(p.lower < p.upper)) {
      throw InvalidInput(fmt::format("point {}: lower branch must lie below the upper branch", i));
    }
    if (p.sigma_lower.has_value() != weighted || p.sigma_upper.has_value() != weighted) {
      throw InvalidInput("uncertainties must be given for every point or for none");
    }
    if (weighted && !(*p.sigma_lower > 0.0 && *p.sigma_upper > 0.0)) {
      throw InvalidInput(fmt::format("point {}: uncertainties must be positive", i));
    }
  }
  const auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                            [](const auto& a, const auto& b) { return a.f_r < b.f_r; });
  if (lo->f_r == hi->f_r) throw InvalidInput("degenerate data: all f_R values are equal");
}

AnticrossingFit fit_anticrossing(const AnticrossingData& data) {
  data.validate();
  const auto& pts = data.points;

  // Start from the narrowest splitting: there Δ ≈ 0, so f_c ≈ f_R and g ≈ splitting.
  const auto narrowest = std::min_element(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.upper - a.lower < b.upper - b.lower;
  });
  const auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(),
                                            [](const auto& a, const auto& b) { return a.f_r < b.f_r; });
  const double center = narrowest->f_r;
  const double scale = std::max(hi->f_r - lo->f_r, narrowest->upper - narrowest->lower);

  BranchModel model(data, center, scale);
  Eigen::VectorXd x(2);
  x << (narrowest->upper - narrowest->lower) / scale, 0.0;

  Eigen::LevenbergMarquardt<BranchModel> lm(model);
  lm.setMaxfev(2000);
  lm.setXtol(1e-14);
  lm.setFtol(1e-14);
  const auto status = lm.minimize(x);
  if (!converged(status) || !x.allFinite()) {
    throw ConvergenceError(fmt::format("anticrossing fit did not converge (status {})",
                                       static_cast<int>(status)),
                           lm.fnorm());
  }

  Eigen::VectorXd residual(model.values());
  model(x, residual);
  Eigen::MatrixXd jac(model.values(), 2);
  model.df(x, jac);

  AnticrossingFit fit;
  fit.coupling_g = std::abs(x[0]) * scale;
  fit.cavity_frequency = center + x[1] * scale;
  fit.iterations = static_cast<int>(lm.iterations());
  fit.degrees_of_freedom = static_cast<std::size_t>(model.values()) - 2;

  const double ssr = residual.squaredNorm();
  const double variance = ssr / static_cast<double>(fit.degrees_of_freedom);
  const Eigen::Matrix2d normal = jac.transpose() * jac;
  Eigen::FullPivLU<Eigen::Matrix2d> lu(normal);
  if (!lu.isInvertible()) {
    throw ConvergenceError("anticrossing fit is singular at the optimum", std::sqrt(ssr));
  }
  const Eigen::Matrix2d cov = variance * lu.inverse();
  const boost::math::students_t t_dist(static_cast<double>(fit.degrees_of_freedom));
  const double t = boost::math::quantile(boost::math::complement(t_dist, 0.025));
  fit.coupling_g_ci = t * std::sqrt(std::max(cov(0, 0), 0.0)) * scale;
  fit.cavity_frequency_ci = t * std::sqrt(std::max(cov(1, 1), 0.0)) * scale;

  // Unweighted residual in Hz, for reporting.
  double sum = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto pair = dressed_frequencies(fit.cavity_frequency, fit.coupling_g,
                                          fit.cavity_frequency - pts[i].f_r);
    sum += (pair.lower - pts[i].lower) * (pair.lower - pts[i].lower) +
           (pair.upper - pts[i].upper) * (pair.upper - pts[i].upper);
  }
  fit.rms_residual = std::sqrt(sum / static_cast<double>(2 * pts.size()));
  return fit;
}

AnticrossingData read_anticrossing_csv(std::istream& in) {
  AnticrossingData data;
  std::string line;
  if (!std::getline(in, line) || line.rfind("f_R_Hz,lower_Hz,upper_Hz", 0) != 0) {
    throw InvalidInput("fit CSV must start with header f_R_Hz,lower_Hz,upper_Hz");
  }
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw InvalidInput(fmt::format("fit CSV row {}: '{}' is not a number", row, cell));
      }
    }
    if (v.size() != 3 && v.size() != 5) {
      throw InvalidInput(fmt::format("fit CSV row {} has {} columns, expected 3 or 5", row, v.size()));
    }
    AnticrossingPoint p{v[0], v[1], v[2], {}, {}};
    if (v.size() == 5) {
      p.sigma_lower = v[3];
      p.sigma_upper = v[4];
    }
    data.points.push_back(p);
  }
  return data;
}

void write_fit_report(std::ostream& out, const AnticrossingFit& fit) {
  fmt::print(out, "g_Hz: {:.9e}\n", fit.coupling_g);
  fmt::print(out, "g_ci95_Hz: {:.9e}\n", fit.coupling_g_ci);
  fmt::print(out, "f_c_Hz: {:.9e}\n", fit.cavity_frequency);
  fmt::print(out, "f_c_ci95_Hz: {:.9e}\n", fit.cavity_frequency_ci);
  fmt::print(out, "rms_residual_Hz: {:.9e}\n", fit.rms_residual);
  fmt::print(out, "degrees_of_freedom: {}\n", fit.degrees_of_freedom);
  fmt::print(out, "iterations: {}\n", fit.iterations);
}

}  // namespace qsocket
