#include "oavi/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "oavi/errors.hpp"

namespace oavi {

void LabeledDataset::validate() const {
  validate_points(points);
  if (labels.size() != points.rows()) {
    throw DataError("label count does not match point count");
  }
  if (num_classes < 1) throw DataError("dataset needs at least one class");
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels(i) < 0 || labels(i) >= num_classes) {
      throw DataError("label out of range at row " + std::to_string(i));
    }
  }
}

PointSet LabeledDataset::class_points(int label) const {
  const Eigen::Index count = (labels.array() == label).count();
  PointSet subset(count, points.cols());
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels(i) == label) subset.row(row++) = points.row(i);
  }
  return subset;
}

std::vector<int> LabeledDataset::labels_present() const {
  std::set<int> seen;
  for (Eigen::Index i = 0; i < labels.size(); ++i) seen.insert(labels(i));
  return {seen.begin(), seen.end()};
}

MinMaxScaler MinMaxScaler::fit(const Eigen::Ref<const PointSet>& train, bool clamp) {
  validate_points(train);
  MinMaxScaler scaler;
  scaler.column_min = train.colwise().minCoeff().transpose();
  scaler.column_range =
      (train.colwise().maxCoeff() - train.colwise().minCoeff()).transpose();
  scaler.clamp = clamp;
  return scaler;
}

PointSet MinMaxScaler::apply(const Eigen::Ref<const PointSet>& points) const {
  if (points.cols() != column_min.size()) {
    throw DataError("point dimension does not match scaler");
  }
  PointSet scaled(points.rows(), points.cols());
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    if (column_range(j) > 0.0) {
      scaled.col(j) = (points.col(j).array() - column_min(j)) / column_range(j);
    } else {
      scaled.col(j).setZero();
    }
  }
  if (clamp) scaled = scaled.cwiseMax(-1.0).cwiseMin(1.0);
  return scaled;
}

ScaledPair minmax_scale(const Eigen::Ref<const PointSet>& train,
                        const Eigen::Ref<const PointSet>& other, bool clamp) {
  ScaledPair result;
  result.scaler = MinMaxScaler::fit(train, clamp);
  result.train = result.scaler.apply(train);
  result.other = result.scaler.apply(other);
  return result;
}

Eigen::Index ClassTransformer::feature_dimension() const {
  Eigen::Index dim = 0;
  for (const auto& set : class_generators) dim += set.num_generators();
  return dim;
}

bool ClassTransformer::any_empty_class() const {
  return std::any_of(class_generators.begin(), class_generators.end(),
                     [](const GeneratorSet& g) { return g.generators.empty(); });
}

ClassTransformer fit_transformer(const LabeledDataset& scaled_data, const OaviConfig& config,
                                 MinMaxScaler scaler) {
  scaled_data.validate();
  ClassTransformer transformer;
  transformer.scaler = std::move(scaler);
  transformer.config = config;
  transformer.class_labels = scaled_data.labels_present();
  for (int label : transformer.class_labels) {
    transformer.class_generators.push_back(fit(scaled_data.class_points(label), config));
  }
  return transformer;
}

Eigen::MatrixXd transform(const ClassTransformer& transformer,
                          const Eigen::Ref<const PointSet>& scaled_points) {
  validate_points(scaled_points);
  Eigen::MatrixXd features(scaled_points.rows(), transformer.feature_dimension());
  Eigen::Index column = 0;
  for (const GeneratorSet& set : transformer.class_generators) {
    if (!set.order_ideal.empty() &&
        set.order_ideal.front().num_variables() != scaled_points.cols()) {
      throw DataError("point dimension does not match fitted transformer");
    }
    // The order ideal is divisor-closed and ascending, so evaluating it in
    // order leaves every generator's parents in the cache.
    EvaluationCache cache(static_cast<int>(scaled_points.cols()));
    for (const Term& t : set.order_ideal) evaluate_term(t, scaled_points, cache);
    for (const GeneratorInfo& info : set.generators) {
      features.col(column++) =
          evaluate_polynomial(info.polynomial, scaled_points, cache).cwiseAbs();
    }
  }
  return features;
}

namespace {

// Coordinate-descent Newton step for one coordinate of
// ||w||_1 + C * sum max(0, 1 - y_i f_i)^2, following the usual CDN scheme:
// margins b = 1 - y .* (X w) are maintained incrementally.
struct CoordinateState {
  Eigen::VectorXd margins;  // b_i
  Eigen::VectorXd weights;
};

double hinge_loss(const Eigen::VectorXd& margins) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    if (margins(i) > 0.0) loss += margins(i) * margins(i);
  }
  return loss;
}

Eigen::VectorXd train_one_class(const Eigen::MatrixXd& data, const Eigen::VectorXd& targets,
                                double C, double tolerance, int max_passes, bool& converged) {
  const Eigen::Index m = data.rows();
  const Eigen::Index k = data.cols();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd margins = Eigen::VectorXd::Ones(m);  // 1 - y .* (X w) at w = 0

  converged = false;
  for (int pass = 0; pass < max_passes; ++pass) {
    double max_violation = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      double grad = 0.0;
      double hess = 1e-12;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (margins(i) > 0.0) {
          const double yx = targets(i) * data(i, j);
          grad -= 2.0 * C * yx * margins(i);
          hess += 2.0 * C * data(i, j) * data(i, j);
        }
      }
      // Minimum-norm subgradient of the composite objective at w_j.
      double violation;
      if (w(j) > 0.0) {
        violation = std::abs(grad + 1.0);
      } else if (w(j) < 0.0) {
        violation = std::abs(grad - 1.0);
      } else {
        violation = std::max(0.0, std::abs(grad) - 1.0);
      }
      max_violation = std::max(max_violation, violation);
      if (violation == 0.0) continue;

      double d;
      if (grad + 1.0 <= hess * w(j)) {
        d = -(grad + 1.0) / hess;
      } else if (grad - 1.0 >= hess * w(j)) {
        d = -(grad - 1.0) / hess;
      } else {
        d = -w(j);
      }
      if (d == 0.0) continue;

      // Backtracking line search on the exact objective change.
      const double directional = grad * d + std::abs(w(j) + d) - std::abs(w(j));
      const double old_loss = hinge_loss(margins);
      const Eigen::VectorXd margin_rate = (targets.array() * data.col(j).array()).matrix();
      double step = 1.0;
      for (int halving = 0; halving < 30; ++halving) {
        const double delta = step * d;
        const Eigen::VectorXd trial = margins - delta * margin_rate;
        const double change = std::abs(w(j) + delta) - std::abs(w(j)) +
                              C * (hinge_loss(trial) - old_loss);
        if (change <= 0.01 * step * directional) {
          w(j) += delta;
          margins = trial;
          break;
        }
        step *= 0.5;
      }
    }
    if (max_violation <= tolerance) {
      converged = true;
      break;
    }
  }
  return w;
}

}  // namespace

Eigen::MatrixXd LinearOvrClassifier::scores(
    const Eigen::Ref<const Eigen::MatrixXd>& features) const {
  if (features.cols() + 1 != weights.rows()) {
    throw DataError("feature dimension does not match classifier");
  }
  return (features * weights.topRows(features.cols())).rowwise() + weights.row(weights.rows() - 1);
}

Eigen::VectorXi LinearOvrClassifier::predict(
    const Eigen::Ref<const Eigen::MatrixXd>& features) const {
  const Eigen::MatrixXd s = scores(features);
  Eigen::VectorXi predictions(s.rows());
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < s.cols(); ++c) {
      if (s(i, c) > s(i, best)) best = c;  // ties keep the lowest class
    }
    predictions(i) = class_labels[static_cast<std::size_t>(best)];
  }
  return predictions;
}

LinearOvrClassifier train_classifier(const Eigen::Ref<const Eigen::MatrixXd>& features,
                                     const Eigen::Ref<const Eigen::VectorXi>& labels,
                                     std::vector<int> class_labels, double C,
                                     double tolerance, int max_passes) {
  if (!features.allFinite()) throw NumericError("classifier features contain non-finite values");
  if (features.rows() != labels.size()) throw DataError("feature and label counts differ");
  if (class_labels.empty()) throw ConfigError("classifier needs at least one class");
  if (C <= 0.0) throw ConfigError("classifier C must be positive");

  Eigen::MatrixXd augmented(features.rows(), features.cols() + 1);
  augmented.leftCols(features.cols()) = features;
  augmented.col(features.cols()).setOnes();

  LinearOvrClassifier classifier;
  classifier.class_labels = std::move(class_labels);
  classifier.C = C;
  classifier.weights.resize(augmented.cols(), static_cast<Eigen::Index>(classifier.class_labels.size()));
  for (std::size_t c = 0; c < classifier.class_labels.size(); ++c) {
    Eigen::VectorXd targets(labels.size());
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
      targets(i) = labels(i) == classifier.class_labels[c] ? 1.0 : -1.0;
    }
    bool converged = false;
    classifier.weights.col(static_cast<Eigen::Index>(c)) =
        train_one_class(augmented, targets, C, tolerance, max_passes, converged);
    classifier.converged = classifier.converged && converged;
  }
  return classifier;
}

double error_percent(const Eigen::Ref<const Eigen::VectorXi>& predicted,
                     const Eigen::Ref<const Eigen::VectorXi>& actual) {
  if (predicted.size() != actual.size() || predicted.size() == 0) {
    throw DataError("prediction and label vectors must have equal positive length");
  }
  const auto wrong = (predicted.array() != actual.array()).count();
  return 100.0 * static_cast<double>(wrong) / static_cast<double>(predicted.size());
}

MetricsReport compute_metrics(const ClassTransformer& transformer,
                              const LinearOvrClassifier& classifier,
                              const Eigen::Ref<const PointSet>& scaled_train,
                              const Eigen::Ref<const Eigen::VectorXi>& train_labels,
                              const Eigen::Ref<const PointSet>& scaled_test,
                              const Eigen::Ref<const Eigen::VectorXi>& test_labels,
                              const Timings& timings) {
  MetricsReport report;
  report.timings = timings;
  for (const GeneratorSet& set : transformer.class_generators) {
    report.total_generators += set.num_generators();
    report.total_order_terms += set.order_ideal_size();
    for (const GeneratorInfo& info : set.generators) {
      report.max_generator_degree = std::max(report.max_generator_degree,
                                             info.polynomial.degree());
      const Eigen::VectorXd tail = info.polynomial.tail_coefficients();
      report.coefficient_entries += tail.size();
      report.zero_entries +=
          (tail.array().abs() < kZeroCoefficientThreshold).count();
    }
  }
  report.nonzero_entries = report.coefficient_entries - report.zero_entries;
  report.sparsity = report.coefficient_entries == 0
                        ? 0.0
                        : static_cast<double>(report.zero_entries) /
                              static_cast<double>(report.coefficient_entries);
  report.train_error_percent =
      error_percent(classifier.predict(transform(transformer, scaled_train)), train_labels);
  report.test_error_percent =
      error_percent(classifier.predict(transform(transformer, scaled_test)), test_labels);
  return report;
}

}  // namespace oavi
