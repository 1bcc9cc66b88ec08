#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "oavi/evaluation.hpp"
#include "oavi/fitter.hpp"

namespace oavi {

struct LabeledDataset {
  PointSet points;
  Eigen::VectorXi labels;  // contiguous 0..num_classes-1
  int num_classes = 0;
  std::vector<std::string> variable_names;  // empty when synthetic
  std::vector<std::string> class_names;     // index = label

  void validate() const;
  PointSet class_points(int label) const;
  std::vector<int> labels_present() const;
};

/// Per-feature affine map fitted on training data, sending each training
/// column onto [0, 1]. Constant columns map to 0. When clamp is set, applied
/// points are clipped into [-1, 1] so out-of-range test values stay inside
/// the box the fit assumes.
struct MinMaxScaler {
  Eigen::VectorXd column_min;
  Eigen::VectorXd column_range;
  bool clamp = true;

  static MinMaxScaler fit(const Eigen::Ref<const PointSet>& train, bool clamp = true);
  PointSet apply(const Eigen::Ref<const PointSet>& points) const;
};

struct ScaledPair {
  PointSet train;
  PointSet other;
  MinMaxScaler scaler;
};

ScaledPair minmax_scale(const Eigen::Ref<const PointSet>& train,
                        const Eigen::Ref<const PointSet>& other, bool clamp = true);

/// One generator set per class plus the scaling that produced the fit inputs.
struct ClassTransformer {
  MinMaxScaler scaler;
  OaviConfig config;
  std::vector<int> class_labels;                // ascending labels seen at fit
  std::vector<GeneratorSet> class_generators;   // parallel to class_labels

  Eigen::Index feature_dimension() const;
  bool any_empty_class() const;  // a class produced no generators (lambda > 0 + cap)
};

/// Runs one fit per class on that class's points. Expects scaled data.
ClassTransformer fit_transformer(const LabeledDataset& scaled_data, const OaviConfig& config,
                                 MinMaxScaler scaler = {});

/// |g(x)| feature map: one column per generator, classes concatenated in
/// class_labels order. Expects points scaled with the transformer's scaler.
Eigen::MatrixXd transform(const ClassTransformer& transformer,
                          const Eigen::Ref<const PointSet>& scaled_points);

/// One-vs-rest linear classifier with l1-penalized squared hinge loss,
/// minimize ||w||_1 + C * sum_i max(0, 1 - y_i w^T x_i)^2 per class. The bias
/// is an augmented penalized coordinate. Prediction takes the argmax of class
/// scores, ties to the lowest class label.
struct LinearOvrClassifier {
  Eigen::MatrixXd weights;  // (features + 1) x classes, bias in the last row
  std::vector<int> class_labels;
  double C = 1.0;
  bool converged = true;

  Eigen::MatrixXd scores(const Eigen::Ref<const Eigen::MatrixXd>& features) const;
  Eigen::VectorXi predict(const Eigen::Ref<const Eigen::MatrixXd>& features) const;
};

LinearOvrClassifier train_classifier(const Eigen::Ref<const Eigen::MatrixXd>& features,
                                     const Eigen::Ref<const Eigen::VectorXi>& labels,
                                     std::vector<int> class_labels, double C,
                                     double tolerance = 1e-4, int max_passes = 1000);

/// Fraction of misclassified samples, in percent.
double error_percent(const Eigen::Ref<const Eigen::VectorXi>& predicted,
                     const Eigen::Ref<const Eigen::VectorXi>& actual);

struct Timings {
  double hyperparameter_seconds = 0.0;
  double train_seconds = 0.0;
  double test_seconds = 0.0;
};

struct MetricsReport {
  int total_generators = 0;       // sum over classes of |G^i|
  int total_order_terms = 0;      // sum over classes of |O^i|
  int max_generator_degree = 0;
  long long coefficient_entries = 0;   // sum of g_e
  long long zero_entries = 0;          // sum of g_z
  long long nonzero_entries = 0;       // sum of g_n = g_e - g_z
  double sparsity = 0.0;               // sum g_z / sum g_e, 0 when empty
  double train_error_percent = 0.0;
  double test_error_percent = 0.0;
  Timings timings;
};

/// Coefficient entries below this magnitude count as zero for sparsity.
inline constexpr double kZeroCoefficientThreshold = 1e-12;

MetricsReport compute_metrics(const ClassTransformer& transformer,
                              const LinearOvrClassifier& classifier,
                              const Eigen::Ref<const PointSet>& scaled_train,
                              const Eigen::Ref<const Eigen::VectorXi>& train_labels,
                              const Eigen::Ref<const PointSet>& scaled_test,
                              const Eigen::Ref<const Eigen::VectorXi>& test_labels,
                              const Timings& timings);

}  // namespace oavi
