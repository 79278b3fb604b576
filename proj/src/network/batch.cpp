#include "hmcf/network/batch.hpp"

#include <string>

#include "hmcf/error.hpp"

namespace hmcf::nn {

std::size_t jet_components(std::size_t input_dim, JetOrder order) {
  switch (order) {
    case JetOrder::Value:
      return 1;
    case JetOrder::First:
      return 1 + input_dim;
    case JetOrder::Second:
      return 1 + input_dim + ad::packed_size(input_dim);
  }
  return 1;
}

BatchJetEngine::BatchJetEngine(const NetworkShape& shape, JetOrder order, InputTransform transform)
    : shape_(shape), order_(order), transform_(transform), components_(jet_components(shape.input_dim, order)) {
  shape_.validate();
  layer_inputs_.resize(shape_.layer_count());
  preactivations_.resize(shape_.hidden_layers);
}

void BatchJetEngine::forward(const ParameterVector& params, const Eigen::MatrixXd& points) {
  if (!(params.shape() == shape_)) throw ConfigError("parameter shape does not match engine shape");
  if (static_cast<std::size_t>(points.rows()) != shape_.input_dim) {
    throw ConfigError("points must have input_dim rows");
  }
  const std::size_t d = shape_.input_dim;
  const auto n = points.cols();
  points_ = static_cast<std::size_t>(n);
  const auto cols = static_cast<Eigen::Index>(components_) * n;

  auto& seed = layer_inputs_[0];
  seed.setZero(static_cast<Eigen::Index>(d), cols);
  for (std::size_t i = 0; i < d; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    seed.row(row).head(n) = (points.row(row).array() - transform_.offset[i]) * transform_.scale[i];
    if (order_ != JetOrder::Value) seed.row(row).segment((1 + row) * n, n).setConstant(transform_.scale[i]);
  }

  for (std::size_t l = 0; l < shape_.layer_count(); ++l) {
    const bool hidden = l < shape_.hidden_layers;
    Eigen::MatrixXd& z = hidden ? preactivations_[l] : output_;
    z.noalias() = params.weight(l) * layer_inputs_[l];
    z.leftCols(n).colwise() += params.bias(l);
    if (!z.allFinite()) throw NumericOverflow("non-finite activation in layer " + std::to_string(l), l);
    if (hidden) tanh_forward(z, layer_inputs_[l + 1]);
  }
}

namespace {

// Fused per-element jet rules. D is the input dimension; each array is component-blocked with stride B.

template <int D>
void tanh_jets_forward(const double* __restrict z, double* __restrict a,
                       Eigen::Index B, bool second) {
  for (Eigen::Index k = 0; k < B; ++k) {
    const double v = a[k];
    const double s = 1.0 - v * v;
    double zi[D];
    for (int i = 0; i < D; ++i) {
      zi[i] = z[(1 + i) * B + k];
      a[(1 + i) * B + k] = s * zi[i];
    }
    if (!second) continue;
    const double q = -2.0 * v * s;
    int p = 0;
    for (int i = 0; i < D; ++i) {
      for (int j = i; j < D; ++j, ++p) {
        const Eigen::Index off = (1 + D + p) * B + k;
        a[off] = q * zi[i] * zi[j] + s * z[off];
      }
    }
  }
}

template <int D>
void tanh_jets_backward(const double* __restrict z, const double* __restrict a0, const double* __restrict da,
                        double* __restrict dz, Eigen::Index B, bool second) {
  for (Eigen::Index k = 0; k < B; ++k) {
    const double v = a0[k];
    const double s = 1.0 - v * v;
    double zi[D];
    double gi[D];
    double s_bar = 0.0;
    for (int i = 0; i < D; ++i) {
      zi[i] = z[(1 + i) * B + k];
      const double di = da[(1 + i) * B + k];
      gi[i] = s * di;
      s_bar += di * zi[i];
    }
    double q_bar = 0.0;
    if (second) {
      const double q = -2.0 * v * s;
      int p = 0;
      for (int i = 0; i < D; ++i) {
        for (int j = i; j < D; ++j, ++p) {
          const Eigen::Index off = (1 + D + p) * B + k;
          const double dp = da[off];
          dz[off] = s * dp;
          s_bar += dp * z[off];
          q_bar += dp * zi[i] * zi[j];
          gi[i] += q * dp * zi[j];
          gi[j] += q * dp * zi[i];
        }
      }
    }
    for (int i = 0; i < D; ++i) dz[(1 + i) * B + k] = gi[i];
    // Adjoints of s = tanh' and q = tanh'' flow back into the value through a.
    dz[k] = (da[k] - 2.0 * v * s_bar + (6.0 * v * v - 2.0) * q_bar) * s;
  }
}

}  // namespace

void BatchJetEngine::tanh_forward(const Eigen::MatrixXd& z, Eigen::MatrixXd& a) const {
  const std::size_t d = shape_.input_dim;
  const auto block = static_cast<Eigen::Index>(z.rows()) * static_cast<Eigen::Index>(points_);
  a.resize(z.rows(), z.cols());

  // 1 - 2/(e^{2z}+1) vectorizes where std::tanh does not; error stays at the ulp level.
  Eigen::Map<const Eigen::ArrayXd> z0(z.data(), block);
  Eigen::Map<Eigen::ArrayXd> a0(a.data(), block);
  a0 = 1.0 - 2.0 / ((2.0 * z0).exp() + 1.0);
  if (order_ == JetOrder::Value) return;

  const bool second = order_ == JetOrder::Second;
  switch (d) {
    case 1:
      tanh_jets_forward<1>(z.data(), a.data(), block, second);
      return;
    case 2:
      tanh_jets_forward<2>(z.data(), a.data(), block, second);
      return;
    case 3:
      tanh_jets_forward<3>(z.data(), a.data(), block, second);
      return;
    default:
      throw ConfigError("batch engine supports input_dim 1 to 3");
  }
}

void BatchJetEngine::tanh_backward(const Eigen::MatrixXd& z, const Eigen::MatrixXd& a,
                                   const Eigen::MatrixXd& da, Eigen::MatrixXd& dz) const {
  const std::size_t d = shape_.input_dim;
  const auto block = static_cast<Eigen::Index>(z.rows()) * static_cast<Eigen::Index>(points_);
  dz.resize(z.rows(), z.cols());
  if (order_ == JetOrder::Value) {
    Eigen::Map<const Eigen::ArrayXd> a0(a.data(), block);
    Eigen::Map<Eigen::ArrayXd>(dz.data(), block) = Eigen::Map<const Eigen::ArrayXd>(da.data(), block) *
                                                   (1.0 - a0.square());
    return;
  }
  const bool second = order_ == JetOrder::Second;
  switch (d) {
    case 1:
      tanh_jets_backward<1>(z.data(), a.data(), da.data(), dz.data(), block, second);
      return;
    case 2:
      tanh_jets_backward<2>(z.data(), a.data(), da.data(), dz.data(), block, second);
      return;
    case 3:
      tanh_jets_backward<3>(z.data(), a.data(), da.data(), dz.data(), block, second);
      return;
    default:
      throw ConfigError("batch engine supports input_dim 1 to 3");
  }
}

void BatchJetEngine::backward(const ParameterVector& params, const Eigen::MatrixXd& output_adjoint,
                              std::span<double> grad) const {
  if (grad.size() != params.size()) throw ConfigError("gradient buffer size does not match parameters");
  if (output_adjoint.rows() != output_.rows() || output_adjoint.cols() != output_.cols()) {
    throw ConfigError("output adjoint shape does not match forward output");
  }
  const auto n = static_cast<Eigen::Index>(points_);
  // The output adjoint is only read; hidden adjoints ping-pong between two scratch buffers.
  const Eigen::MatrixXd* dzp = &output_adjoint;
  Eigen::MatrixXd* next = &dz_a_;
  for (std::size_t l = shape_.layer_count(); l-- > 0;) {
    const Eigen::MatrixXd& dz = *dzp;
    const auto& lay = params.layout()[l];
    Eigen::Map<Eigen::MatrixXd> gw(grad.data() + lay.weight_offset, static_cast<Eigen::Index>(lay.rows),
                                   static_cast<Eigen::Index>(lay.cols));
    Eigen::Map<Eigen::VectorXd> gb(grad.data() + lay.bias_offset, static_cast<Eigen::Index>(lay.rows));
    // Both go through owned storage: Eigen's rounding depends on the destination's alignment.
    gw_.noalias() = dz * layer_inputs_[l].transpose();
    gw += gw_;
    gb_ = dz.leftCols(n).rowwise().sum();
    gb += gb_;
    if (l == 0) break;
    da_.noalias() = params.weight(l).transpose() * dz;
    tanh_backward(preactivations_[l - 1], layer_inputs_[l], da_, *next);
    dzp = next;
    next = next == &dz_a_ ? &dz_b_ : &dz_a_;
  }
}

}  // namespace hmcf::nn
