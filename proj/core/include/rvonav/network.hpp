// Copyright 2026 The rvo-nav Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RVONAV_NN_NETWORK_HPP_
#define RVONAV_NN_NETWORK_HPP_

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rvonav/observation.hpp"
#include "rvonav/tensor.hpp"
#include "rvonav/vec2.hpp"

namespace rvonav::nn {

enum class EncoderKind { BiGru, UniLstm };
enum class NeighborEncoding { Cone, Raw };
enum class OrientationEncoding { Scalar, CosSin };

inline constexpr std::size_t kActionSize = 2;
inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;

struct NetworkConfig {
  std::size_t hidden = 256;  ///< Recurrent state size, also the size of the summed feature.
  std::size_t fc = 256;      ///< Width of the two hidden layers in each head.
  EncoderKind encoder = EncoderKind::BiGru;
  NeighborEncoding neighbor_encoding = NeighborEncoding::Cone;
  OrientationEncoding orientation = OrientationEncoding::Scalar;
  double init_log_std = -0.6931471805599453;  // log(0.5)
  double output_init_scale = 1.0;             ///< Multiplies the initial actor output weights.
  double layer_norm_eps = 1e-5;
  std::uint64_t init_seed = 0;

  std::size_t block_size() const;
  std::size_t self_size() const;
};

std::string to_string(EncoderKind kind);
std::string to_string(NeighborEncoding enc);
std::string to_string(OrientationEncoding enc);
EncoderKind parse_encoder_kind(const std::string& s);
NeighborEncoding parse_neighbor_encoding(const std::string& s);
OrientationEncoding parse_orientation_encoding(const std::string& s);

struct Linear {
  Tensor weight;  ///< in x out
  Tensor bias;    ///< 1 x out
  Tensor forward(const Tensor& x) const { return add_row(matmul(x, weight), bias); }
};

/// GRU cell: h' = (1 - z) h + z tanh(W_h x + U_h (r h) + b_h).
struct GruCell {
  Tensor w_input;      ///< in x 3H, gate order [z | r | h]
  Tensor w_hidden_zr;  ///< H x 2H
  Tensor w_hidden_h;   ///< H x H
  Tensor bias;         ///< 1 x 3H
  Tensor forward(const Tensor& x, const Tensor& h) const;
};

/// LSTM cell with gate order [i | f | g | o].
struct LstmCell {
  Tensor w_input;   ///< in x 4H
  Tensor w_hidden;  ///< H x 4H
  Tensor bias;      ///< 1 x 4H
  std::pair<Tensor, Tensor> forward(const Tensor& x, const Tensor& h, const Tensor& c) const;
};

/**
 * Padded neighbor sequences for a batch. Step k of row b is valid iff
 * k < length(b); backward_steps hold each row's blocks in reverse order,
 * left-aligned, so both directions share the masks.
 */
struct SequenceBatch {
  Eigen::Index batch = 0;
  std::vector<Matrix> forward_steps;
  std::vector<Matrix> backward_steps;
  std::vector<Eigen::VectorXd> masks;
};

struct ObservationBatch {
  Matrix self;  ///< B x self_size
  SequenceBatch sequence;
  Eigen::Index size() const { return self.rows(); }
};

ObservationBatch make_batch(std::span<const Observation> obs, const NetworkConfig& cfg);

struct ActionDistribution {
  std::array<double, kActionSize> mean{};
  std::array<double, kActionSize> log_std{};
};

/**
 * @brief Recurrent actor-critic.
 *
 * The neighbor encoder (BiGRU by default) and the layer norm feed two
 * disjoint heads: a tanh-squashed Gaussian mean and a scalar value. The
 * log standard deviation is a free row vector. Copies are deep.
 */
class Network {
 public:
  explicit Network(NetworkConfig cfg);
  Network(const Network& other);
  Network& operator=(const Network& other);
  Network(Network&&) noexcept = default;
  Network& operator=(Network&&) noexcept = default;

  const NetworkConfig& config() const { return cfg_; }

  /// h_m for each row; rows with no neighbors give zeros.
  Tensor encode(const SequenceBatch& seq) const;
  /// layer_norm(concat(h_m, self)).
  Tensor features(const ObservationBatch& batch) const;
  Tensor actor_mean(const Tensor& features) const;
  Tensor critic_value(const Tensor& features) const;
  /// Clamped to [kLogStdMin, kLogStdMax].
  Tensor log_std() const;

  ActionDistribution distribution(const Observation& obs) const;
  double value(const Observation& obs) const;

  std::vector<std::pair<std::string, Tensor>> named_parameters() const;
  /// Encoder, layer norm, actor head and log_std.
  std::vector<Tensor> actor_parameters() const;
  /// Critic head only; the value loss does not reach the shared encoder.
  std::vector<Tensor> critic_parameters() const;
  std::vector<Tensor> encoder_parameters() const;

  void clamp_log_std();

  // Exposed for tests.
  GruCell& forward_gru() { return gru_fwd_; }
  GruCell& backward_gru() { return gru_bwd_; }
  LstmCell& lstm() { return lstm_; }

 private:
  template <typename F>
  void visit(F&& f);

  NetworkConfig cfg_;
  GruCell gru_fwd_;
  GruCell gru_bwd_;
  LstmCell lstm_;
  Tensor ln_gain_;
  Tensor ln_bias_;
  Linear actor_fc1_, actor_fc2_, actor_out_;
  Linear critic_fc1_, critic_fc2_, critic_out_;
  Tensor log_std_;
};

/// Row-wise diagonal Gaussian log density (B x 1).
Tensor gaussian_log_prob(const Tensor& mean, const Tensor& log_std, const Matrix& actions);

double log_prob(const ActionDistribution& dist, const Vec2& action);

struct SampledAction {
  Vec2 action;
  double logp = 0.0;
};

/// Draws from the distribution; deterministic mode returns the mean.
SampledAction sample_action(const ActionDistribution& dist, std::mt19937_64& rng,
                            bool deterministic = false);

/// mean(min(rho A, clip(rho, 1 - eps, 1 + eps) A)) with rho = exp(logp_new - logp_old).
Tensor clipped_surrogate(const Tensor& logp_new, const Matrix& logp_old, const Matrix& advantages,
                         double clip_eps);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  Adam(std::vector<Tensor> params, AdamConfig cfg);
  void zero_grad();
  void step();
  const AdamConfig& config() const { return cfg_; }

 private:
  std::vector<Tensor> params_;
  AdamConfig cfg_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  long steps_ = 0;
};

}  // namespace rvonav::nn

#endif  // RVONAV_NN_NETWORK_HPP_
