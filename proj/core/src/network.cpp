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

#include "rvonav/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rvonav::nn {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // log(2 pi)

Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double bound, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-bound, bound);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

Matrix orthogonal(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  // Fix column signs so the factorisation is unique.
  const Eigen::VectorXd d = qr.matrixQR().diagonal();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (d(j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

Matrix orthogonal_blocks(Eigen::Index n, Eigen::Index blocks, std::mt19937_64& rng) {
  Matrix m(n, n * blocks);
  for (Eigen::Index b = 0; b < blocks; ++b) m.middleCols(b * n, n) = orthogonal(n, rng);
  return m;
}

Tensor param(Matrix m) { return Tensor(std::move(m), true); }

Linear make_linear(std::size_t in, std::size_t out, std::mt19937_64& rng, double gain = 1.0) {
  const double bound = 1.0 / std::sqrt(double(in));
  return {param(uniform_matrix(Eigen::Index(in), Eigen::Index(out), bound, rng) * gain),
          param(Matrix::Zero(1, Eigen::Index(out)))};
}

GruCell make_gru(std::size_t in, std::size_t hidden, std::mt19937_64& rng) {
  const auto h = Eigen::Index(hidden);
  const double bound = 1.0 / std::sqrt(double(in));
  return {param(uniform_matrix(Eigen::Index(in), 3 * h, bound, rng)),
          param(orthogonal_blocks(h, 2, rng)), param(orthogonal(h, rng)),
          param(Matrix::Zero(1, 3 * h))};
}

LstmCell make_lstm(std::size_t in, std::size_t hidden, std::mt19937_64& rng) {
  const auto h = Eigen::Index(hidden);
  const double bound = 1.0 / std::sqrt(double(in));
  return {param(uniform_matrix(Eigen::Index(in), 4 * h, bound, rng)),
          param(orthogonal_blocks(h, 4, rng)), param(Matrix::Zero(1, 4 * h))};
}

Tensor deep_copy(const Tensor& t) {
  if (!t.defined()) return {};
  return Tensor(t.value(), t.requires_grad());
}

}  // namespace

std::size_t NetworkConfig::block_size() const {
  return neighbor_encoding == NeighborEncoding::Cone ? kConeBlockSize : kRawBlockSize;
}

std::size_t NetworkConfig::self_size() const {
  return orientation == OrientationEncoding::Scalar ? kSelfBlockSize : kSelfBlockSize + 1;
}

std::string to_string(EncoderKind kind) {
  return kind == EncoderKind::BiGru ? "bigru" : "lstm";
}
std::string to_string(NeighborEncoding enc) {
  return enc == NeighborEncoding::Cone ? "cone" : "raw";
}
std::string to_string(OrientationEncoding enc) {
  return enc == OrientationEncoding::Scalar ? "scalar" : "cos_sin";
}

EncoderKind parse_encoder_kind(const std::string& s) {
  if (s == "bigru") return EncoderKind::BiGru;
  if (s == "lstm") return EncoderKind::UniLstm;
  throw std::invalid_argument("unknown encoder kind: " + s);
}
NeighborEncoding parse_neighbor_encoding(const std::string& s) {
  if (s == "cone") return NeighborEncoding::Cone;
  if (s == "raw") return NeighborEncoding::Raw;
  throw std::invalid_argument("unknown neighbor encoding: " + s);
}
OrientationEncoding parse_orientation_encoding(const std::string& s) {
  if (s == "scalar") return OrientationEncoding::Scalar;
  if (s == "cos_sin") return OrientationEncoding::CosSin;
  throw std::invalid_argument("unknown orientation encoding: " + s);
}

Tensor GruCell::forward(const Tensor& x, const Tensor& h) const {
  const Eigen::Index hs = w_hidden_h.rows();
  const Tensor xw = add_row(matmul(x, w_input), bias);
  const Tensor hu = matmul(h, w_hidden_zr);
  const Tensor z = sigmoid(slice_cols(xw, 0, hs) + slice_cols(hu, 0, hs));
  const Tensor r = sigmoid(slice_cols(xw, hs, hs) + slice_cols(hu, hs, hs));
  const Tensor candidate = tanh(slice_cols(xw, 2 * hs, hs) + matmul(r * h, w_hidden_h));
  // (1 - z) h + z h~  ==  h + z (h~ - h)
  return h + z * (candidate - h);
}

std::pair<Tensor, Tensor> LstmCell::forward(const Tensor& x, const Tensor& h,
                                            const Tensor& c) const {
  const Eigen::Index hs = w_hidden.rows();
  const Tensor gates = add_row(matmul(x, w_input), bias) + matmul(h, w_hidden);
  const Tensor i = sigmoid(slice_cols(gates, 0, hs));
  const Tensor f = sigmoid(slice_cols(gates, hs, hs));
  const Tensor g = tanh(slice_cols(gates, 2 * hs, hs));
  const Tensor o = sigmoid(slice_cols(gates, 3 * hs, hs));
  Tensor c_next = f * c + i * g;
  Tensor h_next = o * tanh(c_next);
  return {std::move(h_next), std::move(c_next)};
}

ObservationBatch make_batch(std::span<const Observation> obs, const NetworkConfig& cfg) {
  ObservationBatch out;
  const auto batch = Eigen::Index(obs.size());
  const auto block = Eigen::Index(cfg.block_size());
  out.self.resize(batch, Eigen::Index(cfg.self_size()));
  std::size_t longest = 0;
  for (Eigen::Index b = 0; b < batch; ++b) {
    const Observation& o = obs[std::size_t(b)];
    longest = std::max(longest, o.neighbors.size());
    if (cfg.orientation == OrientationEncoding::Scalar) {
      for (std::size_t k = 0; k < kSelfBlockSize; ++k) out.self(b, Eigen::Index(k)) = o.self_block[k];
    } else {
      const auto& s = o.self_block;
      out.self.row(b) << s[0], s[1], std::cos(s[2]), std::sin(s[2]), s[3], s[4], s[5];
    }
  }

  SequenceBatch& seq = out.sequence;
  seq.batch = batch;
  for (std::size_t k = 0; k < longest; ++k) {
    Matrix fwd = Matrix::Zero(batch, block);
    Matrix bwd = Matrix::Zero(batch, block);
    Eigen::VectorXd mask = Eigen::VectorXd::Zero(batch);
    for (Eigen::Index b = 0; b < batch; ++b) {
      const auto& nb = obs[std::size_t(b)].neighbors;
      if (k >= nb.size()) continue;
      mask(b) = 1.0;
      const NeighborInfo& f = nb[k];
      const NeighborInfo& r = nb[nb.size() - 1 - k];
      if (cfg.neighbor_encoding == NeighborEncoding::Cone) {
        const auto fb = f.cone_block();
        const auto rb = r.cone_block();
        for (Eigen::Index j = 0; j < block; ++j) {
          fwd(b, j) = fb[std::size_t(j)];
          bwd(b, j) = rb[std::size_t(j)];
        }
      } else {
        const auto fb = f.raw_block();
        const auto rb = r.raw_block();
        for (Eigen::Index j = 0; j < block; ++j) {
          fwd(b, j) = fb[std::size_t(j)];
          bwd(b, j) = rb[std::size_t(j)];
        }
      }
    }
    seq.forward_steps.push_back(std::move(fwd));
    seq.backward_steps.push_back(std::move(bwd));
    seq.masks.push_back(std::move(mask));
  }
  return out;
}

Network::Network(NetworkConfig cfg) : cfg_(cfg) {
  std::mt19937_64 rng(cfg_.init_seed);
  const std::size_t in = cfg_.block_size();
  if (cfg_.encoder == EncoderKind::BiGru) {
    gru_fwd_ = make_gru(in, cfg_.hidden, rng);
    gru_bwd_ = make_gru(in, cfg_.hidden, rng);
  } else {
    lstm_ = make_lstm(in, cfg_.hidden, rng);
  }
  const std::size_t feat = cfg_.hidden + cfg_.self_size();
  ln_gain_ = param(Matrix::Ones(1, Eigen::Index(feat)));
  ln_bias_ = param(Matrix::Zero(1, Eigen::Index(feat)));
  actor_fc1_ = make_linear(feat, cfg_.fc, rng);
  actor_fc2_ = make_linear(cfg_.fc, cfg_.fc, rng);
  actor_out_ = make_linear(cfg_.fc, kActionSize, rng, cfg_.output_init_scale);
  critic_fc1_ = make_linear(feat, cfg_.fc, rng);
  critic_fc2_ = make_linear(cfg_.fc, cfg_.fc, rng);
  critic_out_ = make_linear(cfg_.fc, 1, rng);
  log_std_ = param(Matrix::Constant(1, kActionSize, cfg_.init_log_std));
}

template <typename F>
void Network::visit(F&& f) {
  if (cfg_.encoder == EncoderKind::BiGru) {
    f("encoder.forward.w_input", gru_fwd_.w_input);
    f("encoder.forward.w_hidden_zr", gru_fwd_.w_hidden_zr);
    f("encoder.forward.w_hidden_h", gru_fwd_.w_hidden_h);
    f("encoder.forward.bias", gru_fwd_.bias);
    f("encoder.backward.w_input", gru_bwd_.w_input);
    f("encoder.backward.w_hidden_zr", gru_bwd_.w_hidden_zr);
    f("encoder.backward.w_hidden_h", gru_bwd_.w_hidden_h);
    f("encoder.backward.bias", gru_bwd_.bias);
  } else {
    f("encoder.lstm.w_input", lstm_.w_input);
    f("encoder.lstm.w_hidden", lstm_.w_hidden);
    f("encoder.lstm.bias", lstm_.bias);
  }
  f("layer_norm.gain", ln_gain_);
  f("layer_norm.bias", ln_bias_);
  f("actor.fc1.weight", actor_fc1_.weight);
  f("actor.fc1.bias", actor_fc1_.bias);
  f("actor.fc2.weight", actor_fc2_.weight);
  f("actor.fc2.bias", actor_fc2_.bias);
  f("actor.out.weight", actor_out_.weight);
  f("actor.out.bias", actor_out_.bias);
  f("actor.log_std", log_std_);
  f("critic.fc1.weight", critic_fc1_.weight);
  f("critic.fc1.bias", critic_fc1_.bias);
  f("critic.fc2.weight", critic_fc2_.weight);
  f("critic.fc2.bias", critic_fc2_.bias);
  f("critic.out.weight", critic_out_.weight);
  f("critic.out.bias", critic_out_.bias);
}

Network::Network(const Network& other)
    : cfg_(other.cfg_),
      gru_fwd_(other.gru_fwd_),
      gru_bwd_(other.gru_bwd_),
      lstm_(other.lstm_),
      ln_gain_(other.ln_gain_),
      ln_bias_(other.ln_bias_),
      actor_fc1_(other.actor_fc1_),
      actor_fc2_(other.actor_fc2_),
      actor_out_(other.actor_out_),
      critic_fc1_(other.critic_fc1_),
      critic_fc2_(other.critic_fc2_),
      critic_out_(other.critic_out_),
      log_std_(other.log_std_) {
  visit([](const char*, Tensor& t) { t = deep_copy(t); });
}

Network& Network::operator=(const Network& other) {
  if (this != &other) *this = Network(other);
  return *this;
}

Tensor Network::encode(const SequenceBatch& seq) const {
  const auto h = Eigen::Index(cfg_.hidden);
  if (cfg_.encoder == EncoderKind::BiGru) {
    Tensor h_fwd = Tensor::zeros(seq.batch, h);
    Tensor h_bwd = Tensor::zeros(seq.batch, h);
    for (std::size_t k = 0; k < seq.masks.size(); ++k) {
      const Tensor xf(seq.forward_steps[k]);
      const Tensor xb(seq.backward_steps[k]);
      h_fwd = blend(seq.masks[k], gru_fwd_.forward(xf, h_fwd), h_fwd);
      h_bwd = blend(seq.masks[k], gru_bwd_.forward(xb, h_bwd), h_bwd);
    }
    return h_fwd + h_bwd;
  }
  Tensor hs = Tensor::zeros(seq.batch, h);
  Tensor cs = Tensor::zeros(seq.batch, h);
  for (std::size_t k = 0; k < seq.masks.size(); ++k) {
    auto [hn, cn] = lstm_.forward(Tensor(seq.forward_steps[k]), hs, cs);
    hs = blend(seq.masks[k], hn, hs);
    cs = blend(seq.masks[k], cn, cs);
  }
  return hs;
}

Tensor Network::features(const ObservationBatch& batch) const {
  const Tensor joined = concat_cols(encode(batch.sequence), Tensor(batch.self));
  return layer_norm(joined, ln_gain_, ln_bias_, cfg_.layer_norm_eps);
}

Tensor Network::actor_mean(const Tensor& features) const {
  const Tensor h1 = relu(actor_fc1_.forward(features));
  const Tensor h2 = relu(actor_fc2_.forward(h1));
  return tanh(actor_out_.forward(h2));
}

Tensor Network::critic_value(const Tensor& features) const {
  const Tensor h1 = relu(critic_fc1_.forward(features));
  const Tensor h2 = relu(critic_fc2_.forward(h1));
  return critic_out_.forward(h2);
}

Tensor Network::log_std() const { return clamp(log_std_, kLogStdMin, kLogStdMax); }

ActionDistribution Network::distribution(const Observation& obs) const {
  NoGradGuard guard;
  const ObservationBatch batch = make_batch(std::span(&obs, 1), cfg_);
  const Tensor mean = actor_mean(features(batch));
  const Tensor ls = log_std();
  ActionDistribution d;
  for (std::size_t j = 0; j < kActionSize; ++j) {
    d.mean[j] = mean.value()(0, Eigen::Index(j));
    d.log_std[j] = ls.value()(0, Eigen::Index(j));
  }
  return d;
}

double Network::value(const Observation& obs) const {
  NoGradGuard guard;
  const ObservationBatch batch = make_batch(std::span(&obs, 1), cfg_);
  return critic_value(features(batch)).item();
}

std::vector<std::pair<std::string, Tensor>> Network::named_parameters() const {
  std::vector<std::pair<std::string, Tensor>> out;
  const_cast<Network*>(this)->visit(
      [&](const char* name, Tensor& t) { out.emplace_back(name, t); });
  return out;
}

std::vector<Tensor> Network::encoder_parameters() const {
  if (cfg_.encoder == EncoderKind::BiGru) {
    return {gru_fwd_.w_input, gru_fwd_.w_hidden_zr, gru_fwd_.w_hidden_h, gru_fwd_.bias,
            gru_bwd_.w_input, gru_bwd_.w_hidden_zr, gru_bwd_.w_hidden_h, gru_bwd_.bias};
  }
  return {lstm_.w_input, lstm_.w_hidden, lstm_.bias};
}

std::vector<Tensor> Network::actor_parameters() const {
  std::vector<Tensor> out = encoder_parameters();
  for (const Tensor& t : {ln_gain_, ln_bias_, actor_fc1_.weight, actor_fc1_.bias,
                          actor_fc2_.weight, actor_fc2_.bias, actor_out_.weight, actor_out_.bias,
                          log_std_}) {
    out.push_back(t);
  }
  return out;
}

std::vector<Tensor> Network::critic_parameters() const {
  return {critic_fc1_.weight, critic_fc1_.bias, critic_fc2_.weight,
          critic_fc2_.bias,   critic_out_.weight, critic_out_.bias};
}

void Network::clamp_log_std() {
  Matrix& v = log_std_.mutable_value();
  v = v.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
}

Tensor gaussian_log_prob(const Tensor& mean, const Tensor& log_std, const Matrix& actions) {
  const Tensor diff = Tensor(actions) - mean;
  const Tensor z = mul_row(diff, exp(neg(log_std)));
  const Tensor per_dim = add_row(scale(square(z), -0.5), neg(log_std));
  return add_scalar(row_sum(per_dim), -0.5 * kLog2Pi * double(mean.cols()));
}

double log_prob(const ActionDistribution& dist, const Vec2& action) {
  const std::array<double, kActionSize> a{action.x, action.y};
  double lp = 0.0;
  for (std::size_t j = 0; j < kActionSize; ++j) {
    const double z = (a[j] - dist.mean[j]) * std::exp(-dist.log_std[j]);
    lp += -0.5 * z * z - dist.log_std[j] - 0.5 * kLog2Pi;
  }
  return lp;
}

SampledAction sample_action(const ActionDistribution& dist, std::mt19937_64& rng,
                            bool deterministic) {
  SampledAction s;
  if (deterministic) {
    s.action = {dist.mean[0], dist.mean[1]};
  } else {
    std::normal_distribution<double> n01(0.0, 1.0);
    const double e0 = n01(rng);
    const double e1 = n01(rng);
    s.action = {dist.mean[0] + std::exp(dist.log_std[0]) * e0,
                dist.mean[1] + std::exp(dist.log_std[1]) * e1};
  }
  s.logp = log_prob(dist, s.action);
  return s;
}

Tensor clipped_surrogate(const Tensor& logp_new, const Matrix& logp_old, const Matrix& advantages,
                         double clip_eps) {
  const Tensor ratio = exp(logp_new - Tensor(logp_old));
  const Tensor adv(advantages);
  const Tensor unclipped = ratio * adv;
  const Tensor clipped = clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps) * adv;
  return mean(minimum(unclipped, clipped));
}

Adam::Adam(std::vector<Tensor> params, AdamConfig cfg) : params_(std::move(params)), cfg_(cfg) {
  for (const Tensor& p : params_) {
    m_.push_back(Matrix::Zero(p.rows(), p.cols()));
    v_.push_back(Matrix::Zero(p.rows(), p.cols()));
  }
}

void Adam::zero_grad() {
  for (Tensor& p : params_) p.zero_grad();
}

void Adam::step() {
  ++steps_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, double(steps_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, double(steps_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const Matrix& g = params_[i].grad();
    m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * g;
    v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * g.cwiseAbs2();
    params_[i].mutable_value().array() -=
        cfg_.lr * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + cfg_.eps);
  }
}

}  // namespace rvonav::nn
