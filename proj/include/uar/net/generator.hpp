#pragma once

#include <string>
#include <vector>

#include "uar/gnd.hpp"
#include "uar/net/layers.hpp"

namespace uar::net {

// Encoder-decoder translator with skip connections. Three stride-2
// downsamples (input size must be divisible by 8), nearest-neighbor
// upsampling, and three output heads:
//   recon: sigmoid                -> [0,1] image
//   alpha: alpha_min + softplus   -> scale map, > 0 by construction
//   beta:  beta_min + softplus    -> shape map, >= beta_min
// Head biases start at fixed offsets (alpha -3, beta +1.5) so the initial
// scale/shape maps sit in a sensible range instead of softplus(0).
template <class T>
class UnetGenerator {
 public:
  struct Options {
    int in_channels = 3;
    int out_channels = 3;
    int base_width = 32;
    double alpha_min = kAlphaMin;
    double beta_min = kBetaMin;
  };

  struct Output {
    Tensor4<T> recon;
    Tensor4<T> alpha;  // (n,1,h,w)
    Tensor4<T> beta;   // (n,1,h,w)
  };

  UnetGenerator(const Options& opt, Rng& rng)
      : opt_(opt),
        enc0_(opt.in_channels, b(1), 3, 1, 1),
        down1_(b(1), b(2), 3, 2, 1),
        down2_(b(2), b(4), 3, 2, 1),
        down3_(b(4), b(8), 3, 2, 1),
        bott_(b(8), b(8), 3, 1, 1),
        up3a_(b(8), b(4), 3, 1, 1),
        up3b_(b(8), b(4), 3, 1, 1),
        up2a_(b(4), b(2), 3, 1, 1),
        up2b_(b(4), b(2), 3, 1, 1),
        up1a_(b(2), b(1), 3, 1, 1),
        up1b_(b(2), b(1), 3, 1, 1),
        head_recon_(b(1), opt.out_channels, 3, 1, 1),
        head_alpha_(b(1), 1, 3, 1, 1),
        head_beta_(b(1), 1, 3, 1, 1) {
    for (Conv2d<T>* conv : convs()) conv->init(rng);
    for (T& x : head_alpha_.biases()) x = T(kAlphaBiasInit);
    for (T& x : head_beta_.biases()) x = T(kBetaBiasInit);
  }

  static constexpr double kAlphaBiasInit = -3.0;
  static constexpr double kBetaBiasInit = 1.5;

  Output forward(const Tensor4<T>& x) {
    if (x.c != opt_.in_channels) throw std::invalid_argument("generator: channel mismatch");
    if (x.h % 8 != 0 || x.w % 8 != 0)
      throw std::invalid_argument("generator: input size must be divisible by 8");

    e0_ = a_enc0_.forward(enc0_.forward(x));
    e1_ = a_down1_.forward(down1_.forward(e0_));
    e2_ = a_down2_.forward(down2_.forward(e1_));
    e3_ = a_down3_.forward(down3_.forward(e2_));
    bm_ = a_bott_.forward(bott_.forward(e3_));

    d3_ = a_up3a_.forward(up3a_.forward(upsample2x(bm_)));
    d3b_ = a_up3b_.forward(up3b_.forward(concat_channels(d3_, e2_)));
    d2_ = a_up2a_.forward(up2a_.forward(upsample2x(d3b_)));
    d2b_ = a_up2b_.forward(up2b_.forward(concat_channels(d2_, e1_)));
    d1_ = a_up1a_.forward(up1a_.forward(upsample2x(d2b_)));
    d1b_ = a_up1b_.forward(up1b_.forward(concat_channels(d1_, e0_)));

    recon_pre_ = head_recon_.forward(d1b_);
    alpha_pre_ = head_alpha_.forward(d1b_);
    beta_pre_ = head_beta_.forward(d1b_);

    Output out;
    out.recon = recon_pre_;
    for (T& v : out.recon.v) v = static_cast<T>(logistic(static_cast<double>(v)));
    recon_ = out.recon;
    out.alpha = alpha_pre_;
    for (T& v : out.alpha.v)
      v = static_cast<T>(opt_.alpha_min + stable_softplus(static_cast<double>(v)));
    out.beta = beta_pre_;
    for (T& v : out.beta.v)
      v = static_cast<T>(opt_.beta_min + stable_softplus(static_cast<double>(v)));
    return out;
  }

  // Backward from head-output gradients; returns d(input) and accumulates
  // parameter gradients.
  Tensor4<T> backward(const Tensor4<T>& d_recon, const Tensor4<T>& d_alpha,
                      const Tensor4<T>& d_beta) {
    Tensor4<T> dr = d_recon;
    for (std::size_t i = 0; i < dr.v.size(); ++i) {
      const double s = static_cast<double>(recon_.v[i]);
      dr.v[i] = static_cast<T>(static_cast<double>(dr.v[i]) * s * (1.0 - s));
    }
    Tensor4<T> da = d_alpha;
    for (std::size_t i = 0; i < da.v.size(); ++i)
      da.v[i] =
          static_cast<T>(static_cast<double>(da.v[i]) * logistic(static_cast<double>(alpha_pre_.v[i])));
    Tensor4<T> db = d_beta;
    for (std::size_t i = 0; i < db.v.size(); ++i)
      db.v[i] =
          static_cast<T>(static_cast<double>(db.v[i]) * logistic(static_cast<double>(beta_pre_.v[i])));

    Tensor4<T> d_d1b = head_recon_.backward(dr);
    add_into(d_d1b, head_alpha_.backward(da));
    add_into(d_d1b, head_beta_.backward(db));

    Tensor4<T> d_cat1 = up1b_.backward(a_up1b_.backward(d_d1b));
    auto [d_d1, d_e0_skip] = split_channels(d_cat1, b(1));
    Tensor4<T> d_u1 = up1a_.backward(a_up1a_.backward(d_d1));
    Tensor4<T> d_d2b = upsample2x_backward(d_u1);

    Tensor4<T> d_cat2 = up2b_.backward(a_up2b_.backward(d_d2b));
    auto [d_d2, d_e1_skip] = split_channels(d_cat2, b(2));
    Tensor4<T> d_u2 = up2a_.backward(a_up2a_.backward(d_d2));
    Tensor4<T> d_d3b = upsample2x_backward(d_u2);

    Tensor4<T> d_cat3 = up3b_.backward(a_up3b_.backward(d_d3b));
    auto [d_d3, d_e2_skip] = split_channels(d_cat3, b(4));
    Tensor4<T> d_u3 = up3a_.backward(a_up3a_.backward(d_d3));
    Tensor4<T> d_bm = upsample2x_backward(d_u3);

    Tensor4<T> d_e3 = bott_.backward(a_bott_.backward(d_bm));
    Tensor4<T> d_e2 = down3_.backward(a_down3_.backward(d_e3));
    add_into(d_e2, d_e2_skip);
    Tensor4<T> d_e1 = down2_.backward(a_down2_.backward(d_e2));
    add_into(d_e1, d_e1_skip);
    Tensor4<T> d_e0 = down1_.backward(a_down1_.backward(d_e1));
    add_into(d_e0, d_e0_skip);
    return enc0_.backward(a_enc0_.backward(d_e0));
  }

  void zero_grad() {
    for (Conv2d<T>* conv : convs()) conv->zero_grad();
  }

  std::vector<ParamView<T>> params() {
    std::vector<ParamView<T>> out;
    for (Conv2d<T>* conv : convs())
      for (auto p : conv->params()) out.push_back(p);
    return out;
  }

  std::string arch_string(int image_size) const {
    return "unet4/base" + std::to_string(opt_.base_width) + "/in" +
           std::to_string(opt_.in_channels) + "/out" + std::to_string(opt_.out_channels) +
           "/img" + std::to_string(image_size) + "/amin" + std::to_string(opt_.alpha_min) +
           "/bmin" + std::to_string(opt_.beta_min);
  }

  const Options& options() const { return opt_; }

 private:
  int b(int mult) const { return opt_.base_width * mult; }

  static void add_into(Tensor4<T>& dst, const Tensor4<T>& src) {
    for (std::size_t i = 0; i < dst.v.size(); ++i) dst.v[i] += src.v[i];
  }

  std::vector<Conv2d<T>*> convs() {
    return {&enc0_, &down1_, &down2_, &down3_, &bott_, &up3a_, &up3b_,
            &up2a_, &up2b_, &up1a_, &up1b_, &head_recon_, &head_alpha_, &head_beta_};
  }

  Options opt_;
  Conv2d<T> enc0_, down1_, down2_, down3_, bott_;
  Conv2d<T> up3a_, up3b_, up2a_, up2b_, up1a_, up1b_;
  Conv2d<T> head_recon_, head_alpha_, head_beta_;
  LeakyRelu<T> a_enc0_, a_down1_, a_down2_, a_down3_, a_bott_;
  LeakyRelu<T> a_up3a_, a_up3b_, a_up2a_, a_up2b_, a_up1a_, a_up1b_;

  Tensor4<T> e0_, e1_, e2_, e3_, bm_, d3_, d3b_, d2_, d2b_, d1_, d1b_;
  Tensor4<T> recon_pre_, alpha_pre_, beta_pre_, recon_;
};

}  // namespace uar::net
