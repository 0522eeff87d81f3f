#pragma once

#include <string>
#include <vector>

#include "uar/net/layers.hpp"

namespace uar::net {

// Patch-style convolutional discriminator: a grid of realness scores,
// one per receptive-field patch. For a 64x64 input the score map is 6x6
// (three stride-2 4x4 convs, then two stride-1 4x4 convs, all pad 1).
template <class T>
class PatchDiscriminator {
 public:
  struct Options {
    int in_channels = 6;  // source + candidate, channel-concatenated
    int base_width = 32;
  };

  PatchDiscriminator(const Options& opt, Rng& rng)
      : opt_(opt),
        c1_(opt.in_channels, b(1), 4, 2, 1),
        c2_(b(1), b(2), 4, 2, 1),
        c3_(b(2), b(4), 4, 2, 1),
        c4_(b(4), b(4), 4, 1, 1),
        out_(b(4), 1, 4, 1, 1) {
    for (Conv2d<T>* conv : convs()) conv->init(rng);
  }

  Tensor4<T> forward(const Tensor4<T>& x) {
    if (x.c != opt_.in_channels) throw std::invalid_argument("discriminator: channel mismatch");
    Tensor4<T> t = a1_.forward(c1_.forward(x));
    t = a2_.forward(c2_.forward(t));
    t = a3_.forward(c3_.forward(t));
    t = a4_.forward(c4_.forward(t));
    return out_.forward(t);
  }

  Tensor4<T> backward(const Tensor4<T>& d_scores) {
    Tensor4<T> d = out_.backward(d_scores);
    d = c4_.backward(a4_.backward(d));
    d = c3_.backward(a3_.backward(d));
    d = c2_.backward(a2_.backward(d));
    return c1_.backward(a1_.backward(d));
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

  std::string arch_string() const {
    return "patch4/base" + std::to_string(opt_.base_width) + "/in" +
           std::to_string(opt_.in_channels);
  }

  int score_size(int in) const {
    int s = in;
    for (int i = 0; i < 3; ++i) s = (s + 2 - 4) / 2 + 1;
    s = (s + 2 - 4) / 1 + 1;
    s = (s + 2 - 4) / 1 + 1;
    return s;
  }

 private:
  int b(int mult) const { return opt_.base_width * mult; }

  std::vector<Conv2d<T>*> convs() { return {&c1_, &c2_, &c3_, &c4_, &out_}; }

  Options opt_;
  Conv2d<T> c1_, c2_, c3_, c4_, out_;
  LeakyRelu<T> a1_, a2_, a3_, a4_;
};

}  // namespace uar::net
