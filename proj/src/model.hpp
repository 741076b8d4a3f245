#pragma once

#include <string>
#include <vector>

#include "layers.hpp"
#include "mel.hpp"
#include "tensor.hpp"

namespace cghi {

// Model variants: the plain autoencoder baseline, the constrained
// autoencoder, the soft-rank baseline, the soft-rank/bounds hybrid, and the
// constraint ablations (eb = energy+bounds, mb = mono+bounds, me = mono+energy).
enum class Variant { Cae, Ccae, SrCae, CcaeSoftrank, CcaeEb, CcaeMb, CcaeMe };

Variant variant_from_string(const std::string& name);
std::string variant_to_string(Variant v);

struct ConstraintToggles {
    bool mono = false;
    bool ene = false;
    bool bounds = false;
    bool softrank = false;  // adds the soft-rank loss term
};

ConstraintToggles toggles_for(Variant v);
bool has_hi_head(Variant v);

// Autoencoder with an optional scalar HI head attached to the 16-dim
// encoding. Parameters are grouped so the update rule can treat encoder,
// decoder and head differently.
struct Model {
    Variant variant = Variant::Cae;
    Stack encoder;
    Stack decoder;
    Stack hi_head;
    std::vector<Param*> theta_e;
    std::vector<Param*> theta_d;
    std::vector<Param*> theta_hi;

    std::vector<Param*> all_params() const;
    // Batchnorm running statistics; saved and restored with the parameters so
    // eval-mode forwards see the statistics the model trained into.
    std::vector<NormBuffer> norm_buffers() const;
    std::string describe() const;
};

// The 128-band, 2-axis architecture: four stride-2 conv blocks (64, 32, 32,
// 16 filters, batchnorm + relu) down to length 8, dense to a 16-dim
// encoding; mirrored decoder ending in a stride-1 2-filter deconv; linear
// dense HI head 16 -> 16 -> 8 -> 4 -> 1.
Model build_model(Variant v, uint64_t init_seed);

// Tiny fully linear model (dense chains without bias) used by update-rule
// oracles; layer widths are (encoder) in->enc, (decoder) enc->in,
// (head) enc->1.
Model build_micro_model(Variant v, int in_dim, int enc_dim, uint64_t init_seed);

// Packs frames into a (N, axes, bands) tensor.
Tensor frames_to_tensor(const std::vector<const dsp::Frame*>& frames);

// Per-sample squared reconstruction error ||x_t - xhat_t||^2 (sum over
// elements of the sample). Returns the batch mean; fills per_sample if given.
double reconstruction_loss(const Tensor& x, const Tensor& xhat, std::vector<double>* per_sample = nullptr);

// d(loss)/d(xhat) where loss = scale * sum_t ||x_t - xhat_t||^2.
Tensor reconstruction_grad(const Tensor& x, const Tensor& xhat, double scale);

}  // namespace cghi
