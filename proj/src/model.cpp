#include "model.hpp"

#include <stdexcept>

#include "rng.hpp"

namespace cghi {

Variant variant_from_string(const std::string& name) {
    if (name == "cae") return Variant::Cae;
    if (name == "ccae") return Variant::Ccae;
    if (name == "sr_cae") return Variant::SrCae;
    if (name == "ccae_softrank") return Variant::CcaeSoftrank;
    if (name == "ccae_eb") return Variant::CcaeEb;
    if (name == "ccae_mb") return Variant::CcaeMb;
    if (name == "ccae_me") return Variant::CcaeMe;
    throw std::invalid_argument("unknown model variant: " + name);
}

std::string variant_to_string(Variant v) {
    switch (v) {
        case Variant::Cae: return "cae";
        case Variant::Ccae: return "ccae";
        case Variant::SrCae: return "sr_cae";
        case Variant::CcaeSoftrank: return "ccae_softrank";
        case Variant::CcaeEb: return "ccae_eb";
        case Variant::CcaeMb: return "ccae_mb";
        case Variant::CcaeMe: return "ccae_me";
    }
    throw std::logic_error("unreachable variant");
}

ConstraintToggles toggles_for(Variant v) {
    switch (v) {
        case Variant::Cae: return {false, false, false, false};
        case Variant::Ccae: return {true, true, true, false};
        case Variant::SrCae: return {false, false, false, true};
        case Variant::CcaeSoftrank: return {false, false, true, true};
        case Variant::CcaeEb: return {false, true, true, false};
        case Variant::CcaeMb: return {true, false, true, false};
        case Variant::CcaeMe: return {true, true, false, false};
    }
    throw std::logic_error("unreachable variant");
}

bool has_hi_head(Variant v) { return v != Variant::Cae; }

std::vector<Param*> Model::all_params() const {
    std::vector<Param*> out = theta_e;
    out.insert(out.end(), theta_d.begin(), theta_d.end());
    out.insert(out.end(), theta_hi.begin(), theta_hi.end());
    return out;
}

std::vector<NormBuffer> Model::norm_buffers() const {
    std::vector<NormBuffer> out = encoder.buffers();
    for (NormBuffer b : decoder.buffers()) out.push_back(std::move(b));
    for (NormBuffer b : hi_head.buffers()) out.push_back(std::move(b));
    return out;
}

std::string Model::describe() const {
    std::string out = "variant: " + variant_to_string(variant) + "\nencoder:\n" + encoder.describe() +
                      "\ndecoder:\n" + decoder.describe();
    if (!hi_head.layers.empty()) out += "\nhi_head:\n" + hi_head.describe();
    size_t count = 0;
    for (const Param* p : all_params()) count += p->numel();
    out += "\nparameters: " + std::to_string(count) + "\n";
    return out;
}

Model build_model(Variant v, uint64_t init_seed) {
    Rng rng(init_seed);
    Model m;
    m.variant = v;

    auto conv_block = [&](Stack& stack, const std::string& name, int c_in, int c_out) {
        stack.layers.push_back(
            std::make_unique<Conv1d>(name, c_in, c_out, 3, 2, 1, Init::ReluUniform, rng));
        stack.layers.push_back(std::make_unique<BatchNorm1d>(name + ".bn", c_out));
        stack.layers.push_back(std::make_unique<ReLU>());
    };
    auto deconv_block = [&](Stack& stack, const std::string& name, int c_in, int c_out) {
        stack.layers.push_back(
            std::make_unique<Deconv1d>(name, c_in, c_out, 3, 2, 1, 1, Init::ReluUniform, rng));
        stack.layers.push_back(std::make_unique<BatchNorm1d>(name + ".bn", c_out));
        stack.layers.push_back(std::make_unique<ReLU>());
    };

    // Encoder: (2, 128) -> (64, 64) -> (32, 32) -> (32, 16) -> (16, 8) -> 16.
    conv_block(m.encoder, "enc1", dsp::kAxes, 64);
    conv_block(m.encoder, "enc2", 64, 32);
    conv_block(m.encoder, "enc3", 32, 32);
    conv_block(m.encoder, "enc4", 32, 16);
    m.encoder.layers.push_back(std::make_unique<Flatten>());
    m.encoder.layers.push_back(std::make_unique<Dense>("enc5", 16 * 8, 16, Init::LinearUniform, rng));

    // Decoder mirrors the encoder; the last deconv is the stride-1 linear
    // output projection back to (2, 128).
    m.decoder.layers.push_back(std::make_unique<Dense>("dec0", 16, 16 * 8, Init::LinearUniform, rng));
    m.decoder.layers.push_back(std::make_unique<Unflatten>(16, 8));
    deconv_block(m.decoder, "dec1", 16, 16);
    deconv_block(m.decoder, "dec2", 16, 32);
    deconv_block(m.decoder, "dec3", 32, 32);
    deconv_block(m.decoder, "dec4", 32, 64);
    m.decoder.layers.push_back(
        std::make_unique<Deconv1d>("dec5", 64, dsp::kAxes, 3, 1, 1, 0, Init::LinearUniform, rng));

    if (has_hi_head(v)) {
        m.hi_head.layers.push_back(std::make_unique<Dense>("hi1", 16, 16, Init::LinearUniform, rng));
        m.hi_head.layers.push_back(std::make_unique<Dense>("hi2", 16, 8, Init::LinearUniform, rng));
        m.hi_head.layers.push_back(std::make_unique<Dense>("hi3", 8, 4, Init::LinearUniform, rng));
        m.hi_head.layers.push_back(std::make_unique<Dense>("hi4", 4, 1, Init::LinearUniform, rng));
    }

    m.theta_e = m.encoder.params();
    m.theta_d = m.decoder.params();
    m.theta_hi = m.hi_head.params();
    return m;
}

Model build_micro_model(Variant v, int in_dim, int enc_dim, uint64_t init_seed) {
    Rng rng(init_seed);
    Model m;
    m.variant = v;
    m.encoder.layers.push_back(
        std::make_unique<Dense>("enc", in_dim, enc_dim, Init::LinearUniform, rng, false));
    m.decoder.layers.push_back(
        std::make_unique<Dense>("dec", enc_dim, in_dim, Init::LinearUniform, rng, false));
    if (has_hi_head(v))
        m.hi_head.layers.push_back(
            std::make_unique<Dense>("hi", enc_dim, 1, Init::LinearUniform, rng, false));
    m.theta_e = m.encoder.params();
    m.theta_d = m.decoder.params();
    m.theta_hi = m.hi_head.params();
    return m;
}

Tensor frames_to_tensor(const std::vector<const dsp::Frame*>& frames) {
    if (frames.empty()) throw std::invalid_argument("frames_to_tensor: empty batch");
    Tensor t({static_cast<int>(frames.size()), dsp::kAxes, dsp::kMelBands});
    for (size_t n = 0; n < frames.size(); ++n) {
        const dsp::Frame& f = *frames[n];
        if (f.values.size() != static_cast<size_t>(dsp::kFrameValues))
            throw std::invalid_argument("frames_to_tensor: bad frame width");
        for (int band = 0; band < dsp::kMelBands; ++band)
            for (int axis = 0; axis < dsp::kAxes; ++axis)
                t.at3(static_cast<int>(n), axis, band) =
                    f.values[static_cast<size_t>(band) * dsp::kAxes + axis];
    }
    return t;
}

double reconstruction_loss(const Tensor& x, const Tensor& xhat, std::vector<double>* per_sample) {
    if (!x.same_shape(xhat)) throw std::invalid_argument("reconstruction_loss: shape mismatch");
    const int n = x.dim(0);
    const size_t stride = x.numel() / static_cast<size_t>(n);
    if (per_sample) per_sample->assign(static_cast<size_t>(n), 0.0);
    double total = 0.0;
    for (int t = 0; t < n; ++t) {
        double acc = 0.0;
        const size_t base = static_cast<size_t>(t) * stride;
        for (size_t j = 0; j < stride; ++j) {
            const double d = x.values[base + j] - xhat.values[base + j];
            acc += d * d;
        }
        if (per_sample) (*per_sample)[static_cast<size_t>(t)] = acc;
        total += acc;
    }
    return total / n;
}

Tensor reconstruction_grad(const Tensor& x, const Tensor& xhat, double scale) {
    if (!x.same_shape(xhat)) throw std::invalid_argument("reconstruction_grad: shape mismatch");
    Tensor g(x.shape);
    for (size_t i = 0; i < x.numel(); ++i)
        g.values[i] = 2.0 * scale * (xhat.values[i] - x.values[i]);
    return g;
}

}  // namespace cghi
