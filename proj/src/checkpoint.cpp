#include "checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace cghi {

namespace {

constexpr char kMagic[8] = {'C', 'G', 'H', 'I', 'C', 'P', '0', '1'};

void write_u32(std::ostream& os, uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void write_f64(std::ostream& os, const double* p, size_t n) {
    os.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
}
uint32_t read_u32(std::istream& is) {
    uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 4);
    if (!is) throw std::runtime_error("checkpoint: truncated file");
    return v;
}
std::string read_str(std::istream& is) {
    const uint32_t len = read_u32(is);
    if (len > (1u << 20)) throw std::runtime_error("checkpoint: implausible string length");
    std::string s(len, '\0');
    is.read(s.data(), len);
    if (!is) throw std::runtime_error("checkpoint: truncated file");
    return s;
}
void write_str(std::ostream& os, const std::string& s) {
    write_u32(os, static_cast<uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

static_assert(sizeof(double) == 8, "checkpoint format assumes 64-bit doubles");

}  // namespace

void save_checkpoint(const std::string& path, const std::string& tag,
                     const std::vector<const Param*>& params,
                     const std::vector<NormBuffer>& buffers) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("checkpoint: cannot open for write: " + path);
    os.write(kMagic, 8);
    write_str(os, tag);
    write_u32(os, static_cast<uint32_t>(params.size() + buffers.size()));
    for (const Param* p : params) {
        write_str(os, p->name);
        write_u32(os, static_cast<uint32_t>(p->shape.size()));
        for (int d : p->shape) write_u32(os, static_cast<uint32_t>(d));
        write_f64(os, p->value.data(), p->numel());
    }
    for (const NormBuffer& b : buffers) {
        write_str(os, b.name);
        write_u32(os, 1);
        write_u32(os, static_cast<uint32_t>(b.data->size()));
        write_f64(os, b.data->data(), b.data->size());
    }
    if (!os) throw std::runtime_error("checkpoint: write failed: " + path);

    std::ofstream manifest(path + ".manifest.txt", std::ios::trunc);
    if (!manifest) throw std::runtime_error("checkpoint: cannot open manifest for write");
    manifest << "tag " << tag << "\n";
    for (const Param* p : params) {
        manifest << p->name;
        for (int d : p->shape) manifest << " " << d;
        manifest << "\n";
    }
    for (const NormBuffer& b : buffers) manifest << b.name << " " << b.data->size() << "\n";
}

void load_checkpoint(const std::string& path, const std::string& expected_tag,
                     const std::vector<Param*>& params,
                     const std::vector<NormBuffer>& buffers) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint: cannot open: " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("checkpoint: bad magic in " + path);
    const std::string tag = read_str(is);
    if (!expected_tag.empty() && tag != expected_tag)
        throw std::runtime_error("checkpoint: tag mismatch, file has '" + tag + "', expected '" +
                                 expected_tag + "'");
    const uint32_t count = read_u32(is);
    if (count != params.size() + buffers.size())
        throw std::runtime_error("checkpoint: tensor count mismatch");
    for (Param* p : params) {
        const std::string name = read_str(is);
        if (name != p->name)
            throw std::runtime_error("checkpoint: parameter name mismatch: file '" + name +
                                     "' vs model '" + p->name + "'");
        const uint32_t ndim = read_u32(is);
        std::vector<int> shape(ndim);
        for (auto& d : shape) d = static_cast<int>(read_u32(is));
        if (shape != p->shape) throw std::runtime_error("checkpoint: shape mismatch for " + p->name);
        is.read(reinterpret_cast<char*>(p->value.data()),
                static_cast<std::streamsize>(p->numel() * sizeof(double)));
        if (!is) throw std::runtime_error("checkpoint: truncated payload for " + p->name);
    }
    for (const NormBuffer& b : buffers) {
        const std::string name = read_str(is);
        if (name != b.name)
            throw std::runtime_error("checkpoint: buffer name mismatch: file '" + name +
                                     "' vs model '" + b.name + "'");
        const uint32_t ndim = read_u32(is);
        if (ndim != 1 || read_u32(is) != b.data->size())
            throw std::runtime_error("checkpoint: shape mismatch for " + b.name);
        is.read(reinterpret_cast<char*>(b.data->data()),
                static_cast<std::streamsize>(b.data->size() * sizeof(double)));
        if (!is) throw std::runtime_error("checkpoint: truncated payload for " + b.name);
    }
}

std::string checkpoint_tag(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint: cannot open: " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("checkpoint: bad magic in " + path);
    return read_str(is);
}

}  // namespace cghi
