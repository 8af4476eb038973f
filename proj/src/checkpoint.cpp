#include "hofnet/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace hofnet {

namespace {
constexpr char kMagic[4] = {'H', 'O', 'F', '1'};
}

void write_u32(std::ostream& os, std::uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    os.write(b, 4);
}

std::uint32_t read_u32(std::istream& is) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        throw FormatError("checkpoint: truncated u32");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_f64(std::ostream& os, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    os.write(b, 8);
}

double read_f64(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8))
        throw FormatError("checkpoint: truncated f64");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

void write_params_block(std::ostream& os, const FlatParams& params) {
    validate(params.spec);
    if (params.theta.size() != count_params(params.spec))
        throw SpecError("write_params_block: theta length mismatch");
    os.write(kMagic, 4);
    write_u32(os, static_cast<std::uint32_t>(params.spec.layer_sizes.size()));
    for (int s : params.spec.layer_sizes) write_u32(os, static_cast<std::uint32_t>(s));
    write_u32(os, params.spec.activation == Activation::Relu ? 0u : 1u);
    for (double v : params.theta) write_f64(os, v);
}

FlatParams read_params_block(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw FormatError("checkpoint: bad magic");
    const std::uint32_t n_sizes = read_u32(is);
    if (n_sizes < 2 || n_sizes > 64)
        throw FormatError("checkpoint: implausible layer count");
    FlatParams p;
    for (std::uint32_t i = 0; i < n_sizes; ++i) {
        const std::uint32_t s = read_u32(is);
        if (s == 0 || s > (1u << 24)) throw FormatError("checkpoint: bad layer size");
        p.spec.layer_sizes.push_back(static_cast<int>(s));
    }
    const std::uint32_t act = read_u32(is);
    if (act > 1) throw FormatError("checkpoint: bad activation code");
    p.spec.activation = act == 0 ? Activation::Relu : Activation::Tanh;
    const std::size_t n = count_params(p.spec);
    p.theta.reserve(n);
    for (std::size_t i = 0; i < n; ++i) p.theta.push_back(read_f64(is));
    return p;
}

void save_params(const std::string& path, const FlatParams& params) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open for writing: " + path);
    write_params_block(f, params);
    if (!f) throw FormatError("write failed: " + path);
}

FlatParams load_params(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open: " + path);
    return read_params_block(f);
}

} // namespace hofnet
