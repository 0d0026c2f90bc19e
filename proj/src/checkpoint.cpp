#include "drgrade/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace drg {

namespace {

constexpr char kMagic[4] = {'D', 'R', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    if (!is) throw IoError("checkpoint: truncated file");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_f64(std::ostream& os, const double* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, &v[i], 8);
        unsigned char b[8];
        for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(bits >> (8 * k));
        os.write(reinterpret_cast<const char*>(b), 8);
    }
}

void read_f64(std::istream& is, double* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        unsigned char b[8];
        is.read(reinterpret_cast<char*>(b), 8);
        if (!is) throw IoError("checkpoint: truncated values");
        std::uint64_t bits = 0;
        for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(b[k]) << (8 * k);
        std::memcpy(&v[i], &bits, 8);
    }
}

}  // namespace

const Checkpoint::Record* Checkpoint::find(const std::string& name) const {
    for (const auto& r : records) {
        if (r.name == name) return &r;
    }
    return nullptr;
}

void save_checkpoint(const std::string& path, const std::string& metadata,
                     const std::vector<Parameter>& params) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("checkpoint: cannot open for write: " + path);
    os.write(kMagic, 4);
    write_u32(os, kVersion);
    write_u32(os, static_cast<std::uint32_t>(metadata.size()));
    os.write(metadata.data(), static_cast<std::streamsize>(metadata.size()));
    write_u32(os, static_cast<std::uint32_t>(params.size()));
    for (const auto& p : params) {
        write_u32(os, static_cast<std::uint32_t>(p.name.size()));
        os.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
        const Shape& s = p.tensor->shape;
        write_u32(os, static_cast<std::uint32_t>(s.n));
        write_u32(os, static_cast<std::uint32_t>(s.c));
        write_u32(os, static_cast<std::uint32_t>(s.h));
        write_u32(os, static_cast<std::uint32_t>(s.w));
        write_f64(os, p.tensor->data(), p.tensor->v.size());
    }
    if (!os) throw IoError("checkpoint: write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("checkpoint: cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0) {
        throw IoError("checkpoint: bad magic in " + path);
    }
    const std::uint32_t version = read_u32(is);
    if (version != kVersion) {
        throw IoError("checkpoint: unsupported version " + std::to_string(version));
    }
    Checkpoint ck;
    const std::uint32_t meta_len = read_u32(is);
    ck.metadata.resize(meta_len);
    is.read(ck.metadata.data(), meta_len);
    const std::uint32_t count = read_u32(is);
    ck.records.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        Checkpoint::Record r;
        const std::uint32_t name_len = read_u32(is);
        r.name.resize(name_len);
        is.read(r.name.data(), name_len);
        const int n = static_cast<int>(read_u32(is));
        const int c = static_cast<int>(read_u32(is));
        const int h = static_cast<int>(read_u32(is));
        const int w = static_cast<int>(read_u32(is));
        r.shape = Shape(n, c, h, w);
        r.values.resize(r.shape.size());
        read_f64(is, r.values.data(), r.values.size());
        ck.records.push_back(std::move(r));
    }
    if (!is) throw IoError("checkpoint: truncated file: " + path);
    return ck;
}

}  // namespace drg
