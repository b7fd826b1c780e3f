// SPDX-License-Identifier: Apache-2.0
#include "checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "error.hpp"

namespace siamdiff {

uint64_t fnv1a64(const void* data, size_t n) {
    const auto* p = static_cast<const uint8_t*>(data);
    uint64_t h = 0xcbf29ce484222325ULL;
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

namespace {

constexpr char kMagic[4] = {'S', 'D', 'C', '1'};
constexpr uint32_t kVersion = 1;

void put_u16(std::string& out, uint16_t v) {
    out.push_back(char(v & 0xff));
    out.push_back(char(v >> 8));
}
void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

struct Reader {
    const std::string& buf;
    size_t pos = 0;
    explicit Reader(const std::string& b) : buf(b) {}
    void need(size_t n) const {
        if (pos + n > buf.size()) throw IntegrityError("checkpoint: truncated file");
    }
    uint16_t u16() {
        need(2);
        uint16_t v = uint16_t(uint8_t(buf[pos])) | uint16_t(uint8_t(buf[pos + 1])) << 8;
        pos += 2;
        return v;
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= uint32_t(uint8_t(buf[pos + size_t(i)])) << (8 * i);
        pos += 4;
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= uint64_t(uint8_t(buf[pos + size_t(i)])) << (8 * i);
        pos += 8;
        return v;
    }
    std::string bytes(size_t n) {
        need(n);
        std::string s = buf.substr(pos, n);
        pos += n;
        return s;
    }
};

}  // namespace

void save_checkpoint(const std::string& path, const ModelParams& params, uint64_t arch_digest) {
    std::string payload;
    struct DirEntry {
        std::string name;
        uint32_t rows, cols;
        uint64_t offset, count;
    };
    std::vector<DirEntry> dir;
    for (const auto& [name, t] : params.tensors) {
        DirEntry e{name, uint32_t(t.rows), uint32_t(t.cols), payload.size(), uint64_t(t.size())};
        for (double x : t.v) {
            const uint32_t bits = std::bit_cast<uint32_t>(float(x));
            for (int i = 0; i < 4; ++i) payload.push_back(char((bits >> (8 * i)) & 0xff));
        }
        dir.push_back(std::move(e));
    }

    std::string out;
    out.append(kMagic, 4);
    put_u32(out, kVersion);
    put_u64(out, arch_digest);
    put_u32(out, uint32_t(dir.size()));
    for (const auto& e : dir) {
        put_u16(out, uint16_t(e.name.size()));
        out += e.name;
        put_u32(out, e.rows);
        put_u32(out, e.cols);
        put_u64(out, e.offset);
        put_u64(out, e.count);
    }
    put_u64(out, payload.size());
    put_u64(out, fnv1a64(payload.data(), payload.size()));
    out += payload;

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("checkpoint: cannot open for writing: " + path);
    f.write(out.data(), std::streamsize(out.size()));
    if (!f) throw DataError("checkpoint: write failed: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("checkpoint: cannot open: " + path);
    std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    Reader r(buf);
    const std::string magic = r.bytes(4);
    if (std::memcmp(magic.data(), kMagic, 4) != 0)
        throw IntegrityError("checkpoint: bad magic in " + path);
    if (r.u32() != kVersion) throw IntegrityError("checkpoint: unsupported version");
    LoadedCheckpoint out;
    out.arch_digest = r.u64();
    const uint32_t count = r.u32();

    struct DirEntry {
        std::string name;
        uint32_t rows, cols;
        uint64_t offset, n;
    };
    std::vector<DirEntry> dir(count);
    uint64_t expected_offset = 0;
    for (auto& e : dir) {
        e.name = r.bytes(r.u16());
        e.rows = r.u32();
        e.cols = r.u32();
        e.offset = r.u64();
        e.n = r.u64();
        if (uint64_t(e.rows) * e.cols != e.n)
            throw IntegrityError("checkpoint: directory shape/count mismatch for " + e.name);
        if (e.offset != expected_offset)
            throw IntegrityError("checkpoint: overlapping or out-of-order payload offsets");
        expected_offset += e.n * 4;
    }
    const uint64_t payload_size = r.u64();
    const uint64_t stored_digest = r.u64();
    if (payload_size != expected_offset)
        throw IntegrityError("checkpoint: payload size disagrees with directory");
    const std::string payload = r.bytes(size_t(payload_size));
    if (fnv1a64(payload.data(), payload.size()) != stored_digest)
        throw IntegrityError("checkpoint: payload digest mismatch (file corrupted)");

    for (const auto& e : dir) {
        Tensor t(int64_t(e.rows), int64_t(e.cols));
        for (uint64_t i = 0; i < e.n; ++i) {
            uint32_t bits = 0;
            for (int b = 0; b < 4; ++b)
                bits |= uint32_t(uint8_t(payload[size_t(e.offset + i * 4 + uint64_t(b))]))
                        << (8 * b);
            t.v[size_t(i)] = double(std::bit_cast<float>(bits));
        }
        out.params.tensors[e.name] = std::move(t);
    }
    return out;
}

ModelParams load_checkpoint_checked(const std::string& path, uint64_t expected_arch_digest) {
    LoadedCheckpoint ck = load_checkpoint(path);
    if (ck.arch_digest != expected_arch_digest)
        throw ConfigError("checkpoint: architecture digest mismatch (checkpoint was written for "
                          "a different configuration)");
    return std::move(ck.params);
}

}  // namespace siamdiff
