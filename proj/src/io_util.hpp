#pragma once

// Little-endian binary I/O helpers shared by the dataset and checkpoint
// formats, plus atomic file replacement.

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace icilab::harness::detail {

inline void put_u32(std::string& buf, std::uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    buf.append(b, 4);
}

inline void put_f32(std::string& buf, float v) {
    std::uint32_t u;
    std::memcpy(&u, &v, 4);
    put_u32(buf, u);
}

class Reader {
public:
    explicit Reader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
        if (!in_) throw std::runtime_error("cannot open file: " + path);
    }

    std::uint32_t u32() {
        unsigned char b[4];
        read(reinterpret_cast<char*>(b), 4);
        return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
               (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    }

    float f32() {
        const std::uint32_t u = u32();
        float v;
        std::memcpy(&v, &u, 4);
        return v;
    }

    void f32_block(float* dst, std::size_t count) {
        // bulk path: files are little-endian and so are all supported hosts;
        // fall back to per-value decoding elsewhere if that ever changes
        read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(count * 4));
    }

    std::string bytes(std::size_t n) {
        std::string s(n, '\0');
        read(s.data(), static_cast<std::streamsize>(n));
        return s;
    }

    void expect_magic(const char* magic) {
        const std::string m = bytes(4);
        if (m != magic) throw std::runtime_error(path_ + ": bad magic, expected " + magic);
    }

private:
    void read(char* dst, std::streamsize n) {
        in_.read(dst, n);
        if (in_.gcount() != n) throw std::runtime_error(path_ + ": truncated file");
    }

    std::ifstream in_;
    std::string path_;
};

// write-temp-then-rename so readers never observe a partial file
inline void atomic_write(const std::string& path, const std::string& payload) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open file for writing: " + tmp);
        out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace icilab::harness::detail
