#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace discover::csv {

inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (char c : data) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

inline std::string hash_hex(std::uint64_t hash) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

// Locale-independent double formatting; shortest round-trip not needed,
// %.12g keeps rows byte-stable across runs.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

// RFC-4180 data rows, preceded by '#'-prefixed metadata lines recording
// seed, generator and config hash so outputs are self-describing.
class Writer {
  public:
    explicit Writer(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open output file: " + path);
    }

    void metadata(std::string_view key, std::string_view value) {
        out_ << "# " << key << ": " << value << "\n";
    }

    void header(const std::vector<std::string>& columns) { write_row(columns); }

    void write_row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i > 0) out_ << ",";
            out_ << fields[i];
        }
        out_ << "\n";
    }

  private:
    std::ofstream out_;
};

} // namespace discover::csv
