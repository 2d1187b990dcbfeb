#include "wfrpca/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wfrpca {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
    throw std::runtime_error(path.string() + ": " + what);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": cannot open for reading");
    return in;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_matrix(const DenseMatrix& m, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << m.rows() << ' ' << m.cols() << '\n';
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << format_full(m(i, j));
        }
        out << '\n';
    }
    if (!out) fail(path, "write failed");
}

DenseMatrix read_matrix(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    int rows = 0, cols = 0;
    if (!(in >> rows >> cols)) fail(path, "malformed matrix header");
    if (rows <= 0 || cols <= 0) fail(path, "non-positive matrix dimensions");
    std::vector<double> entries(static_cast<std::size_t>(rows) * cols);
    for (auto& v : entries)
        if (!(in >> v)) fail(path, "truncated matrix body");
    return {rows, cols, std::move(entries)};
}

void write_mask(const ObservationMask& mask, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    out << mask.rows() << ' ' << mask.cols() << ' ' << mask.count() << '\n';
    for (const auto& [i, j] : mask.pairs()) out << i << ' ' << j << '\n';
    if (!out) fail(path, "write failed");
}

ObservationMask read_mask(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    int rows = 0, cols = 0;
    long long count = 0;
    if (!(in >> rows >> cols >> count)) fail(path, "malformed mask header");
    if (count < 0) fail(path, "negative mask count");
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(count));
    for (long long k = 0; k < count; ++k) {
        int i = 0, j = 0;
        if (!(in >> i >> j)) fail(path, "truncated mask body");
        pairs.emplace_back(i, j);
    }
    return {rows, cols, std::move(pairs)};
}

KeyValueList parse_flat_text(const std::string& text) {
    KeyValueList entries;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("line " + std::to_string(lineno) +
                                     ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("line " + std::to_string(lineno) + ": empty key");
        entries.emplace_back(std::move(key), std::move(value));
    }
    return entries;
}

KeyValueList parse_flat_file(const std::filesystem::path& path) {
    std::ifstream in = open_in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_flat_text(buf.str());
    } catch (const std::runtime_error& e) {
        fail(path, e.what());
    }
}

void write_flat_file(const KeyValueList& entries, const std::filesystem::path& path) {
    std::ofstream out = open_out(path);
    for (const auto& [key, value] : entries) out << key << " = " << value << '\n';
    if (!out) fail(path, "write failed");
}

}  // namespace wfrpca
