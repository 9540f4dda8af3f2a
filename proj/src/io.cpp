#include "gfsl/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gfsl/errors.hpp"

namespace gfsl {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            os << cells[i];
        }
        os << '\n';
    };
    line(header);
    for (const auto& r : rows) {
        if (r.size() != header.size()) throw DomainError("write_csv: row width differs from header");
        line(r);
    }
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    return out;
}

double parse_double(const std::string& s, int line) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw DomainError("csv line " + std::to_string(line) + ": not a number: '" + s + "'");
    return v;
}

long parse_int(const std::string& s, int line) {
    long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw DomainError("csv line " + std::to_string(line) + ": not an integer: '" + s + "'");
    return v;
}

// Reads rows after checking the header; returns the data cells.
std::vector<std::pair<int, std::vector<std::string>>> read_rows(std::istream& is,
                                                                const std::vector<std::string>& header) {
    std::vector<std::pair<int, std::vector<std::string>>> rows;
    std::string raw;
    int line = 0;
    bool seen_header = false;
    while (std::getline(is, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        auto cells = split(s);
        if (!seen_header) {
            if (cells != header) {
                std::string want;
                for (std::size_t i = 0; i < header.size(); ++i) want += (i ? "," : "") + header[i];
                throw DomainError("csv line " + std::to_string(line) + ": expected header '" + want + "'");
            }
            seen_header = true;
            continue;
        }
        if (cells.size() != header.size())
            throw DomainError("csv line " + std::to_string(line) + ": expected " +
                              std::to_string(header.size()) + " columns");
        rows.emplace_back(line, std::move(cells));
    }
    if (!seen_header) throw DomainError("csv: missing header");
    return rows;
}

}  // namespace

LaplaceSpectrum read_laplace_csv(std::istream& is, int genus) {
    LaplaceSpectrum spectrum;
    spectrum.genus = genus;
    for (auto& [line, c] : read_rows(is, {"mu", "multiplicity"})) {
        LaplaceEntry e;
        e.mu = parse_double(c[0], line);
        e.multiplicity = static_cast<int>(parse_int(c[1], line));
        spectrum.entries.push_back(e);
    }
    spectrum.validate();
    return spectrum;
}

LaplaceSpectrum read_laplace_file(const std::string& path, int genus) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot open Laplace spectrum file: " + path);
    return read_laplace_csv(f, genus);
}

void write_length_spectrum_csv(std::ostream& os, const LengthSpectrum& ls) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& it : ls.iterates())
        rows.push_back({format_double(it.length), std::to_string(it.multiplicity), it.power == 1 ? "1" : "0"});
    write_csv(os, {"length", "multiplicity", "is_primitive"}, rows);
}

LengthSpectrum read_length_spectrum_csv(std::istream& is, int genus) {
    LengthSpectrum ls;
    ls.genus = genus;
    for (auto& [line, c] : read_rows(is, {"length", "multiplicity", "is_primitive"})) {
        double len = parse_double(c[0], line);
        long mult = parse_int(c[1], line);
        long prim = parse_int(c[2], line);
        if (!(len > 0.0) || mult < 1 || (prim != 0 && prim != 1))
            throw DomainError("csv line " + std::to_string(line) + ": invalid length entry");
        ls.cutoff = std::max(ls.cutoff, len);
        if (prim) ls.primitives.push_back({len, static_cast<int>(mult)});
    }
    std::sort(ls.primitives.begin(), ls.primitives.end(),
              [](const LengthEntry& a, const LengthEntry& b) { return a.length < b.length; });
    return ls;
}

}  // namespace gfsl
