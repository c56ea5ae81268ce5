#pragma once

// Structured-text instance files and key=value configs.
//
//   .cls   classical convex class:  "alphabet N" [+ optional "labels ..."],
//          then one "vertex w1 ... wN" line per generator
//   .qst   quantum state: "dim N" then N "row" lines of re,im pairs
//   .povm  POVM: "dim N", then "effect" blocks of N "row" lines each
//   .menu  one POVM file path per line (relative to the menu file)
//   .cfg   key=value lines, '#' comments
//
// Serializers emit the exact shape the parsers read, so round trips are
// identity up to float printing at 17 significant digits.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "convex.hpp"
#include "quantum_menus.hpp"

namespace advtest {

class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& file, const std::string& what)
        : std::runtime_error(file + ": " + what) {}
};

namespace detail {

inline std::vector<std::string> tokens(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

inline double parse_double(const std::string& file, const std::string& tok) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw parse_error(file, "bad number '" + tok + "'");
    }
}

inline Complex parse_complex(const std::string& file, const std::string& tok) {
    const auto comma = tok.find(',');
    if (comma == std::string::npos)
        throw parse_error(file, "expected re,im pair, got '" + tok + "'");
    return {parse_double(file, tok.substr(0, comma)), parse_double(file, tok.substr(comma + 1))};
}

inline std::vector<std::string> content_lines(const std::string& file, std::istream& in) {
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (!tokens(line).empty()) out.push_back(line);
    }
    if (!in.eof() && in.fail()) throw parse_error(file, "read failure");
    return out;
}

inline std::ifstream open_or_throw(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw parse_error(file, "cannot open file");
    return in;
}

inline std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace detail

// --- classical classes -------------------------------------------------------

inline ConvexClass parse_class(const std::string& file, std::istream& in) {
    const auto lines = detail::content_lines(file, in);
    if (lines.empty()) throw parse_error(file, "empty class file");
    auto head = detail::tokens(lines[0]);
    if (head.size() != 2 || head[0] != "alphabet")
        throw parse_error(file, "first line must be 'alphabet N'");
    const long n = std::strtol(head[1].c_str(), nullptr, 10);
    if (n <= 0) throw parse_error(file, "alphabet size must be positive");
    Alphabet ab{std::size_t(n)};
    std::size_t next = 1;
    if (next < lines.size()) {
        auto toks = detail::tokens(lines[next]);
        if (toks[0] == "labels") {
            if (toks.size() != std::size_t(n) + 1)
                throw parse_error(file, "labels line must name every symbol");
            ab = Alphabet(std::vector<std::string>(toks.begin() + 1, toks.end()));
            ++next;
        }
    }
    std::vector<Distribution> verts;
    for (; next < lines.size(); ++next) {
        auto toks = detail::tokens(lines[next]);
        if (toks[0] != "vertex")
            throw parse_error(file, "expected 'vertex ...', got '" + toks[0] + "'");
        if (toks.size() != std::size_t(n) + 1)
            throw parse_error(file, "vertex needs " + std::to_string(n) + " weights");
        std::vector<double> w;
        for (std::size_t i = 1; i < toks.size(); ++i)
            w.push_back(detail::parse_double(file, toks[i]));
        try {
            verts.emplace_back(ab, std::move(w));
        } catch (const std::exception& e) {
            throw parse_error(file, std::string("vertex rejected: ") + e.what());
        }
    }
    if (verts.empty()) throw parse_error(file, "class has no vertices");
    return ConvexClass(ab, std::move(verts));
}

inline ConvexClass load_class(const std::string& file) {
    auto in = detail::open_or_throw(file);
    return parse_class(file, in);
}

inline std::string serialize_class(const ConvexClass& cls) {
    std::ostringstream os;
    os << "alphabet " << cls.alphabet().size << "\n";
    if (!cls.alphabet().labels.empty()) {
        os << "labels";
        for (const auto& l : cls.alphabet().labels) os << ' ' << l;
        os << "\n";
    }
    for (const auto& v : cls.vertices()) {
        os << "vertex";
        for (double w : v.weights()) os << ' ' << detail::fmt(w);
        os << "\n";
    }
    return os.str();
}

// --- quantum states and POVMs ------------------------------------------------

namespace detail {

inline CMat parse_matrix_rows(const std::string& file, const std::vector<std::string>& lines,
                              std::size_t& idx, std::size_t dim) {
    CMat m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r, ++idx) {
        if (idx >= lines.size()) throw parse_error(file, "missing matrix row");
        auto toks = tokens(lines[idx]);
        if (toks[0] != "row" || toks.size() != dim + 1)
            throw parse_error(file, "expected 'row' with " + std::to_string(dim) + " entries");
        for (std::size_t c = 0; c < dim; ++c) m(r, c) = parse_complex(file, toks[c + 1]);
    }
    return m;
}

inline void emit_matrix_rows(std::ostringstream& os, const CMat& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        os << "row";
        for (std::size_t c = 0; c < m.cols(); ++c)
            os << ' ' << fmt(m(r, c).real()) << ',' << fmt(m(r, c).imag());
        os << "\n";
    }
}

inline std::size_t parse_dim_header(const std::string& file,
                                    const std::vector<std::string>& lines) {
    if (lines.empty()) throw parse_error(file, "empty file");
    auto head = tokens(lines[0]);
    if (head.size() != 2 || head[0] != "dim")
        throw parse_error(file, "first line must be 'dim N'");
    const long d = std::strtol(head[1].c_str(), nullptr, 10);
    if (d <= 0 || d > 16) throw parse_error(file, "dim must be in 1..16");
    return std::size_t(d);
}

}  // namespace detail

inline DensityMatrix parse_state(const std::string& file, std::istream& in) {
    const auto lines = detail::content_lines(file, in);
    const std::size_t dim = detail::parse_dim_header(file, lines);
    std::size_t idx = 1;
    CMat m = detail::parse_matrix_rows(file, lines, idx, dim);
    if (idx != lines.size()) throw parse_error(file, "trailing content after state rows");
    try {
        return DensityMatrix(std::move(m));
    } catch (const std::exception& e) {
        throw parse_error(file, std::string("state rejected: ") + e.what());
    }
}

inline DensityMatrix load_state(const std::string& file) {
    auto in = detail::open_or_throw(file);
    return parse_state(file, in);
}

inline std::string serialize_state(const DensityMatrix& rho) {
    std::ostringstream os;
    os << "dim " << rho.dim() << "\n";
    detail::emit_matrix_rows(os, rho.entries());
    return os.str();
}

inline Povm parse_povm(const std::string& file, std::istream& in) {
    const auto lines = detail::content_lines(file, in);
    const std::size_t dim = detail::parse_dim_header(file, lines);
    std::vector<CMat> effects;
    std::size_t idx = 1;
    while (idx < lines.size()) {
        auto toks = detail::tokens(lines[idx]);
        if (toks.size() != 1 || toks[0] != "effect")
            throw parse_error(file, "expected 'effect', got '" + lines[idx] + "'");
        ++idx;
        effects.push_back(detail::parse_matrix_rows(file, lines, idx, dim));
    }
    try {
        return Povm(dim, std::move(effects));
    } catch (const std::exception& e) {
        throw parse_error(file, std::string("povm rejected: ") + e.what());
    }
}

inline Povm load_povm(const std::string& file) {
    auto in = detail::open_or_throw(file);
    return parse_povm(file, in);
}

inline std::string serialize_povm(const Povm& m) {
    std::ostringstream os;
    os << "dim " << m.dim() << "\n";
    for (const auto& e : m.effects()) {
        os << "effect\n";
        detail::emit_matrix_rows(os, e);
    }
    return os.str();
}

// Menu file: one POVM path per content line, resolved against the menu's
// directory.
inline MeasurementMenu load_menu(const std::string& file) {
    auto in = detail::open_or_throw(file);
    const auto lines = detail::content_lines(file, in);
    if (lines.empty()) throw parse_error(file, "menu lists no POVM files");
    const auto base = std::filesystem::path(file).parent_path();
    std::vector<Povm> povms;
    for (const auto& line : lines) {
        const auto toks = detail::tokens(line);
        if (toks.size() != 1) throw parse_error(file, "one POVM path per line");
        povms.push_back(load_povm((base / toks[0]).string()));
    }
    const std::size_t d = povms.front().dim();
    for (const auto& p : povms)
        if (p.dim() != d) throw parse_error(file, "menu mixes POVM dimensions");
    return MeasurementMenu(d, std::move(povms));
}

// --- key=value config --------------------------------------------------------

using ConfigMap = std::map<std::string, std::string>;

inline ConfigMap parse_config(const std::string& file, std::istream& in) {
    ConfigMap out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (detail::tokens(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw parse_error(file, "line " + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw parse_error(file, "line " + std::to_string(lineno) + ": empty key");
        out[key] = val;
    }
    return out;
}

inline ConfigMap load_config(const std::string& file) {
    auto in = detail::open_or_throw(file);
    return parse_config(file, in);
}

}  // namespace advtest
