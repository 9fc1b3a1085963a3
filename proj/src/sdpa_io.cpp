#include "steerkit/sdpa_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace steerkit {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<SdpEntry> sorted(std::vector<SdpEntry> es) {
    std::sort(es.begin(), es.end(), [](const SdpEntry& a, const SdpEntry& b) {
        if (a.block != b.block) return a.block < b.block;
        if (a.row != b.row) return a.row < b.row;
        return a.col < b.col;
    });
    // Merge duplicates so the output is canonical.
    std::vector<SdpEntry> out;
    for (const auto& e : es) {
        if (!out.empty() && out.back().block == e.block && out.back().row == e.row &&
            out.back().col == e.col)
            out.back().value += e.value;
        else
            out.push_back(e);
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const SdpEntry& e) { return e.value == 0.0; }),
              out.end());
    return out;
}

}  // namespace

std::string export_sdpa(const SdpProblem& problem) {
    PresolvedSdp pre = presolve(problem);
    const SdpProblem& p = pre.reduced;
    std::ostringstream os;
    os << "* steerkit SDPA sparse export\n";
    if (!p.origin.empty()) os << "* origin: " << p.origin << "\n";
    os << "* form: minimize c.x subject to sum_i x_i F_i - F0 >= 0 (block diagonal)\n";
    if (!pre.identity)
        os << "* note: " << problem.eq_rows.size()
           << " equality row(s) eliminated by presolve; variable count reduced from "
           << problem.n_vars << "\n";
    if (p.objective_offset != 0.0)
        os << "* objective_offset: " << fmt(p.objective_offset)
           << " (add to c.x for the original objective)\n";
    os << "* blocks:";
    for (int d : p.block_dims) os << " " << d;
    os << "\n";
    os << p.n_vars << "\n";
    os << p.block_dims.size() << "\n";
    for (size_t b = 0; b < p.block_dims.size(); ++b)
        os << (b ? " " : "") << p.block_dims[b];
    os << "\n";
    for (int i = 0; i < p.n_vars; ++i) os << (i ? " " : "") << fmt(p.objective[i]);
    os << "\n";
    for (const auto& e : sorted(p.offset))
        os << "0 " << e.block + 1 << " " << e.row + 1 << " " << e.col + 1 << " "
           << fmt(e.value) << "\n";
    for (int i = 0; i < p.n_vars; ++i)
        for (const auto& e : sorted(p.constraints[i]))
            os << i + 1 << " " << e.block + 1 << " " << e.row + 1 << " " << e.col + 1
               << " " << fmt(e.value) << "\n";
    return os.str();
}

SdpProblem import_sdpa(const std::string& text) {
    // Strip comments; SDPA also tolerates {},() and commas as separators.
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> data_lines;
    std::string origin;
    constexpr const char* kOriginTag = "* origin: ";
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const char c = line[0];
        if (c == '*' || c == '"') {
            if (line.rfind(kOriginTag, 0) == 0) origin = line.substr(std::strlen(kOriginTag));
            continue;
        }
        for (char& ch : line)
            if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
        bool blank = true;
        for (char ch : line)
            if (!std::isspace(static_cast<unsigned char>(ch))) { blank = false; break; }
        if (!blank) data_lines.push_back(line);
    }
    if (data_lines.size() < 4) throw ParseError("sdpa: truncated input");

    size_t ln = 0;
    auto next_stream = [&]() -> std::istringstream {
        if (ln >= data_lines.size()) throw ParseError("sdpa: unexpected end of input");
        return std::istringstream(data_lines[ln++]);
    };

    SdpProblem p;
    p.origin = origin;
    {
        auto s = next_stream();
        if (!(s >> p.n_vars) || p.n_vars <= 0) throw ParseError("sdpa: bad mDIM");
    }
    int nblock = 0;
    {
        auto s = next_stream();
        if (!(s >> nblock) || nblock <= 0) throw ParseError("sdpa: bad nBLOCK");
    }
    {
        auto s = next_stream();
        for (int b = 0; b < nblock; ++b) {
            int d = 0;
            if (!(s >> d) || d == 0) throw ParseError("sdpa: bad bLOCKsTRUCT");
            p.block_dims.push_back(std::abs(d));
        }
    }
    {
        auto s = next_stream();
        for (int i = 0; i < p.n_vars; ++i) {
            double v = 0.0;
            if (!(s >> v)) throw ParseError("sdpa: objective vector too short");
            p.objective.push_back(v);
        }
    }
    p.constraints.assign(p.n_vars, {});
    while (ln < data_lines.size()) {
        auto s = next_stream();
        int matno, blkno, i, j;
        double v;
        if (!(s >> matno >> blkno >> i >> j >> v))
            throw ParseError("sdpa: bad entry line: " + data_lines[ln - 1]);
        if (matno < 0 || matno > p.n_vars) throw ParseError("sdpa: matno out of range");
        if (blkno < 1 || blkno > nblock) throw ParseError("sdpa: blkno out of range");
        if (i < 1 || j < 1 || i > p.block_dims[blkno - 1] || j > p.block_dims[blkno - 1])
            throw ParseError("sdpa: entry index out of range");
        SdpEntry e{blkno - 1, std::min(i, j) - 1, std::max(i, j) - 1, v};
        if (matno == 0)
            p.offset.push_back(e);
        else
            p.constraints[matno - 1].push_back(e);
    }
    return p;
}

void write_sdpa_file(const SdpProblem& problem, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open for writing: " + path);
    f << export_sdpa(problem);
}

SdpProblem read_sdpa_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return import_sdpa(ss.str());
}

}  // namespace steerkit
