#include "mftd/image_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mftd/errors.hpp"

namespace mftd {

namespace {

std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw FormatError("bad number '" + s + "' in CSV");
    return v;
}

}  // namespace

void write_csv(std::ostream& out, const ImageGrid& g) {
    if (!g.lattice) throw DomainError("image grid has no lattice");
    out << "x,y,value\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vec2 p = g.lattice->points[i];
        out << num(p.x) << ',' << num(p.y) << ',' << num(g.values[i]) << '\n';
    }
    if (!out) throw FormatError("failed writing CSV");
}

void write_csv_file(const std::string& path, const ImageGrid& g) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open '" + path + "' for writing");
    write_csv(out, g);
}

ImageGrid read_csv(std::istream& in, std::shared_ptr<const Lattice> lattice) {
    if (!lattice) throw DomainError("read_csv needs a lattice");
    std::string line;
    if (!std::getline(in, line) || line != "x,y,value") throw FormatError("CSV header must be 'x,y,value'");
    ImageGrid g{lattice, std::vector<double>(lattice->size()), {}};
    for (std::size_t i = 0; i < lattice->size(); ++i) {
        if (!std::getline(in, line)) throw FormatError("CSV ended early");
        std::istringstream row(line);
        std::string fx, fy, fv;
        if (!std::getline(row, fx, ',') || !std::getline(row, fy, ',') || !std::getline(row, fv))
            throw FormatError("CSV row needs three fields");
        const Vec2 p{parse(fx), parse(fy)};
        if (!(p == lattice->points[i])) throw FormatError("CSV point does not match the lattice");
        g.values[i] = parse(fv);
    }
    return g;
}

void write_pgm(std::ostream& out, const ImageGrid& g) {
    if (!g.lattice) throw DomainError("image grid has no lattice");
    const int n = g.lattice->n;
    const double lo = g.min();
    const double hi = g.max();
    const double span = hi - lo;
    std::vector<unsigned char> pix(static_cast<std::size_t>(n) * n, 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double t = span > 0.0 ? (g.values[i] - lo) / span : 0.0;
        const int level = static_cast<int>(std::lround(255.0 * t));
        const int top_row = n - 1 - g.lattice->row[i];
        pix[static_cast<std::size_t>(top_row) * n + g.lattice->col[i]] = static_cast<unsigned char>(level);
    }
    out << "P5\n# " << g.meta.functional << " min=" << num(lo) << " max=" << num(hi) << '\n'
        << n << ' ' << n << "\n255\n";
    out.write(reinterpret_cast<const char*>(pix.data()), static_cast<std::streamsize>(pix.size()));
    if (!out) throw FormatError("failed writing PGM");
}

void write_pgm_file(const std::string& path, const ImageGrid& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + path + "' for writing");
    write_pgm(out, g);
}

}  // namespace mftd
