#include "liouville/lvf.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace liouville {

namespace {

static_assert(sizeof(double) == 8, "LVF1 requires IEEE-754 doubles");

void put_u32(std::ostream& os, std::uint32_t v) {
    char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    os.write(buf, 4);
}

void put_f64(std::ostream& os, double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    os.write(buf, 8);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char buf[4];
    is.read(reinterpret_cast<char*>(buf), 4);
    if (!is) throw std::runtime_error("LVF1: truncated header");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& is) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    if (!is) throw std::runtime_error("LVF1: truncated payload");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    double d;
    std::memcpy(&d, &v, 8);
    return d;
}

constexpr char kMagic[4] = {'L', 'V', 'F', '1'};

}  // namespace

void lvf_write(std::ostream& os, const FieldSnapshot& snapshot) {
    os.write(kMagic, 4);
    put_u32(os, static_cast<std::uint32_t>(snapshot.grid.dims()));
    put_u32(os, static_cast<std::uint32_t>(snapshot.grid.n()));
    put_f64(os, snapshot.grid.length());
    put_u32(os, static_cast<std::uint32_t>(snapshot.components.size()));
    for (const ScalarField& f : snapshot.components) {
        if (!(f.grid() == snapshot.grid)) throw std::invalid_argument("LVF1: grid mismatch");
        for (double v : f.values()) put_f64(os, v);
    }
    if (!os) throw std::runtime_error("LVF1: write failed");
}

void lvf_write_file(const std::string& path, const FieldSnapshot& snapshot) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("LVF1: cannot open " + path + " for writing");
    lvf_write(os, snapshot);
}

FieldSnapshot lvf_read(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error("LVF1: bad magic");
    }
    const std::uint32_t dims = get_u32(is);
    const std::uint32_t n = get_u32(is);
    const double length = get_f64(is);
    const std::uint32_t count = get_u32(is);
    if (count == 0 || count > 16) throw std::runtime_error("LVF1: bad component count");

    Grid grid(static_cast<int>(dims), static_cast<int>(n), length);
    FieldSnapshot snapshot{grid, {}};
    for (std::uint32_t c = 0; c < count; ++c) {
        ScalarField f(grid);
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = get_f64(is);
        snapshot.components.push_back(std::move(f));
    }
    return snapshot;
}

FieldSnapshot lvf_read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("LVF1: cannot open " + path);
    return lvf_read(is);
}

FieldSnapshot to_snapshot(const VectorField& v) {
    FieldSnapshot snap{v.grid(), {}};
    for (int d = 0; d < v.dims(); ++d) snap.components.push_back(v.comp(d));
    return snap;
}

FieldSnapshot to_snapshot(const ScalarField& f) { return FieldSnapshot{f.grid(), {f}}; }

VectorField vector_from_snapshot(const FieldSnapshot& snapshot) {
    if (static_cast<int>(snapshot.components.size()) != snapshot.grid.dims()) {
        throw std::runtime_error("LVF1: snapshot is not a vector field");
    }
    VectorField v(snapshot.grid);
    for (int d = 0; d < snapshot.grid.dims(); ++d) {
        v.comp(d) = snapshot.components[static_cast<std::size_t>(d)];
    }
    return v;
}

}  // namespace liouville
