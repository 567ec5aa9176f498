#include "facsca/ca.hpp"

#include "facsca/error.hpp"

namespace facsca::ca {

Lattice::Lattice(int dim) : dim_(dim) {
    if (dim < 1) throw Error(errc::domain, "lattice dimension must be >= 1");
    cells_.assign(static_cast<size_t>(dim) * dim, 0);
}

uint8_t Lattice::at(int row, int col) const {
    if (row < 0 || row >= dim_ || col < 0 || col >= dim_)
        throw Error(errc::domain, "invalid cell address (" + std::to_string(row) + "," +
                                      std::to_string(col) + ") in " + std::to_string(dim_) +
                                      "x" + std::to_string(dim_) + " lattice");
    return cells_[static_cast<size_t>(row) * dim_ + col];
}

void Lattice::set(int row, int col, uint8_t value) {
    if (value > 1) throw Error(errc::domain, "cell state must be 0 or 1");
    if (row < 0 || row >= dim_ || col < 0 || col >= dim_)
        throw Error(errc::domain, "invalid cell address");
    cells_[static_cast<size_t>(row) * dim_ + col] = value;
}

uint8_t Lattice::at_or_dead(int row, int col) const {
    if (row < 0 || row >= dim_ || col < 0 || col >= dim_) return 0;
    return cells_[static_cast<size_t>(row) * dim_ + col];
}

int Lattice::active_count() const {
    int n = 0;
    for (uint8_t c : cells_) n += c;
    return n;
}

CellularSpace CellularSpace::of_dim(int m) {
    if (m < 1 || m > 6)
        throw Error(errc::domain, "cellular space dimension must be in 1..6, got " +
                                      std::to_string(m));
    CellularSpace s;
    s.lattice_dim = m;
    return s;
}

int rule_power(int row, int col) {
    static constexpr int powers[3][3] = {{6, 7, 8}, {5, 0, 1}, {4, 3, 2}};
    if (row < 0 || row > 2 || col < 0 || col > 2)
        throw Error(errc::domain, "mask position outside 3x3 grid");
    return powers[row][col];
}

int rule_number(const DependencyMask& mask) {
    int n = 0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            if (mask.grid[r][c]) n += 1 << rule_power(r, c);
    return n;
}

DependencyMask mask_of(int number) {
    if (number < 0 || number > 511)
        throw Error(errc::domain, "rule number must be in 0..511, got " +
                                      std::to_string(number));
    DependencyMask m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            m.grid[r][c] = (number >> rule_power(r, c)) & 1;
    return m;
}

std::vector<DependencyMask> enumerate_rules() {
    std::vector<DependencyMask> rules;
    rules.reserve(512);
    for (int n = 0; n < 512; ++n) rules.push_back(mask_of(n));
    return rules;
}

DependencyMask transpose_rule(const DependencyMask& mask) {
    DependencyMask t;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) t.grid[c][r] = mask.grid[r][c];
    return t;
}

std::vector<uint8_t> rule_column_vector(const Lattice& lattice) {
    std::vector<uint8_t> bits;
    bits.reserve(static_cast<size_t>(lattice.dim()) * lattice.dim());
    for (int r = 0; r < lattice.dim(); ++r)
        for (int c = 0; c < lattice.dim(); ++c) bits.push_back(lattice.at(r, c));
    return bits;
}

std::array<uint8_t, 5> neighborhood_state(const CellularSpace& space,
                                          const Lattice& lattice,
                                          int row, int col) {
    if (lattice.dim() != space.lattice_dim)
        throw Error(errc::domain, "lattice dimension does not match cellular space");
    if (row < 0 || row >= lattice.dim() || col < 0 || col >= lattice.dim())
        throw Error(errc::domain, "invalid cell address (" + std::to_string(row) + "," +
                                      std::to_string(col) + ")");
    return {lattice.at(row, col),
            lattice.at_or_dead(row - 1, col),
            lattice.at_or_dead(row, col - 1),
            lattice.at_or_dead(row + 1, col),
            lattice.at_or_dead(row, col + 1)};
}

Lattice step(const CellularSpace& space, const Lattice& lattice) {
    if (lattice.dim() != space.lattice_dim)
        throw Error(errc::domain, "lattice dimension does not match cellular space");
    const int m = lattice.dim();
    Lattice next(m);
    // All reads hit the time-t lattice; `next` only accumulates activations.
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            if (!lattice.at(r, c)) continue;
            const uint8_t north = lattice.at_or_dead(r - 1, c);
            const uint8_t west = lattice.at_or_dead(r, c - 1);
            const uint8_t south = lattice.at_or_dead(r + 1, c);
            const uint8_t east = lattice.at_or_dead(r, c + 1);
            const bool all_axial_dead = !north && !west && !south && !east;
            const bool fires = all_axial_dead || (!north && !west) || (!south && !east);
            if (!fires) {
                next.set(r, c, 1);
                continue;
            }
            const bool ne_in = r - 1 >= 0 && c + 1 < m;
            const bool sw_in = r + 1 < m && c - 1 >= 0;
            if (ne_in)
                next.set(r - 1, c + 1, 1);
            else if (sw_in)
                next.set(r + 1, c - 1, 1);
            else
                next.set(r, c, 1); // no diagonal exists; activation is retained
        }
    }
    return next;
}

std::vector<uint8_t> diagonal_bits(const Lattice& lattice) {
    std::vector<uint8_t> bits(static_cast<size_t>(lattice.dim()));
    for (int i = 0; i < lattice.dim(); ++i) bits[static_cast<size_t>(i)] = lattice.at(i, i);
    return bits;
}

std::string bits_to_string(const std::vector<uint8_t>& bits) {
    std::string s;
    s.reserve(bits.size());
    for (uint8_t b : bits) s.push_back(b ? '1' : '0');
    return s;
}

} // namespace facsca::ca
