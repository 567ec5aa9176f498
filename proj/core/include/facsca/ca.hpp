#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace facsca::ca {

/// M x M binary lattice. One lattice carries one generation of a facial
/// region's rule matrix; cells are 0 (dead) or 1 (active).
class Lattice {
public:
    explicit Lattice(int dim);

    int dim() const { return dim_; }
    uint8_t at(int row, int col) const;
    void set(int row, int col, uint8_t value);

    /// Out-of-bounds positions read as dead (null boundary).
    uint8_t at_or_dead(int row, int col) const;

    int active_count() const;

    bool operator==(const Lattice& other) const = default;

private:
    int dim_;
    std::vector<uint8_t> cells_; // row-major
};

enum class Neighborhood { VonNeumann5 };
enum class Boundary { Null };

/// The 4-tuple cellular space: lattice dimension, binary states, von Neumann
/// neighborhood and null boundary. M is restricted to the six region sizes.
struct CellularSpace {
    int lattice_dim = 3;
    Neighborhood neighborhood = Neighborhood::VonNeumann5;
    Boundary boundary = Boundary::Null;

    static CellularSpace of_dim(int m); // throws unless m in 1..6
};

/// 3x3 grid of neighbor dependencies. Numbering uses the power-of-two layout
///   64 128 256
///   32   1   2
///   16   8   4
/// so rules 0..511 biject with masks.
struct DependencyMask {
    std::array<std::array<uint8_t, 3>, 3> grid{};

    bool operator==(const DependencyMask& other) const = default;
};

/// Power-of-two exponent at each mask position.
int rule_power(int row, int col);

int rule_number(const DependencyMask& mask);
DependencyMask mask_of(int rule_number); // throws outside 0..511

/// All 512 masks, ordered by rule number.
std::vector<DependencyMask> enumerate_rules();

/// Standard matrix transpose of the 3x3 grid; an involution.
DependencyMask transpose_rule(const DependencyMask& mask);

/// Row-major flattening of the lattice into an M^2 bit vector.
std::vector<uint8_t> rule_column_vector(const Lattice& lattice);

/// (self, north, west, south, east) with the null boundary reading dead.
/// Throws when (row, col) is outside the lattice.
std::array<uint8_t, 5> neighborhood_state(const CellularSpace& space,
                                          const Lattice& lattice,
                                          int row, int col);

/// One synchronous generation. An active cell fires when its four axial
/// neighbors are all dead, or its {north, west} pair is dead, or its
/// {south, east} pair is dead. A firing cell goes dead and activates its
/// northeast neighbor, or its southwest neighbor when northeast is outside
/// the lattice; with neither diagonal in bounds the cell stays active.
/// Colliding activations merge (states are binary).
Lattice step(const CellularSpace& space, const Lattice& lattice);

/// Main-diagonal bits (cells[0][0] .. cells[M-1][M-1]).
std::vector<uint8_t> diagonal_bits(const Lattice& lattice);

std::string bits_to_string(const std::vector<uint8_t>& bits);

} // namespace facsca::ca
