#ifndef DIMER_COMMON_HPP
#define DIMER_COMMON_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace dimer {

using complexd = std::complex<double>;

// Failure categories; the CLI maps these onto exit codes.
enum class ErrorKind {
    Usage,           // bad CLI / config input
    Parity,          // even/odd bookkeeping violated
    Placement,       // root not boundary-adjacent etc.
    Validation,      // polyomino structure invalid
    Resolution,      // lattice spacing too coarse for the target domain
    SizeGuard,       // input exceeds a hard size limit
    Imbalance,       // black/white cell counts differ
    NoTiling,        // region admits no tiling
    UnsupportedRegion,
    Structure,       // malformed tree / tiling
    Shape,           // mismatched regions or dimensions
    Singularity,     // coincident evaluation points
    Domain,          // point outside the domain
    PathDisjointness,
    Contract,        // precondition violated (endpoints, map properties, ...)
    DegeneratePair,
    Arity,
    Numeric,
    Io,
    Internal,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

// Lattice square identified by its lower-left corner, in integer units.
// The lattice spacing epsilon is stored on the region and applied only when
// mapping to continuum coordinates.
struct Cell {
    int x = 0;
    int y = 0;
    friend bool operator==(const Cell&, const Cell&) = default;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Vertex {
    int x = 0;
    int y = 0;
    friend bool operator==(const Vertex&, const Vertex&) = default;
    friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

inline bool cell_is_black(Cell c) { return ((c.x + c.y) & 1) == 0; }
inline bool cell_is_even(Cell c) { return (c.x % 2 == 0) && (c.y % 2 == 0); }

struct IntPairHash {
    size_t operator()(const Cell& c) const {
        return std::hash<int64_t>()((int64_t(c.x) << 32) ^ uint32_t(c.y));
    }
    size_t operator()(const Vertex& v) const {
        return std::hash<int64_t>()((int64_t(v.x) << 32) ^ uint32_t(v.y));
    }
};

} // namespace dimer

#endif
