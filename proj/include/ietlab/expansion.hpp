#pragma once

#include "ietlab/numerics.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ietlab {

struct ParamPoint {
    Real alpha;
    Real beta;

    static ParamPoint parse(std::string_view alpha, std::string_view beta);
};

enum class Region { InD, NeedsG, NeedsF, OnRationalLine };
enum class MapKind { F, G, FInv, GInv };

const char* to_string(Region r);
const char* to_string(MapKind m);

struct ReductionRecord {
    int prefix_s = 0;
    int suffix_t = 0;
    // Lengths of the F runs in composition order: l_0 is the run applied last.
    std::vector<long> f_powers;
    // Maps in the order they were applied (F or G only).
    std::vector<MapKind> steps;

    bool empty() const { return steps.empty(); }
    static ReductionRecord from_steps(std::vector<MapKind> steps);
};

struct ExpansionTriple {
    long n = 1;
    long m = 1;
    int eps = -1;  // the sign following (n, m)

    bool operator==(const ExpansionTriple&) const = default;
};

struct Degeneracy {
    std::size_t index = 0;  // subscript of the quantity that could not be certified
    int bits = 0;
    std::string reason;
};

struct ExpansionSeq {
    ReductionRecord reduction;
    std::vector<ExpansionTriple> triples;
    std::optional<Degeneracy> degeneracy;

    std::size_t depth() const { return triples.size(); }
};

// Certified sign of r using the policy; 0 when it cannot be decided (or r is exactly 0).
int decide_sign(const Real& r, const PrecisionPolicy& policy);

// Throws DomainViolation unless 0 < alpha, 0 < beta, alpha + beta < 1 is certified.
void require_in_simplex(const ParamPoint& p, const PrecisionPolicy& policy);

Region region_of(const ParamPoint& p, const PrecisionPolicy& policy = {});

// Maps of the unit square; exact inputs give exact outputs.
ParamPoint apply_map(MapKind which, const ParamPoint& p, const PrecisionPolicy& policy = {});

// Partial derivatives of F_inv or G_inv at (x, y): {d x'/dx, d x'/dy, d y'/dx, d y'/dy}.
std::array<double, 4> inverse_map_jacobian(MapKind which, double x, double y);

struct Reduction {
    enum class Status { Reduced, OnRationalLine, StepLimitExceeded };
    Status status = Status::Reduced;
    ReductionRecord record;
    ParamPoint point;  // meaningful when status == Reduced
};

Reduction reduce_to_D(const ParamPoint& p, long max_steps = 10000, const PrecisionPolicy& policy = {});

// Point obtained by replaying the recorded steps on p.
ParamPoint replay(const ParamPoint& p, const std::vector<MapKind>& steps);

ExpansionSeq expand_in_D(const ParamPoint& p, std::size_t depth, const PrecisionPolicy& policy = {});
ExpansionSeq full_expansion(const ParamPoint& p, std::size_t depth, const PrecisionPolicy& policy = {});

struct ValidityReport {
    bool digits_ok = true;
    std::size_t length = 0;
    std::size_t forbidden_n = 0;  // indices with (n_k, eps_{k+1}) == (1, +1)
    std::size_t forbidden_m = 0;  // indices with (m_k, eps_{k+1}) == (1, +1)
    double forbidden_n_frequency = 0;
    double forbidden_m_frequency = 0;
    bool admissible_so_far = false;
};

ValidityReport validate_expansion(const std::vector<ExpansionTriple>& triples);

struct WindowResult {
    bool holds = false;
    std::size_t holds_from = 0;
};

// Minimal k0 >= s with prod_{j=k-s+1..k} (n_j + m_j) >= (2 C0)^s for every k0 <= k <= depth.
WindowResult check_window_condition(const std::vector<ExpansionTriple>& triples, double c0, std::size_t s);

class InadmissiblePrefix : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NonContraction : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A point of D whose expansion starts with the given triples.
ParamPoint point_from_expansion(const std::vector<ExpansionTriple>& triples, const PrecisionPolicy& policy = {});

// Backward inverse branches evaluated on balls (building block of point_from_expansion).
std::pair<Ball, Ball> backward_point(const std::vector<ExpansionTriple>& triples, int bits, std::size_t extra = 8);

}  // namespace ietlab
