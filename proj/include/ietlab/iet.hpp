#pragma once

#include "ietlab/expansion.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace ietlab {

class BranchAmbiguous : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ReturnTimeExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Direction { Forward, Inverse };

// The exchange of [0,a), [a,a+b), [a+b,1) with permutation (3,2,1).
class IETState {
public:
    explicit IETState(ParamPoint params, const PrecisionPolicy& policy = {});

    const ParamPoint& params() const { return params_; }
    bool exact() const { return exact_alpha_.has_value(); }
    const mpq_class& exact_alpha() const { return *exact_alpha_; }
    const mpq_class& exact_beta() const { return *exact_beta_; }

    // Ball values of alpha, beta cached per precision.
    struct Cuts {
        Ball alpha, beta, alpha_beta;
    };
    Cuts cuts(int bits) const;

private:
    ParamPoint params_;
    std::optional<mpq_class> exact_alpha_, exact_beta_;
};

// Symbol 1..3 of the partition piece containing x (left-closed), or 0 if x straddles a cut.
int symbol_at(const IETState::Cuts& cuts, const Ball& x);
int symbol_at(const IETState& state, const mpq_class& x);

// Throws BranchAmbiguous when the branch cannot be decided at x's precision.
Ball apply_T(const IETState& state, const Ball& x, Direction dir = Direction::Forward);
mpq_class apply_T(const IETState& state, const mpq_class& x, Direction dir = Direction::Forward);

struct Coding {
    std::vector<int> symbols;
    std::vector<double> values;  // T^n x, rounded
    std::optional<std::size_t> ambiguous_at;
};

// Symbols of T^n x for n = 0..N-1; exact when the state and x are exact, escalating balls otherwise.
Coding code_trajectory(const IETState& state, const Real& x, std::size_t steps, const PrecisionPolicy& policy = {});

struct IdocEvidence {
    enum class Status { Ok, Violation, Ambiguous };
    Status status = Status::Ok;
    // (orbit, n) pairs: orbit 0 is T^-n(a), orbit 1 is T^-n(a+b); orbit 2 marks a cut of T^-1.
    std::vector<std::pair<int, std::size_t>> indices;
    int bits = 0;
};

const char* to_string(IdocEvidence::Status s);

// Finite check of the distinct-orbit condition on n = 0..depth-1 of both backward orbits.
// separation_tol <= 0 selects twice the sum of the two radii.
IdocEvidence idoc_evidence(const IETState& state, std::size_t depth, double separation_tol = 0,
                           const PrecisionPolicy& policy = {});

// Max |(1+b) R_B(u) - T((1+b) u)| over samples, with R the rotation by (1-a)/(1+b) induced on [0, 1/(1+b)).
double verify_induction(const IETState& state, std::size_t samples, const PrecisionPolicy& policy = {});

}  // namespace ietlab
