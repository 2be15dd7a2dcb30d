#ifndef FEQ_SERIES_HPP
#define FEQ_SERIES_HPP

#include <map>
#include <string>
#include <vector>

#include "feq/poly.hpp"
#include "feq/solution.hpp"

namespace feq {

// Exact expansion of the functional equation under x_i = t zeta_i with the
// series ansatz for f. Everything in this module is exact rational arithmetic.

struct ExpandOptions {
    bool even = true;    // even ansatz (double pole, powers t^{2j-2})
    bool taylor = false; // general ansatz with a0 = a1 = 0 (Taylor branch)
};

struct SeriesConstraint {
    int t_power = 0;
    MultiPoly poly;           // polynomial in a_0..a_J (primitive, positive leading sign)
    bool factor_clean = true; // the t-coefficient had a single zeta-proportionality class
};

struct ExpandResult {
    int n = 2;
    int J = 0;
    std::vector<std::string> names; // a-variable names, index aligned with poly vars
    std::vector<SeriesConstraint> constraints;
};

// n in {2,3,4}; J <= 12 for n in {2,3}, J <= 6 for n = 4
ExpandResult expand_pde(int n, int J, const ExpandOptions& opt = {});

struct BranchEvent {
    int t_power = 0;
    std::vector<MultiPoly> factors; // alternatives the constraint factored into
    int chosen = -1;                // which factor this state imposed
};

struct RecurrenceState {
    std::vector<std::string> names;
    std::vector<int> free_symbols;       // indices still free at the end
    std::map<int, PolyFraction> known;   // solved coefficients, rational in the remaining frees
    std::vector<BranchEvent> events;
    bool consistent = true;
    int offending_index = -1;            // t-power of a contradictory constraint, if any
};

// Solves the recurrence level by level; forks at factorable conditions and
// returns every terminal state (branch order: as factored).
std::vector<RecurrenceState> solve_recurrence(int n, int J, const ExpandOptions& opt = {});

struct TaylorReport {
    MultiPoly condition;          // the forced relation among the free coefficients
    bool condition_is_a3a5_a4sq = false;
    RecurrenceState state;
};
// Taylor branch of the three-particle equation: general ansatz, a0 = a1 = 0.
TaylorReport taylor_branch(int J);

// residual of a0 f''' + 12 a1 f' - 12 f f' at z, term-normalized; the constants
// a0, a1 are the family's own Laurent data
double verify_method2_eq(const SolutionSpec& spec, double z);

std::string recurrence_to_json(const ExpandResult& ex, const std::vector<RecurrenceState>& states);

} // namespace feq

#endif
