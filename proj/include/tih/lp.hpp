#ifndef TIH_LP_HPP
#define TIH_LP_HPP

#include <optional>
#include <set>
#include <vector>

#include "tih/numbers.hpp"

namespace tih {

enum class Rel { LE, LT, EQ };

// Linear constraint  sum coef[i] * x_i  REL  rhs.
struct LinCon {
    std::vector<Rat> coef;
    Rat rhs;
    Rel rel = Rel::LE;
};

// Exact feasibility, point extraction, and variable elimination for small
// rational constraint systems via Fourier-Motzkin. Sizes here are desk scale
// (a handful of variables, tens of constraints), so the quadratic blowup of
// FM is irrelevant and exactness is what matters.
class LinSystem {
public:
    explicit LinSystem(int nvars) : nvars_(nvars) {}

    int nvars() const { return nvars_; }
    const std::vector<LinCon>& constraints() const { return cons_; }

    void add(std::vector<Rat> coef, Rat rhs, Rel rel);
    void add_le(const std::vector<Rat>& coef, const Rat& rhs) { add(coef, rhs, Rel::LE); }
    void add_lt(const std::vector<Rat>& coef, const Rat& rhs) { add(coef, rhs, Rel::LT); }
    void add_eq(const std::vector<Rat>& coef, const Rat& rhs) { add(coef, rhs, Rel::EQ); }

    bool feasible() const;

    // Some point satisfying every constraint; nullopt when infeasible.
    std::optional<std::vector<Rat>> point() const;

    // Constraints describing the projection that forgets the given variables
    // (coefficients on eliminated variables are zero in the result).
    std::vector<LinCon> eliminate(const std::set<int>& vars) const;

private:
    int nvars_;
    std::vector<LinCon> cons_;
};

}  // namespace tih

#endif
