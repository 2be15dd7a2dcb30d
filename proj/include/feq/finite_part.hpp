#ifndef FEQ_FINITE_PART_HPP
#define FEQ_FINITE_PART_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace feq {

// Test functions of the class P(x,y) exp(-x^2-y^2); derivatives are computed on
// the polynomial factor, so no differentiation error enters the checks.
class TestFunction {
public:
    using Poly2 = std::map<std::pair<int, int>, double>;

    explicit TestFunction(Poly2 poly);
    static TestFunction named(const std::string& name);
    static std::vector<std::string> names();

    double operator()(double x, double y) const;
    // partial derivative of total order ix+iy, evaluated at (x, y)
    double deriv(int ix, int iy, double x, double y) const;
    TestFunction swapped() const; // phi(y, x)

private:
    Poly2 poly_;
};

struct FinitePart1D {
    double value = 0;
    double extrapolation_error = 0;
};
// finite part of integral phi(x)/x^p dx over the real line, p in {2,3}
FinitePart1D finite_part_1d(const std::function<double(double)>& phi, int power);

struct FinitePartResult {
    double value = 0;              // regularized integral of phi * g
    double intermediate = 0;       // limit of the bare region sum
    std::vector<double> epsilons;
    double extrapolation_error = 0;
};
FinitePartResult finite_part_double(const TestFunction& phi);

struct DistributionCheck {
    double lhs = 0, rhs = 0, rel_err = 0;
    double intermediate = 0, intermediate_expected = 0;
};
DistributionCheck distribution_identity_check(const TestFunction& phi);
std::string distribution_check_json(const DistributionCheck& c, const FinitePartResult& fp);

} // namespace feq

#endif
