#include "moment/sym/linear.hpp"

namespace moment::sym {

Solution2 solve_linear_2x2(const Ratio& p1, const Ratio& q1, const Ratio& r1,
                           const Ratio& p2, const Ratio& q2, const Ratio& r2) {
    Ratio det = p1 * q2 - p2 * q1;
    if (det.is_zero()) throw AlgebraError("singular 2x2 system");
    Ratio x = (q1 * r2 - q2 * r1) / det;
    Ratio y = (p2 * r1 - p1 * r2) / det;
    return {std::move(x), std::move(y), std::move(det)};
}

Ratio solve_affine(const Ratio& x, Var v) {
    Ratio a = partial_derivative(x, v);
    if (a.is_zero()) throw AlgebraError(std::string("expression does not depend on ") + std::string(var_name(v)));
    if (!partial_derivative(a, v).is_zero())
        throw AlgebraError(std::string("expression is not affine in ") + std::string(var_name(v)));
    Ratio b = substitute(x, {{v, Ratio(0)}});
    return -b / a;
}

std::vector<Ratio> collect_coefficients(const Ratio& x, Var v) {
    for (const auto& f : x.factors())
        if (f.base.depends_on(v))
            throw AlgebraError(std::string(var_name(v)) + " appears in the denominator");
    std::vector<Ratio> out;
    for (auto& c : x.num().coefficients(v)) out.push_back(Ratio::assemble(std::move(c), x.factors()));
    return out;
}

}  // namespace moment::sym
