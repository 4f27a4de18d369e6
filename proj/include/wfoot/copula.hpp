#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace wfoot {

enum class Family {
    Independence,  // Pi(u,v) = uv
    LowerBoundW,   // W(u,v) = max(u+v-1, 0)
    UpperBoundM,   // M(u,v) = min(u, v)
    Gaussian,      // rho in [-1,1]; |rho| = 1 evaluates as M / W
    Clayton,       // theta > 0
    Gumbel,        // theta >= 1
    Frank,         // theta != 0
    TwoSegment,    // mass uniform on (0,0)-(1/2,1/2) and (1/2,1)-(1,1/2)
    Transpose,     // C^T(u,v) = C(v,u)
    Survival,      // u + v - 1 + C(1-u, 1-v)
    Tilde,         // u - C(u, 1-v)
    Mixture,       // w*C1 + (1-w)*C2
};

// A point in the closed unit square. Construction validates the range.
struct UnitSquarePoint {
    double u;
    double v;
    UnitSquarePoint(double u_, double v_);
};

// Immutable description of a bivariate copula: a parametric family or a
// structural transform of other copulas. Parameters are validated at
// construction; evaluation is pure and thread-safe.
class CopulaSpec {
public:
    static CopulaSpec independence();
    static CopulaSpec lower_bound_w();
    static CopulaSpec upper_bound_m();
    static CopulaSpec gaussian(double rho);
    static CopulaSpec clayton(double theta);
    static CopulaSpec gumbel(double theta);
    static CopulaSpec frank(double theta);
    static CopulaSpec two_segment();
    static CopulaSpec transpose(CopulaSpec inner);
    static CopulaSpec survival(CopulaSpec inner);
    static CopulaSpec tilde(CopulaSpec inner);
    static CopulaSpec mixture(double weight, CopulaSpec left, CopulaSpec right);

    Family family() const noexcept { return family_; }
    double param() const noexcept { return param_; }    // rho / theta
    double weight() const noexcept { return param_; }   // mixture weight
    const CopulaSpec& inner() const { return children_.at(0); }
    const CopulaSpec& left() const { return children_.at(0); }
    const CopulaSpec& right() const { return children_.at(1); }

    bool samplable() const noexcept;

    // Canonical textual form, e.g. "gaussian:rho=-0.9" or "pi"; transforms
    // print as "survival(frank:theta=-5)".
    std::string to_string() const;

private:
    CopulaSpec(Family family, double param) : family_(family), param_(param) {}

    Family family_;
    double param_ = 0.0;
    std::vector<CopulaSpec> children_;
};

// C(u,v) for the given spec. Margin conditions and the Frechet bounds
// W <= C <= M hold up to floating-point rounding.
double cdf(const CopulaSpec& spec, const UnitSquarePoint& p);
double cdf(const CopulaSpec& spec, double u, double v);

// Parses the CLI copula grammar, case-insensitively:
//   pi | w | m | twosegment | gaussian:rho=<x> | clayton:theta=<x>
//   | gumbel:theta=<x> | frank:theta=<x>
// Throws std::invalid_argument with a descriptive message on bad input.
CopulaSpec parse_copula_spec(std::string_view text);

}  // namespace wfoot
