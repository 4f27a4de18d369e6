#include "wfoot/copula.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wfoot/normal.hpp"

namespace wfoot {

UnitSquarePoint::UnitSquarePoint(double u_, double v_) : u(u_), v(v_) {
    if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
        throw std::domain_error("UnitSquarePoint: coordinates must lie in [0,1]");
    }
}

CopulaSpec CopulaSpec::independence() { return CopulaSpec(Family::Independence, 0.0); }
CopulaSpec CopulaSpec::lower_bound_w() { return CopulaSpec(Family::LowerBoundW, 0.0); }
CopulaSpec CopulaSpec::upper_bound_m() { return CopulaSpec(Family::UpperBoundM, 0.0); }
CopulaSpec CopulaSpec::two_segment() { return CopulaSpec(Family::TwoSegment, 0.0); }

CopulaSpec CopulaSpec::gaussian(double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) {
        throw std::invalid_argument("gaussian: rho must lie in [-1,1]");
    }
    return CopulaSpec(Family::Gaussian, rho);
}

CopulaSpec CopulaSpec::clayton(double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw std::invalid_argument("clayton: theta must be positive");
    }
    return CopulaSpec(Family::Clayton, theta);
}

CopulaSpec CopulaSpec::gumbel(double theta) {
    if (!(theta >= 1.0) || !std::isfinite(theta)) {
        throw std::invalid_argument("gumbel: theta must be >= 1");
    }
    return CopulaSpec(Family::Gumbel, theta);
}

CopulaSpec CopulaSpec::frank(double theta) {
    if (theta == 0.0 || !std::isfinite(theta)) {
        throw std::invalid_argument("frank: theta must be nonzero (use pi for independence)");
    }
    return CopulaSpec(Family::Frank, theta);
}

CopulaSpec CopulaSpec::transpose(CopulaSpec inner) {
    CopulaSpec s(Family::Transpose, 0.0);
    s.children_.push_back(std::move(inner));
    return s;
}

CopulaSpec CopulaSpec::survival(CopulaSpec inner) {
    CopulaSpec s(Family::Survival, 0.0);
    s.children_.push_back(std::move(inner));
    return s;
}

CopulaSpec CopulaSpec::tilde(CopulaSpec inner) {
    CopulaSpec s(Family::Tilde, 0.0);
    s.children_.push_back(std::move(inner));
    return s;
}

CopulaSpec CopulaSpec::mixture(double weight, CopulaSpec leftc, CopulaSpec rightc) {
    if (!(weight >= 0.0 && weight <= 1.0)) {
        throw std::invalid_argument("mixture: weight must lie in [0,1]");
    }
    CopulaSpec s(Family::Mixture, weight);
    s.children_.push_back(std::move(leftc));
    s.children_.push_back(std::move(rightc));
    return s;
}

bool CopulaSpec::samplable() const noexcept {
    switch (family_) {
        case Family::Independence:
        case Family::LowerBoundW:
        case Family::UpperBoundM:
        case Family::Gaussian:
        case Family::Clayton:
        case Family::Gumbel:
        case Family::Frank:
        case Family::TwoSegment:
            return true;
        case Family::Transpose:
        case Family::Survival:
            return children_[0].samplable();
        case Family::Mixture:
            return children_[0].samplable() && children_[1].samplable();
        case Family::Tilde:
            return false;
    }
    return false;
}

namespace {

std::string format_param(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

double frank_cdf(double theta, double u, double v) {
    const double a = std::expm1(-theta);
    const double x = std::expm1(-theta * u);
    const double y = std::expm1(-theta * v);
    return -std::log1p(x * y / a) / theta;
}

double two_segment_cdf(double u, double v) {
    if (u >= 0.5 && v >= 0.5) return std::max(0.5, u + v - 1.0);
    return std::min(u, v);
}

}  // namespace

double cdf(const CopulaSpec& spec, const UnitSquarePoint& p) {
    const double u = p.u;
    const double v = p.v;
    switch (spec.family()) {
        case Family::Independence:
            return u * v;
        case Family::LowerBoundW:
            return std::max(u + v - 1.0, 0.0);
        case Family::UpperBoundM:
            return std::min(u, v);
        case Family::Gaussian: {
            const double rho = spec.param();
            if (rho == 1.0) return std::min(u, v);
            if (rho == -1.0) return std::max(u + v - 1.0, 0.0);
            if (u == 0.0 || v == 0.0) return 0.0;
            if (u == 1.0) return v;
            if (v == 1.0) return u;
            const double h = num::norm_quantile(u);
            const double k = num::norm_quantile(v);
            return num::bvn_cdf(h, k, rho);
        }
        case Family::Clayton: {
            const double theta = spec.param();
            if (u == 0.0 || v == 0.0) return 0.0;
            return std::pow(std::pow(u, -theta) + std::pow(v, -theta) - 1.0, -1.0 / theta);
        }
        case Family::Gumbel: {
            const double theta = spec.param();
            if (u == 0.0 || v == 0.0) return 0.0;
            if (u == 1.0) return v;
            if (v == 1.0) return u;
            const double a = std::pow(-std::log(u), theta);
            const double b = std::pow(-std::log(v), theta);
            return std::exp(-std::pow(a + b, 1.0 / theta));
        }
        case Family::Frank:
            return frank_cdf(spec.param(), u, v);
        case Family::TwoSegment:
            return two_segment_cdf(u, v);
        case Family::Transpose:
            return cdf(spec.inner(), UnitSquarePoint(v, u));
        case Family::Survival:
            return u + v - 1.0 + cdf(spec.inner(), UnitSquarePoint(1.0 - u, 1.0 - v));
        case Family::Tilde:
            return u - cdf(spec.inner(), UnitSquarePoint(u, 1.0 - v));
        case Family::Mixture: {
            const double w = spec.weight();
            return w * cdf(spec.left(), p) + (1.0 - w) * cdf(spec.right(), p);
        }
    }
    throw std::logic_error("cdf: unhandled family");
}

double cdf(const CopulaSpec& spec, double u, double v) {
    return cdf(spec, UnitSquarePoint(u, v));
}

std::string CopulaSpec::to_string() const {
    switch (family_) {
        case Family::Independence: return "pi";
        case Family::LowerBoundW: return "w";
        case Family::UpperBoundM: return "m";
        case Family::TwoSegment: return "twosegment";
        case Family::Gaussian: return "gaussian:rho=" + format_param(param_);
        case Family::Clayton: return "clayton:theta=" + format_param(param_);
        case Family::Gumbel: return "gumbel:theta=" + format_param(param_);
        case Family::Frank: return "frank:theta=" + format_param(param_);
        case Family::Transpose: return "transpose(" + children_[0].to_string() + ")";
        case Family::Survival: return "survival(" + children_[0].to_string() + ")";
        case Family::Tilde: return "tilde(" + children_[0].to_string() + ")";
        case Family::Mixture:
            return "mixture:w=" + format_param(param_) + "(" + children_[0].to_string() + "," +
                   children_[1].to_string() + ")";
    }
    return "?";
}

namespace {

std::string lower_trim(std::string_view text) {
    size_t b = text.find_first_not_of(" \t");
    size_t e = text.find_last_not_of(" \t");
    if (b == std::string_view::npos) return {};
    std::string out(text.substr(b, e - b + 1));
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

double parse_number(const std::string& text, const std::string& what) {
    size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("copula spec: bad numeric value for " + what);
    }
    if (pos != text.size()) {
        throw std::invalid_argument("copula spec: trailing characters after " + what);
    }
    return value;
}

}  // namespace

CopulaSpec parse_copula_spec(std::string_view text) {
    const std::string s = lower_trim(text);
    if (s == "pi" || s == "independence") return CopulaSpec::independence();
    if (s == "w") return CopulaSpec::lower_bound_w();
    if (s == "m") return CopulaSpec::upper_bound_m();
    if (s == "twosegment") return CopulaSpec::two_segment();

    const size_t colon = s.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("copula spec: unknown copula '" + s + "'");
    }
    const std::string fam = s.substr(0, colon);
    const std::string rest = s.substr(colon + 1);
    const size_t eq = rest.find('=');
    if (eq == std::string::npos) {
        throw std::invalid_argument("copula spec: expected <name>=<value> after ':'");
    }
    const std::string key = rest.substr(0, eq);
    const double value = parse_number(rest.substr(eq + 1), fam + " parameter");

    if (fam == "gaussian") {
        if (key != "rho") throw std::invalid_argument("copula spec: gaussian takes rho=<x>");
        return CopulaSpec::gaussian(value);
    }
    if (fam == "clayton") {
        if (key != "theta") throw std::invalid_argument("copula spec: clayton takes theta=<x>");
        return CopulaSpec::clayton(value);
    }
    if (fam == "gumbel") {
        if (key != "theta") throw std::invalid_argument("copula spec: gumbel takes theta=<x>");
        return CopulaSpec::gumbel(value);
    }
    if (fam == "frank") {
        if (key != "theta") throw std::invalid_argument("copula spec: frank takes theta=<x>");
        return CopulaSpec::frank(value);
    }
    throw std::invalid_argument("copula spec: unknown family '" + fam + "'");
}

}  // namespace wfoot
