#include "expanderlab/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace expanderlab::num {

double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::domain_error("gamma_fn: need x > 0");
    return std::tgamma(x);
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: need x > 0");
    return std::lgamma(x);
}

double unit_ball_volume(int n) {
    if (n < 1) throw std::domain_error("unit_ball_volume: need n >= 1");
    const double nd = static_cast<double>(n);
    return std::pow(std::numbers::pi, nd / 2.0) / gamma_fn(nd / 2.0 + 1.0);
}

double sphere_volume(int p, double radius) {
    if (p < 0) throw std::domain_error("sphere_volume: need p >= 0");
    if (!(radius > 0.0)) throw std::domain_error("sphere_volume: need radius > 0");
    return std::exp(log_sphere_volume(p, radius));
}

double log_sphere_volume(int p, double radius) {
    if (p < 0) throw std::domain_error("log_sphere_volume: need p >= 0");
    if (!(radius > 0.0)) throw std::domain_error("log_sphere_volume: need radius > 0");
    // |S^p(r)| = 2 pi^{(p+1)/2} / Gamma((p+1)/2) * r^p
    const double pd = static_cast<double>(p);
    return std::log(2.0) + 0.5 * (pd + 1.0) * std::log(std::numbers::pi)
         - log_gamma((pd + 1.0) / 2.0) + pd * std::log(radius);
}

} // namespace expanderlab::num
