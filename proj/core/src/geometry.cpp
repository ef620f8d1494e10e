#include "bird/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bird {

namespace {

bool uncorrelated(const Mat2& cov) {
    return std::abs(cov(0, 1)) <= 1e-12 * std::sqrt(cov(0, 0) * cov(1, 1)) &&
           std::abs(cov(1, 0)) <= 1e-12 * std::sqrt(cov(0, 0) * cov(1, 1));
}

bool exact_path(const Region& region) { return region.cells() != nullptr; }

// P(X > h, Y > k) for a standard bivariate normal with correlation r
// (Genz's Gauss-Legendre scheme, double precision).
double bvn_upper(double h, double k, double r) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (h == inf || k == inf) return 0.0;
    if (h == -inf) return k == -inf ? 1.0 : normal_cdf(-k);
    if (k == -inf) return normal_cdf(-h);

    static constexpr double w[3][10] = {
        {0.1713244923791705, 0.3607615730481384, 0.4679139345726904},
        {0.04717533638651177, 0.1069393259953183, 0.1600783285433464, 0.2031674267230659,
         0.2334925365383547, 0.2491470458134029},
        {0.01761400713915212, 0.04060142980038694, 0.06267204833410906, 0.08327674157670475,
         0.1019301198172404, 0.1181945319615184, 0.1316886384491766, 0.1420961093183821,
         0.1491729864726037, 0.1527533871307259}};
    static constexpr double x[3][10] = {
        {0.9324695142031522, 0.6612093864662647, 0.2386191860831970},
        {0.9815606342467191, 0.9041172563704750, 0.7699026741943050, 0.5873179542866171,
         0.3678314989981802, 0.1252334085114692},
        {0.9931285991850949, 0.9639719272779138, 0.9122344282513259, 0.8391169718222188,
         0.7463319064601508, 0.6360536807265150, 0.5108670019508271, 0.3737060887154196,
         0.2277858511416451, 0.07652652113349733}};
    int ng = 2;
    int lg = 10;
    if (std::abs(r) < 0.3) {
        ng = 0;
        lg = 3;
    } else if (std::abs(r) < 0.75) {
        ng = 1;
        lg = 6;
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double hk = h * k;
    double bvn = 0.0;
    if (std::abs(r) < 0.925) {
        const double hs = (h * h + k * k) / 2.0;
        const double asr = std::asin(r);
        for (int i = 0; i < lg; ++i) {
            for (const double sgn : {-1.0, 1.0}) {
                const double sn = std::sin(asr * (1.0 + sgn * x[ng][i]) / 2.0);
                bvn += w[ng][i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            }
        }
        bvn = bvn * asr / (2.0 * two_pi) + normal_cdf(-h) * normal_cdf(-k);
    } else {
        if (r < 0.0) {
            k = -k;
            hk = -hk;
        }
        if (std::abs(r) < 1.0) {
            const double as = (1.0 - r) * (1.0 + r);
            double a = std::sqrt(as);
            const double bs = (h - k) * (h - k);
            const double c = (4.0 - hk) / 8.0;
            const double d = (12.0 - hk) / 16.0;
            double asr = -(bs / as + hk) / 2.0;
            if (asr > -100.0) {
                bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
            }
            if (hk > -100.0) {
                const double b = std::sqrt(bs);
                const double sp = std::sqrt(two_pi) * normal_cdf(-b / a);
                bvn -= std::exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
            }
            a /= 2.0;
            for (int i = 0; i < lg; ++i) {
                for (const double sgn : {-1.0, 1.0}) {
                    const double xs = (a * (sgn * x[ng][i] + 1.0)) * (a * (sgn * x[ng][i] + 1.0));
                    const double rs = std::sqrt(1.0 - xs);
                    asr = -(bs / xs + hk) / 2.0;
                    if (asr > -100.0) {
                        const double sp = 1.0 + c * xs * (1.0 + d * xs);
                        const double ep = std::exp(-hk * (1.0 - rs) / (2.0 * (1.0 + rs))) / rs;
                        bvn += a * w[ng][i] * std::exp(asr) * (ep - sp);
                    }
                }
            }
            bvn = -bvn / two_pi;
        }
        if (r > 0.0) {
            bvn += normal_cdf(-std::max(h, k));
        } else if (h >= k) {
            bvn = -bvn;
        } else {
            const double span = h < 0.0 ? normal_cdf(k) - normal_cdf(h) : normal_cdf(-h) - normal_cdf(-k);
            bvn = span - bvn;
        }
    }
    return std::clamp(bvn, 0.0, 1.0);
}

double rect_mass_correlated(const Rect& c, const Vec2& mean, double sx, double sy, double rho) {
    const double ax = (c.xmin - mean.x()) / sx;
    const double bx = (c.xmax - mean.x()) / sx;
    const double ay = (c.ymin - mean.y()) / sy;
    const double by = (c.ymax - mean.y()) / sy;
    if (!(bx > ax) || !(by > ay)) return 0.0;
    return bvn_upper(ax, ay, rho) - bvn_upper(bx, ay, rho) - bvn_upper(ax, by, rho) + bvn_upper(bx, by, rho);
}

double exact_mass(const Vec2& mean, const Mat2& cov, const Region& region) {
    double sum = 0.0;
    if (uncorrelated(cov)) {
        for (const auto& c : *region.cells()) {
            sum += normal_interval(c.xmin, c.xmax, mean.x(), cov(0, 0)) *
                   normal_interval(c.ymin, c.ymax, mean.y(), cov(1, 1));
        }
    } else {
        const double sx = std::sqrt(cov(0, 0));
        const double sy = std::sqrt(cov(1, 1));
        const double rho = std::clamp(0.5 * (cov(0, 1) + cov(1, 0)) / (sx * sy), -1.0, 1.0);
        for (const auto& c : *region.cells()) sum += std::max(0.0, rect_mass_correlated(c, mean, sx, sy, rho));
    }
    return std::clamp(sum, 0.0, 1.0);
}

Eigen::Matrix2d position_factor(const Mat2& cov) {
    const Mat2 sym = 0.5 * (cov + cov.transpose());
    Eigen::LLT<Mat2> llt(sym);
    if (llt.info() != Eigen::Success) {
        llt.compute(sym + 1e-9 * sym.trace() / 2.0 * Mat2::Identity());
        if (llt.info() != Eigen::Success) throw NumericError("position covariance is not positive definite");
    }
    return llt.matrixL();
}

} // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_interval(double a, double b, double mean, double var) {
    if (!(b > a)) return 0.0;
    const double sd = std::sqrt(var);
    const double za = (a - mean) / sd;
    const double zb = (b - mean) / sd;
    // Upper tail: use survival functions so Q(za) - Q(zb) keeps precision.
    if (za > 0.0) {
        return 0.5 * (std::erfc(za / std::numbers::sqrt2) - std::erfc(zb / std::numbers::sqrt2));
    }
    return normal_cdf(zb) - normal_cdf(za);
}

std::vector<MassEstimate> gaussian_masses(const Vec2& mean, const Mat2& cov,
                                          std::span<const Region> regions, int samples, Rng& rng,
                                          std::vector<long>* counts) {
    std::vector<MassEstimate> out(regions.size());
    if (counts) counts->assign(regions.size(), 0);

    bool all_exact = true;
    for (const auto& r : regions) all_exact = all_exact && (r.cells() != nullptr);
    bool need_sampling = false;
    for (std::size_t i = 0; i < regions.size(); ++i) {
        if (regions[i].is_all()) {
            out[i] = {1.0, 0.0, true};
        } else if (regions[i].is_empty()) {
            out[i] = {0.0, 0.0, true};
        } else if (all_exact) {
            out[i] = {exact_mass(mean, cov, regions[i]), 0.0, true};
        } else {
            need_sampling = true;
        }
    }
    if (!need_sampling) return out;
    if (samples < 1) throw PreconditionError("gaussian mass needs at least one sample");

    const Eigen::Matrix2d chol = position_factor(cov);
    std::normal_distribution<double> normal;
    std::vector<long> hits(regions.size(), 0);
    for (int m = 0; m < samples; ++m) {
        const double z0 = normal(rng);
        const double z1 = normal(rng);
        const Vec2 p = mean + chol * Vec2(z0, z1);
        for (std::size_t i = 0; i < regions.size(); ++i) {
            if (!out[i].exact && regions[i].contains(p)) ++hits[i];
        }
    }
    for (std::size_t i = 0; i < regions.size(); ++i) {
        if (out[i].exact) continue;
        const double c = static_cast<double>(hits[i]) / samples;
        out[i] = {c, std::sqrt(c * (1.0 - c) / samples), false};
        if (counts) (*counts)[i] = hits[i];
    }
    return out;
}

MassEstimate gaussian_mass(const Vec2& mean, const Mat2& cov, const Region& region, int samples,
                           Rng& rng) {
    if (region.is_all()) return {1.0, 0.0, true};
    if (region.is_empty()) return {0.0, 0.0, true};
    if (exact_path(region)) return {exact_mass(mean, cov, region), 0.0, true};
    const Region one[] = {region};
    return gaussian_masses(mean, cov, one, samples, rng).front();
}

MassEstimate gaussian_mass(const GaussianComponent& component, const Region& region, int samples,
                           Rng& rng) {
    return gaussian_mass(position_of(component.mean), position_cov(component.cov), region, samples,
                         rng);
}

MassEstimate region_volume(const Region& region, const Rect& bounding_box, int samples, Rng& rng) {
    if (region.is_empty()) return {0.0, 0.0, true};
    if (region.kind() == Region::Kind::Disc) {
        const double r = region.as_disc().radius;
        return {std::numbers::pi * r * r, 0.0, true};
    }
    if (const auto* cells = region.cells()) {
        double area = 0.0;
        for (const auto& c : *cells) {
            const double w = std::min(c.xmax, bounding_box.xmax) - std::max(c.xmin, bounding_box.xmin);
            const double h = std::min(c.ymax, bounding_box.ymax) - std::max(c.ymin, bounding_box.ymin);
            if (w > 0.0 && h > 0.0) area += w * h;
        }
        return {area, 0.0, true};
    }
    if (samples < 1) throw PreconditionError("region volume needs at least one sample");
    std::uniform_real_distribution<double> ux(bounding_box.xmin, bounding_box.xmax);
    std::uniform_real_distribution<double> uy(bounding_box.ymin, bounding_box.ymax);
    long hits = 0;
    for (int m = 0; m < samples; ++m) {
        const double x = ux(rng);
        const double y = uy(rng);
        if (region.contains(Vec2(x, y))) ++hits;
    }
    const double frac = static_cast<double>(hits) / samples;
    const double box = bounding_box.area();
    return {box * frac, box * std::sqrt(frac * (1.0 - frac) / samples), false};
}

} // namespace bird
