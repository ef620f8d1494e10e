#include "bird/phd_filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bird {

MotionModel MotionModel::constant_velocity(double dt, double sigma_w) {
    MotionModel m;
    m.dt = dt;
    m.F = Mat4::Identity();
    m.F(0, 2) = dt;
    m.F(1, 3) = dt;
    const double s2 = sigma_w * sigma_w;
    const double pp = s2 * dt * dt * dt * dt / 4.0;
    const double pv = s2 * dt * dt * dt / 3.0;
    const double vv = s2 * dt * dt;
    m.Q.setZero();
    m.Q(0, 0) = m.Q(1, 1) = pp;
    m.Q(2, 2) = m.Q(3, 3) = vv;
    m.Q(0, 2) = m.Q(2, 0) = pv;
    m.Q(1, 3) = m.Q(3, 1) = pv;
    return m;
}

GaussianMixture intensity_of(const PoissonPosterior& post) {
    GaussianMixture gm;
    gm.components.reserve(post.size());
    for (const auto& t : post.components) {
        GaussianComponent g = t.gaussian;
        g.weight *= post.lambda;
        gm.components.push_back(g);
    }
    return gm;
}

PoissonPosterior from_intensity(const GaussianMixture& intensity) {
    return make_posterior(intensity.total_weight(), intensity);
}

PoissonPosterior phd_predict(const PoissonPosterior& post, const MotionModel& motion,
                             const SurvivalProfile& survival, const PoissonPosterior& birth) {
    GaussianMixture predicted;
    predicted.components.reserve(post.size() + birth.size());
    for (auto g : intensity_of(post).components) {
        g.mean = motion.F * g.mean;
        g.cov = symmetrize(motion.F * g.cov * motion.F.transpose() + motion.Q);
        g.weight *= survival.at(g.mean);
        if (g.weight > 0.0) predicted.components.push_back(g);
    }
    for (const auto& g : intensity_of(birth).components) {
        if (g.weight > 0.0) predicted.components.push_back(g);
    }
    return from_intensity(predicted);
}

PoissonPosterior phd_update(const PoissonPosterior& prior, const std::vector<Vec2>& measurements,
                            const SensorModel& sensor, const PruneMergeParams& prune) {
    const GaussianMixture predicted = intensity_of(prior);

    // Innovation quantities per predicted component.
    struct Gate {
        Vec2 z_pred;
        Eigen::LLT<Mat2> s_chol;
        double log_norm;
        Eigen::Matrix<double, 4, 2> gain;
        Mat4 cov_post;
        double pd;
    };
    std::vector<Gate> gates;
    gates.reserve(predicted.size());
    GaussianMixture out;
    for (const auto& g : predicted.components) {
        const double pd = sensor.detection(g.mean);
        GaussianComponent missed = g;
        missed.weight *= (1.0 - pd);
        if (missed.weight > 0.0) out.components.push_back(missed);

        Gate gate;
        gate.pd = pd;
        gate.z_pred = sensor.H * g.mean;
        const Mat2 s = 0.5 * (sensor.H * g.cov * sensor.H.transpose() + sensor.R +
                              (sensor.H * g.cov * sensor.H.transpose() + sensor.R).transpose());
        gate.s_chol.compute(s);
        if (gate.s_chol.info() != Eigen::Success) throw NumericError("innovation covariance is not PD");
        const Eigen::Matrix<double, 2, 4> ph_t = sensor.H * g.cov;  // (P H^T)^T
        gate.gain = gate.s_chol.solve(ph_t).transpose();
        gate.cov_post = symmetrize((Mat4::Identity() - gate.gain * sensor.H) * g.cov);
        gate.log_norm = -std::log(2.0 * std::numbers::pi) -
                        gate.s_chol.matrixLLT().diagonal().array().log().sum();
        gates.push_back(std::move(gate));
    }

    double clutter_density = 0.0;
    if (sensor.clutter_rate > 0.0) {
        const auto* cells = sensor.clutter_region.cells();
        double area = 0.0;
        if (cells) {
            for (const auto& c : *cells) area += c.area();
        } else if (sensor.clutter_region.kind() == Region::Kind::Disc) {
            area = std::numbers::pi * sensor.clutter_region.as_disc().radius * sensor.clutter_region.as_disc().radius;
        } else {
            const auto box = sensor.clutter_region.bounding_box();
            if (!box) throw PreconditionError("clutter region must be bounded");
            Rng rng{0xc1077e5ULL};
            area = region_volume(sensor.clutter_region, *box, 200000, rng).value;
        }
        if (!(area > 0.0) || !std::isfinite(area)) throw PreconditionError("clutter region must have finite positive area");
        clutter_density = sensor.clutter_rate / area;
    }

    for (const auto& z : measurements) {
        const std::size_t first = out.components.size();
        double total = 0.0;
        for (std::size_t j = 0; j < predicted.size(); ++j) {
            const auto& g = predicted.components[j];
            const auto& gate = gates[j];
            if (gate.pd <= 0.0 || g.weight <= 0.0) continue;
            const Vec2 nu = z - gate.z_pred;
            const Vec2 white = gate.s_chol.matrixL().solve(nu);
            const double lik = std::exp(gate.log_norm - 0.5 * white.squaredNorm());
            const double w = gate.pd * g.weight * lik;
            if (w <= 0.0) continue;
            GaussianComponent c;
            c.weight = w;
            c.mean = g.mean + gate.gain * nu;
            c.cov = gate.cov_post;
            out.components.push_back(c);
            total += w;
        }
        const double denom = clutter_density + total;
        if (denom <= 0.0) {
            out.components.resize(first);
            continue;
        }
        for (std::size_t n = first; n < out.components.size(); ++n) out.components[n].weight /= denom;
    }

    return from_intensity(gm_prune_merge(out, prune));
}

PoissonPosterior adaptive_birth(const std::vector<Vec2>& measurements, const BirthParams& params) {
    GaussianMixture gm;
    for (const auto& z : measurements) {
        GaussianComponent c;
        c.weight = params.weight;
        c.mean << z.x(), z.y(), 0.0, 0.0;
        c.cov = Mat4::Zero();
        c.cov(0, 0) = c.cov(1, 1) = params.position_var;
        c.cov(2, 2) = c.cov(3, 3) = params.velocity_std * params.velocity_std;
        gm.components.push_back(c);
    }
    return from_intensity(gm);
}

PoissonPosterior marginalize_to_fov(const PoissonPosterior& post, const Region& fov, Rng& rng,
                                    int samples) {
    return restrict(post, fov, rng, samples);
}

std::vector<Vec4> extract_estimates(const PoissonPosterior& post, double merge) {
    std::vector<Vec4> out;
    if (post.lambda <= 0.0) return out;
    // Pieces of one Gaussian truncated to different supports describe a single object.
    const GaussianMixture pooled =
        gm_prune_merge(intensity_of(post), 0.0, merge, std::numeric_limits<std::size_t>::max());
    const auto n = static_cast<std::size_t>(
        std::clamp(std::llround(post.lambda), 0LL, static_cast<long long>(pooled.size())));
    for (std::size_t i = 0; i < pooled.size() && out.size() < n; ++i) {
        if (pooled.components[i].weight > 0.5) out.push_back(pooled.components[i].mean);
    }
    return out;
}

} // namespace bird
