#include "bird/oracle.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace bird::oracle {

namespace {

// Iterate all submasks of `mask`, including 0.
template <class F>
void for_each_submask(Subset mask, F&& f) {
    Subset s = mask;
    while (true) {
        f(s);
        if (s == 0) break;
        s = (s - 1) & mask;
    }
}

FiniteRfsDensity like(const FiniteRfsDensity& d, int n_max) {
    return FiniteRfsDensity(d.cells(), d.cell_volume(), n_max);
}

void require_same_grid(const FiniteRfsDensity& a, const FiniteRfsDensity& b) {
    if (a.cells() != b.cells() || a.cell_volume() != b.cell_volume()) {
        throw PreconditionError("densities live on different grids");
    }
}

} // namespace

FiniteRfsDensity::FiniteRfsDensity(int cells, double cell_volume, int n_max)
    : cells_(cells), volume_(cell_volume), n_max_(n_max) {
    if (cells < 0 || cells > kMaxCells) {
        throw PreconditionError("grid size must be between 0 and " + std::to_string(kMaxCells));
    }
    if (n_max < 0) throw PreconditionError("n_max must be non-negative");
    if (!(cell_volume > 0.0)) throw PreconditionError("cell volume must be positive");
    n_max_ = std::min(n_max, cells);
    table_.assign(std::size_t{1} << cells, 0.0);
}

void FiniteRfsDensity::set(Subset x, double value) {
    if (x >= table_.size()) throw PreconditionError("subset outside the grid");
    if (!(value >= 0.0)) throw PreconditionError("density values must be non-negative");
    if (!admissible(x) && value != 0.0) throw PreconditionError("subset exceeds the cardinality cap");
    table_[x] = value;
}

double set_integral(const FiniteRfsDensity& d) {
    double sum = 0.0;
    for (Subset x = 0; x < d.table_size(); ++x) {
        if (!d.admissible(x) || d(x) == 0.0) continue;
        sum += d(x) * std::pow(d.cell_volume(), cardinality(x));
    }
    return sum;
}

FiniteRfsDensity normalized(const FiniteRfsDensity& d) {
    const double z = set_integral(d);
    if (!(z > 0.0) || !std::isfinite(z)) throw DegenerateInput("density has zero set integral");
    FiniteRfsDensity out = d;
    for (Subset x = 0; x < d.table_size(); ++x) out.set(x, d(x) / z);
    return out;
}

FiniteRfsDensity bayes_op(const FiniteRfsDensity& a, const FiniteRfsDensity& b) {
    require_same_grid(a, b);
    FiniteRfsDensity out = like(a, std::min(a.n_max(), b.n_max()));
    for (Subset x = 0; x < a.table_size(); ++x) {
        if (out.admissible(x)) out.set(x, a(x) * b(x));
    }
    return normalized(out);
}

FiniteRfsDensity power_op(const FiniteRfsDensity& a, double omega) {
    if (!(omega > 0.0) || omega > 1.0) throw PreconditionError("power_op: omega must lie in (0, 1]");
    FiniteRfsDensity out = like(a, a.n_max());
    for (Subset x = 0; x < a.table_size(); ++x) {
        if (a(x) > 0.0) out.set(x, std::pow(a(x), omega));
    }
    return normalized(out);
}

FiniteRfsDensity gci_fuse_exact(std::span<const std::pair<FiniteRfsDensity, double>> inputs) {
    double total = 0.0;
    const FiniteRfsDensity* grid = nullptr;
    for (const auto& [d, w] : inputs) {
        if (w < 0.0) throw PreconditionError("fusion weights must be non-negative");
        total += w;
        if (w > 0.0) grid = &d;
    }
    if (!grid || std::abs(total - 1.0) > 1e-12) throw PreconditionError("fusion weights must sum to one");

    int n_max = grid->cells();
    for (const auto& [d, w] : inputs) {
        if (w > 0.0) {
            require_same_grid(d, *grid);
            n_max = std::min(n_max, d.n_max());
        }
    }
    FiniteRfsDensity out = like(*grid, n_max);
    for (Subset x = 0; x < grid->table_size(); ++x) {
        if (!out.admissible(x)) continue;
        double log_value = 0.0;
        bool zero = false;
        for (const auto& [d, w] : inputs) {
            if (w == 0.0) continue;
            if (d(x) == 0.0) {
                zero = true;
                break;
            }
            log_value += w * std::log(d(x));
        }
        if (!zero) out.set(x, std::exp(log_value));
    }
    return normalized(out);
}

FiniteRfsDensity marginalize(const FiniteRfsDensity& d, Subset w_cells) {
    w_cells &= d.full();
    const Subset v_cells = d.full() & ~w_cells;
    FiniteRfsDensity out = like(d, d.n_max());
    for_each_submask(w_cells, [&](Subset x) {
        if (!d.admissible(x)) return;
        double sum = 0.0;
        for_each_submask(v_cells, [&](Subset xp) {
            const Subset joint = x | xp;
            if (!d.admissible(joint)) return;
            sum += d(joint) * std::pow(d.cell_volume(), cardinality(xp));
        });
        out.set(x, sum);
    });
    return out;
}

FiniteRfsDensity condition(const FiniteRfsDensity& d, Subset w_cells, Subset given) {
    w_cells &= d.full();
    if ((given & ~w_cells) != 0) throw PreconditionError("conditioning set must lie in W");
    const Subset v_cells = d.full() & ~w_cells;
    const int cap = std::max(0, d.n_max() - cardinality(given));
    FiniteRfsDensity out = like(d, d.cells());

    double marginal = 0.0;
    if (d.admissible(given)) {
        for_each_submask(v_cells, [&](Subset xp) {
            if (d.admissible(given | xp)) {
                marginal += d(given | xp) * std::pow(d.cell_volume(), cardinality(xp));
            }
        });
    }
    for_each_submask(v_cells, [&](Subset xp) {
        if (marginal == 0.0) {
            out.set(xp, 1.0);
        } else if (cardinality(xp) <= cap) {
            out.set(xp, d(given | xp) / marginal);
        }
    });
    return out;
}

FiniteRfsDensity uninformative_on(int cells, double cell_volume, Subset region, int n_max) {
    FiniteRfsDensity out(cells, cell_volume, n_max);
    region &= out.full();
    const int n = cardinality(region);
    const int cap = std::min(out.n_max(), n);
    // sum_{m<=cap} C(n, m) v^m
    double z = 0.0;
    double binom = 1.0;
    for (int m = 0; m <= cap; ++m) {
        z += binom * std::pow(cell_volume, m);
        binom = binom * (n - m) / (m + 1);
    }
    for_each_submask(region, [&](Subset x) {
        if (cardinality(x) <= cap) out.set(x, 1.0 / z);
    });
    return out;
}

FiniteRfsDensity uninformative_exact(int cells, double cell_volume, int n_max) {
    FiniteRfsDensity probe(cells, cell_volume, n_max);
    return uninformative_on(cells, cell_volume, probe.full(), n_max);
}

namespace {

double conditional_value(const FiniteRfsDensity& joint, const FiniteRfsDensity& marginal_w,
                         Subset given, Subset xp) {
    const double m = marginal_w(given);
    if (m == 0.0) return 1.0;
    return joint(given | xp) / m;
}

FiniteRfsDensity bird_reduced(const FiniteRfsDensity& a, Subset fov_a, const FiniteRfsDensity& b,
                              Subset fov_b, double omega_a) {
    const Subset common = fov_a & fov_b;
    const Subset excl_a = fov_a & ~common;
    const Subset excl_b = fov_b & ~common;

    const FiniteRfsDensity ma = marginalize(a, fov_a);
    const FiniteRfsDensity mb = marginalize(b, fov_b);
    const FiniteRfsDensity a_co = marginalize(ma, common);
    const FiniteRfsDensity b_co = marginalize(mb, common);

    FiniteRfsDensity fused_co = a_co;
    if (omega_a < 1.0) {
        const std::pair<FiniteRfsDensity, double> parts[] = {{a_co, omega_a}, {b_co, 1.0 - omega_a}};
        fused_co = gci_fuse_exact(parts);
    }

    FiniteRfsDensity out(a.cells(), a.cell_volume(), a.cells());
    for_each_submask(common, [&](Subset xc) {
        if (fused_co(xc) == 0.0) return;
        for_each_submask(excl_a, [&](Subset xa) {
            const double ca = conditional_value(ma, a_co, xc, xa);
            if (ca == 0.0) return;
            for_each_submask(excl_b, [&](Subset xb) {
                const double cb = conditional_value(mb, b_co, xc, xb);
                if (cb != 0.0) out.set(xc | xa | xb, fused_co(xc) * ca * cb);
            });
        });
    });
    return normalized(out);
}

// Product of a FoV marginal and an uninformative density on `elsewhere`.
FiniteRfsDensity form3(const FiniteRfsDensity& fov_marginal, Subset fov, Subset elsewhere) {
    const FiniteRfsDensity ui =
        uninformative_on(fov_marginal.cells(), fov_marginal.cell_volume(), elsewhere, fov_marginal.cells());
    FiniteRfsDensity out(fov_marginal.cells(), fov_marginal.cell_volume(), fov_marginal.cells());
    for_each_submask(fov, [&](Subset x) {
        if (fov_marginal(x) == 0.0) return;
        for_each_submask(elsewhere, [&](Subset y) { out.set(x | y, fov_marginal(x) * ui(y)); });
    });
    return out;
}

FiniteRfsDensity bird_explicit(const FiniteRfsDensity& a, Subset fov_a, const FiniteRfsDensity& b,
                               Subset fov_b, double omega_a) {
    const double omega_b = 1.0 - omega_a;
    const Subset common = fov_a & fov_b;
    const Subset excl_a = fov_a & ~common;
    const Subset excl_b = fov_b & ~common;
    const Subset global = fov_a | fov_b;

    // Form-III posteriors of both agents over the global FoV.
    const FiniteRfsDensity pa = form3(marginalize(a, fov_a), fov_a, excl_b);
    const FiniteRfsDensity pb = form3(marginalize(b, fov_b), fov_b, excl_a);

    // Every factor of the unit-exponent GCI product comes from decomposing
    // the Form-III joints through the generic marginal/conditional machinery.
    const FiniteRfsDensity pa_co = marginalize(pa, common);
    const FiniteRfsDensity pb_co = marginalize(pb, common);
    const FiniteRfsDensity pa_c_xa = marginalize(pa, common | excl_a);
    const FiniteRfsDensity pb_c_xb = marginalize(pb, common | excl_b);

    FiniteRfsDensity out(a.cells(), a.cell_volume(), a.cells());
    for_each_submask(global, [&](Subset x) {
        const Subset xc = x & common;
        const Subset xa = x & excl_a;
        const Subset xb = x & excl_b;
        if (pa_co(xc) == 0.0 || pb_co(xc) == 0.0) return;
        const double co = std::pow(pa_co(xc), omega_a) * std::pow(pb_co(xc), omega_b);
        const double a_nc = conditional_value(pa_c_xa, pa_co, xc, xa);       // pi_a(X_a\C | X_C)
        const double a_ui = conditional_value(pa, pa_c_xa, xc | xa, xb);     // pi_a(X_b\C | X_C, X_a\C)
        const double b_nc = conditional_value(pb_c_xb, pb_co, xc, xb);       // pi_b(X_b\C | X_C)
        const double b_ui = conditional_value(pb, pb_c_xb, xc | xb, xa);     // pi_b(X_a\C | X_C, X_b\C)
        const double value = co * a_nc * a_ui * b_nc * b_ui;
        if (value > 0.0) out.set(x, value);
    });
    return normalized(out);
}

} // namespace

FiniteRfsDensity bird_fuse_exact(const FiniteRfsDensity& a, Subset fov_a, const FiniteRfsDensity& b,
                                 Subset fov_b, double omega_a, BirdPath path) {
    require_same_grid(a, b);
    if (omega_a < 0.0 || omega_a > 1.0) throw PreconditionError("omega_a must lie in [0, 1]");
    fov_a &= a.full();
    fov_b &= a.full();
    if (omega_a == 0.0) return bird_fuse_exact(b, fov_b, a, fov_a, 1.0, path);
    return path == BirdPath::Reduced ? bird_reduced(a, fov_a, b, fov_b, omega_a)
                                     : bird_explicit(a, fov_a, b, fov_b, omega_a);
}

double yes_probability(const FiniteRfsDensity& d, Subset region) {
    const FiniteRfsDensity m = marginalize(d, region);
    return 1.0 - m(0) / set_integral(d);
}

double kl_divergence(const FiniteRfsDensity& f, const FiniteRfsDensity& g) {
    require_same_grid(f, g);
    double sum = 0.0;
    for (Subset x = 0; x < f.table_size(); ++x) {
        if (f(x) == 0.0) continue;
        if (g(x) == 0.0) return std::numeric_limits<double>::infinity();
        sum += f(x) * std::log(f(x) / g(x)) * std::pow(f.cell_volume(), cardinality(x));
    }
    return sum;
}

double max_abs_diff(const FiniteRfsDensity& a, const FiniteRfsDensity& b) {
    require_same_grid(a, b);
    double m = 0.0;
    for (Subset x = 0; x < a.table_size(); ++x) m = std::max(m, std::abs(a(x) - b(x)));
    return m;
}

} // namespace bird::oracle
