#include "bird/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bird {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double representative(double lo, double hi) {
    if (std::isinf(lo) && std::isinf(hi)) return 0.0;
    if (std::isinf(lo)) return hi - 1.0;
    if (std::isinf(hi)) return lo + 1.0;
    return 0.5 * (lo + hi);
}
} // namespace

bool Rect::bounded() const {
    return std::isfinite(xmin) && std::isfinite(xmax) && std::isfinite(ymin) && std::isfinite(ymax);
}

struct Region::Node {
    Kind kind = Kind::Empty;
    bird::Rect rect{};
    bird::Disc disc{};
    Region lhs{nullptr};
    Region rhs{nullptr};
    bool has_cells = false;
    std::vector<bird::Rect> cells;
};

Region::Region(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Region::Region() : Region(empty()) {}

Region Region::empty() {
    static const auto node = [] {
        auto n = std::make_shared<Node>();
        n->kind = Kind::Empty;
        n->has_cells = true;
        return n;
    }();
    return Region(node);
}

Region Region::all() {
    static const auto node = [] {
        auto n = std::make_shared<Node>();
        n->kind = Kind::All;
        n->has_cells = true;
        n->cells = {bird::Rect{-kInf, kInf, -kInf, kInf}};
        return n;
    }();
    return Region(node);
}

Region Region::rect(double xmin, double xmax, double ymin, double ymax) {
    if (!(xmin <= xmax) || !(ymin <= ymax)) {
        throw PreconditionError("rectangle bounds must satisfy min <= max");
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Rect;
    n->rect = {xmin, xmax, ymin, ymax};
    n->has_cells = true;
    n->cells = {n->rect};
    return Region(n);
}

Region Region::disc(double cx, double cy, double radius) {
    if (!(radius >= 0.0)) throw PreconditionError("disc radius must be non-negative");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Disc;
    n->disc = {Vec2(cx, cy), radius};
    return Region(n);
}

Region::Kind Region::kind() const { return node_->kind; }
const Rect& Region::as_rect() const { return node_->rect; }
const Disc& Region::as_disc() const { return node_->disc; }
const Region& Region::left() const { return node_->lhs; }
const Region& Region::right() const { return node_->rhs; }

const std::vector<Rect>* Region::cells() const {
    return node_->has_cells ? &node_->cells : nullptr;
}

bool Region::equivalent(const Region& other) const {
    if (same_as(other)) return true;
    const auto* a = cells();
    const auto* b = other.cells();
    return a && b && *a == *b;
}

bool Region::is_empty() const {
    return node_->kind == Kind::Empty || (node_->has_cells && node_->cells.empty());
}

bool Region::contains(const Vec2& p) const {
    const Node& n = *node_;
    if (n.has_cells && n.kind != Kind::Rect) {
        return std::any_of(n.cells.begin(), n.cells.end(), [&](const bird::Rect& c) { return c.contains(p); });
    }
    switch (n.kind) {
    case Kind::Empty: return false;
    case Kind::All: return true;
    case Kind::Rect: return n.rect.contains(p);
    case Kind::Disc: return n.disc.contains(p);
    case Kind::Union: return n.lhs.contains(p) || n.rhs.contains(p);
    case Kind::Intersect: return n.lhs.contains(p) && n.rhs.contains(p);
    case Kind::Difference: return n.lhs.contains(p) && !n.rhs.contains(p);
    }
    return false;
}

std::optional<Rect> Region::bounding_box() const {
    const Node& n = *node_;
    switch (n.kind) {
    case Kind::Empty: return Rect{0, 0, 0, 0};
    case Kind::All: return std::nullopt;
    case Kind::Rect:
        return n.rect.bounded() ? std::optional<Rect>(n.rect) : std::nullopt;
    case Kind::Disc:
        return Rect{n.disc.center.x() - n.disc.radius, n.disc.center.x() + n.disc.radius,
                    n.disc.center.y() - n.disc.radius, n.disc.center.y() + n.disc.radius};
    case Kind::Union: {
        if (n.lhs.is_empty()) return n.rhs.bounding_box();
        if (n.rhs.is_empty()) return n.lhs.bounding_box();
        auto a = n.lhs.bounding_box();
        auto b = n.rhs.bounding_box();
        if (!a || !b) return std::nullopt;
        return Rect{std::min(a->xmin, b->xmin), std::max(a->xmax, b->xmax),
                    std::min(a->ymin, b->ymin), std::max(a->ymax, b->ymax)};
    }
    case Kind::Intersect: {
        auto a = n.lhs.bounding_box();
        auto b = n.rhs.bounding_box();
        if (!a) return b;
        if (!b) return a;
        Rect r{std::max(a->xmin, b->xmin), std::min(a->xmax, b->xmax),
               std::max(a->ymin, b->ymin), std::min(a->ymax, b->ymax)};
        if (r.xmin > r.xmax || r.ymin > r.ymax) return Rect{0, 0, 0, 0};
        return r;
    }
    case Kind::Difference: return n.lhs.bounding_box();
    }
    return std::nullopt;
}

namespace {

// Rectangle decomposition of a binary CSG node from its children's decompositions:
// overlay the children's breakpoints, keep the grid cells whose interior lies in
// the result, then fuse horizontal runs.
std::vector<Rect> combine_cells(const Region& lhs, const Region& rhs, Region::Kind op) {
    std::vector<double> xs, ys;
    for (const Region* r : {&lhs, &rhs}) {
        for (const auto& c : *r->cells()) {
            xs.insert(xs.end(), {c.xmin, c.xmax});
            ys.insert(ys.end(), {c.ymin, c.ymax});
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

    auto inside = [&](const Vec2& p) {
        const bool a = lhs.contains(p);
        const bool b = rhs.contains(p);
        switch (op) {
        case Region::Kind::Union: return a || b;
        case Region::Kind::Intersect: return a && b;
        default: return a && !b;
        }
    };

    std::vector<Rect> out;
    for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
        const double ym = representative(ys[j], ys[j + 1]);
        std::size_t i = 0;
        while (i + 1 < xs.size()) {
            if (!inside(Vec2(representative(xs[i], xs[i + 1]), ym))) {
                ++i;
                continue;
            }
            std::size_t k = i + 1;
            while (k + 1 < xs.size() && inside(Vec2(representative(xs[k], xs[k + 1]), ym))) ++k;
            out.push_back(Rect{xs[i], xs[k], ys[j], ys[j + 1]});
            i = k;
        }
    }
    return out;
}

} // namespace

Region Region::finish(std::shared_ptr<Node> n, const Region& a, const Region& b) {
    if (a.cells() && b.cells()) {
        n->has_cells = true;
        n->cells = combine_cells(a, b, n->kind);
        // Collapse to an existing operand when the decomposition says they coincide.
        if (n->cells.empty()) return Region::empty();
        if (n->cells == *a.cells()) return a;
        if (n->cells == *b.cells()) return b;
    }
    return Region(std::move(n));
}

Region region_union(const Region& a, const Region& b) {
    if (a.is_empty() || b.is_all()) return b;
    if (b.is_empty() || a.is_all() || a.same_as(b)) return a;
    auto n = std::make_shared<Region::Node>();
    n->kind = Region::Kind::Union;
    n->lhs = a;
    n->rhs = b;
    return Region::finish(std::move(n), a, b);
}

Region region_intersect(const Region& a, const Region& b) {
    if (a.is_empty() || b.is_empty()) return Region::empty();
    if (a.is_all() || a.same_as(b)) return b;
    if (b.is_all()) return a;
    auto n = std::make_shared<Region::Node>();
    n->kind = Region::Kind::Intersect;
    n->lhs = a;
    n->rhs = b;
    return Region::finish(std::move(n), a, b);
}

Region region_difference(const Region& a, const Region& b) {
    if (a.is_empty() || b.is_all() || a.same_as(b)) return Region::empty();
    if (b.is_empty()) return a;
    auto n = std::make_shared<Region::Node>();
    n->kind = Region::Kind::Difference;
    n->lhs = a;
    n->rhs = b;
    return Region::finish(std::move(n), a, b);
}

} // namespace bird
