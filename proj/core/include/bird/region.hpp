#pragma once

#include "bird/types.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace bird {

/// Closed axis-aligned rectangle. Bounds may be infinite (half-planes, strips).
struct Rect {
    double xmin = 0.0;
    double xmax = 0.0;
    double ymin = 0.0;
    double ymax = 0.0;

    [[nodiscard]] bool contains(const Vec2& p) const {
        return p.x() >= xmin && p.x() <= xmax && p.y() >= ymin && p.y() <= ymax;
    }
    [[nodiscard]] double area() const { return (xmax - xmin) * (ymax - ymin); }
    [[nodiscard]] bool bounded() const;

    friend bool operator==(const Rect&, const Rect&) = default;
};

struct Disc {
    Vec2 center = Vec2::Zero();
    double radius = 0.0;

    [[nodiscard]] bool contains(const Vec2& p) const {
        return (p - center).squaredNorm() <= radius * radius;
    }
};

/// Immutable CSG region of the position plane. Copies share the tree.
///
/// Disc-free regions also carry a decomposition into disjoint rectangles
/// (disjoint up to shared edges), which backs the exact mass and area paths.
class Region {
public:
    enum class Kind { Empty, All, Rect, Disc, Union, Intersect, Difference };

    Region();  // empty

    static Region empty();
    static Region all();
    static Region rect(double xmin, double xmax, double ymin, double ymax);
    static Region disc(double cx, double cy, double radius);

    friend Region region_union(const Region& a, const Region& b);
    friend Region region_intersect(const Region& a, const Region& b);
    friend Region region_difference(const Region& a, const Region& b);

    [[nodiscard]] bool contains(const Vec2& p) const;

    [[nodiscard]] Kind kind() const;
    [[nodiscard]] const bird::Rect& as_rect() const;
    [[nodiscard]] const bird::Disc& as_disc() const;
    [[nodiscard]] const Region& left() const;
    [[nodiscard]] const Region& right() const;

    /// Rectangle decomposition, or nullptr when a disc occurs in the tree.
    [[nodiscard]] const std::vector<bird::Rect>* cells() const;

    /// True when the region is provably empty (known-empty decomposition).
    [[nodiscard]] bool is_empty() const;
    [[nodiscard]] bool is_all() const { return kind() == Kind::All; }

    /// Smallest enclosing rectangle; nullopt when unbounded.
    [[nodiscard]] std::optional<bird::Rect> bounding_box() const;

    /// Same underlying tree (cheap identity check).
    [[nodiscard]] bool same_as(const Region& other) const { return node_ == other.node_; }

    /// Address of the shared tree; equal ids imply the same region.
    [[nodiscard]] const void* id() const { return node_.get(); }

    /// Same tree, or identical rectangle decompositions.
    [[nodiscard]] bool equivalent(const Region& other) const;

private:
    struct Node;
    explicit Region(std::shared_ptr<const Node> node);
    static Region finish(std::shared_ptr<Node> n, const Region& a, const Region& b);
    std::shared_ptr<const Node> node_;
};

Region region_union(const Region& a, const Region& b);
Region region_intersect(const Region& a, const Region& b);
Region region_difference(const Region& a, const Region& b);

/// Position-plane indicator of a 4-D state.
inline bool contains_state(const Region& r, const Vec4& x) { return r.contains(position_of(x)); }

} // namespace bird
