#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace bird {

/// Kinematic state [px, py, vx, vy] in m and m/s.
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat4 = Eigen::Matrix<double, 4, 4>;
using Vec2 = Eigen::Matrix<double, 2, 1>;
using Mat2 = Eigen::Matrix<double, 2, 2>;
using Mat24 = Eigen::Matrix<double, 2, 4>;

inline Vec2 position_of(const Vec4& x) { return x.head<2>(); }

/// A covariance that could not be factorized even after jitter.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke an operation's precondition (bad weights, overlapping domains, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed or inconsistent configuration / input file.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bird
