#ifndef DELAYCAST_ERROR_HPP
#define DELAYCAST_ERROR_HPP

#include <stdexcept>
#include <string>

namespace delaycast {

/// Input data cannot support the requested operation (too short, ill-formed
/// file, NaN sample, invalid split, ...).
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

/// A computation degenerated numerically (diverging trajectory, estimator on
/// degenerate point sets, nonpositive entropy denominator, ...).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace delaycast

#endif
