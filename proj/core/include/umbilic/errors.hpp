#ifndef UMBILIC_ERRORS_HPP
#define UMBILIC_ERRORS_HPP

#include <optional>
#include <stdexcept>
#include <string>

namespace umbilic {

/// Base class for all computational failures raised by this library.
/// Configuration misuse (unknown surface name, bad grid sizes) throws
/// std::invalid_argument instead.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A function was evaluated outside its mathematical domain (division by
/// zero, ln/sqrt of a nonpositive value, nonpositive conformal factor).
/// Carries the (u,v) point when the caller knows it.
struct DomainError : Error {
    std::optional<std::pair<double, double>> point;

    explicit DomainError(const std::string& msg) : Error(msg) {}
    DomainError(const std::string& msg, double u, double v)
        : Error(msg + " at (u,v)=(" + std::to_string(u) + ", " + std::to_string(v) + ")"),
          point(std::make_pair(u, v)) {}
};

/// An operation's contract was violated: isothermal-only formula applied to a
/// non-isothermal form, misaligned grids, vanishing gradient where the
/// formula divides by |grad|^2.
struct ContractError : Error {
    using Error::Error;
};

/// The immersion is degenerate at a point (|i_u x i_v| below tolerance).
struct RegularityError : Error {
    std::pair<double, double> point;

    RegularityError(const std::string& msg, double u, double v)
        : Error(msg + " at (u,v)=(" + std::to_string(u) + ", " + std::to_string(v) + ")"),
          point(u, v) {}
};

}  // namespace umbilic

#endif
