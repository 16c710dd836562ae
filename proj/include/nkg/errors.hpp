#pragma once

#include <stdexcept>
#include <string>

namespace nkg {

// Sup-norm guard past which a march is declared blown up.
inline constexpr double blow_up_threshold = 1e6;

// The march left the admissible range: a non-finite value or a sup norm past
// the blow-up guard. Carries the level index at which it was detected.
class blow_up_error : public std::runtime_error {
public:
    blow_up_error(long level, double linf)
        : std::runtime_error("blow-up at level " + std::to_string(level) +
                             ", |u|_inf = " + std::to_string(linf)),
          level_(level), linf_(linf) {}

    long level() const { return level_; }
    double linf() const { return linf_; }

private:
    long level_;
    double linf_;
};

// An implicit stage exhausted its iteration budget before reaching tolerance.
class convergence_error : public std::runtime_error {
public:
    convergence_error(long level, double residual)
        : std::runtime_error("implicit stage stalled at level " + std::to_string(level) +
                             ", residual " + std::to_string(residual)),
          level_(level), residual_(residual) {}

    long level() const { return level_; }
    double residual() const { return residual_; }

private:
    long level_;
    double residual_;
};

}  // namespace nkg
