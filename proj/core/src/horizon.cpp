#include <cmath>

#include "gronwall/bounds.hpp"
#include "gronwall/error.hpp"

namespace gronwall {

std::string_view horizon_kind_name(HorizonKind kind) noexcept {
    switch (kind) {
        case HorizonKind::full: return "full";
        case HorizonKind::p_blow_up: return "p_blow_up";
        case HorizonKind::q_positivity: return "q_positivity";
    }
    return "?";
}

Horizon detect_horizon(const GridFunction& values, HorizonKind kind) {
    if (kind == HorizonKind::full) throw std::invalid_argument("detect_horizon needs a crossing kind");
    const bool blow_up = kind == HorizonKind::p_blow_up;
    const double threshold = blow_up ? 1.0 : 0.0;
    auto valid = [&](double v) { return blow_up ? v < threshold : v > threshold; };

    const Grid& grid = values.grid();
    if (!valid(values[0]))
        throw HypothesisError(std::string("horizon condition fails at the left endpoint (") +
                              std::string(horizon_kind_name(kind)) + ")");

    std::size_t j = 0;
    while (j + 1 < values.size() && valid(values[j + 1])) ++j;
    if (j + 1 == values.size()) return {grid.intervals(), grid.beta(), HorizonKind::full};

    const double t0 = grid.node(j);
    const double t1 = grid.node(j + 1);
    const double v0 = values[j];
    const double v1 = values[j + 1];
    double time = t1;
    if (std::isfinite(v1)) {
        const double w = (threshold - v0) / (v1 - v0);
        if (w > 0.0 && w <= 1.0) time = t0 + w * (t1 - t0);
    }
    if (!(time > t0)) time = t1;
    return {j, time, kind};
}

}  // namespace gronwall
