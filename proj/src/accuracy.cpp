#include "slicesim/accuracy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slicesim {

namespace {

double raw_eval(const std::array<double, 3>& a, const std::array<double, 3>& b, double u) {
    return a[0] * std::exp(b[0] * u) + a[1] * std::exp(b[1] * u) + a[2] * std::exp(b[2] * u);
}

} // namespace

AccuracyModel::AccuracyModel(std::array<double, 3> amplitudes, std::array<double, 3> rates)
    : a_(amplitudes), b_(rates) {
    // dense monotonicity check on the clamped curve
    constexpr int kSamples = 1000;
    double prev = evaluate(0.0);
    for (int i = 1; i <= kSamples; ++i) {
        const double u = static_cast<double>(i) / kSamples;
        const double cur = evaluate(u);
        if (cur < prev - 1e-12)
            throw std::invalid_argument("AccuracyModel: curve decreases on [0,1]");
        prev = cur;
    }
}

double AccuracyModel::evaluate(double u) const {
    return std::clamp(raw_eval(a_, b_, u), 0.0, 1.0);
}

double normalized_effort(double data_fraction, int epochs, int max_epochs) {
    return data_fraction * (static_cast<double>(epochs) / static_cast<double>(max_epochs));
}

} // namespace slicesim
