#pragma once

#include <array>

namespace slicesim {

// Saturating learning curve A(u) = clamp(sum_i a_i * exp(b_i * u), 0, 1) over
// normalized training effort u in [0, 1]. Construction rejects coefficient
// sets whose clamped curve is not non-decreasing (checked by dense sampling).
class AccuracyModel {
public:
    AccuracyModel(std::array<double, 3> amplitudes, std::array<double, 3> rates);

    // clamped accuracy at effort u
    double evaluate(double u) const;

    const std::array<double, 3>& amplitudes() const { return a_; }
    const std::array<double, 3>& rates() const { return b_; }

private:
    std::array<double, 3> a_;
    std::array<double, 3> b_;
};

// Effort a slice invests in training: the fraction of the dataset touched,
// scaled by how many passes are made relative to the grid maximum.
double normalized_effort(double data_fraction, int epochs, int max_epochs);

} // namespace slicesim
