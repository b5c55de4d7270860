#pragma once

namespace gfp {

/// Compensated (Kahan) accumulator. The discrepancy functionals are
/// differences of near-equal sums close to equilibrium, so plain
/// accumulation loses the signal before the tolerance does.
class KahanSum {
public:
    void add(double x) {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace gfp
