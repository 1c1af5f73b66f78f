#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spikerate::core {

// Ordered spike epochs 0 < l_1 < l_2 < … ≤ L. Immutable after construction.
class SpikeTrain {
  public:
    SpikeTrain(std::vector<double> epochs, double horizon);

    const std::vector<double>& epochs() const { return epochs_; }
    double horizon() const { return horizon_; }
    std::size_t size() const { return epochs_.size(); }

  private:
    std::vector<double> epochs_;
    double horizon_;
};

// ISI sample T_i = l_i − l_{i−1} (l_0 = origin). Immutable.
class IsiSequence {
  public:
    explicit IsiSequence(std::vector<double> isis, double origin = 0.0);

    const std::vector<double>& isis() const { return isis_; }
    double origin() const { return origin_; }
    std::size_t size() const { return isis_.size(); }

  private:
    std::vector<double> isis_;
    double origin_;
};

// Differencing with error feedback: each ISI is taken against the running
// reconstruction (with a one-ulp fix-up if needed), so origin + cumulative sums
// reproduce the input epochs bit-exactly for any representable input.
IsiSequence from_spike_times(std::span<const double> epochs, double horizon);
IsiSequence from_spike_times(const SpikeTrain& train);

// Inverse: origin + cumulative sums of the ISIs; horizon defaults to the last epoch.
SpikeTrain to_spike_train(const IsiSequence& isi);
SpikeTrain to_spike_train(const IsiSequence& isi, double horizon);

// Counting process N(t) = #{epochs ≤ t}; right-continuous, N(0) = 0.
class CountingView {
  public:
    explicit CountingView(const SpikeTrain& train) : train_(&train) {}

    // Requires 0 ≤ t ≤ horizon.
    std::size_t count_at(double t) const;
    // N(t)/t; requires t > 0.
    double count_rate(double t) const;

  private:
    const SpikeTrain* train_;
};

// n / Σ T_i (inverse of the average ISI).
double mean_rate(const IsiSequence& isi);

// (1/n) Σ 1/T_i; ≥ mean_rate by Jensen.
double instantaneous_mean_rate(const IsiSequence& isi);

} // namespace spikerate::core
