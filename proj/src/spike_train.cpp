#include "spikerate/spike_train.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spikerate/errors.hpp"

namespace spikerate::core {

SpikeTrain::SpikeTrain(std::vector<double> epochs, double horizon)
    : epochs_(std::move(epochs)), horizon_(horizon) {
    if (!(horizon_ > 0.0)) throw RejectedInput("SpikeTrain: horizon must be positive");
    for (std::size_t i = 0; i < epochs_.size(); ++i) {
        if (!std::isfinite(epochs_[i]) || epochs_[i] <= 0.0)
            throw RejectedInput("SpikeTrain: epoch at index " + std::to_string(i) +
                                " is not strictly positive");
        if (i > 0 && epochs_[i] <= epochs_[i - 1])
            throw RejectedInput("SpikeTrain: epochs not strictly increasing at index " +
                                std::to_string(i));
        if (epochs_[i] > horizon_)
            throw RejectedInput("SpikeTrain: epoch at index " + std::to_string(i) +
                                " exceeds horizon");
    }
}

IsiSequence::IsiSequence(std::vector<double> isis, double origin)
    : isis_(std::move(isis)), origin_(origin) {
    for (std::size_t i = 0; i < isis_.size(); ++i)
        if (!std::isfinite(isis_[i]) || isis_[i] <= 0.0)
            throw RejectedInput("IsiSequence: ISI at index " + std::to_string(i) +
                                " is not strictly positive");
}

IsiSequence from_spike_times(std::span<const double> epochs, double horizon) {
    SpikeTrain checked(std::vector<double>(epochs.begin(), epochs.end()), horizon);
    return from_spike_times(checked);
}

IsiSequence from_spike_times(const SpikeTrain& train) {
    const auto& e = train.epochs();
    std::vector<double> isis;
    isis.reserve(e.size());
    double running = 0.0; // reconstructed prefix, kept bit-equal to the source epochs
    for (double epoch : e) {
        double t = epoch - running;
        if (running + t != epoch) {
            // one-ulp fix-up; the neighbour of the rounded difference always lands exactly
            const double up = std::nextafter(t, INFINITY);
            const double down = std::nextafter(t, -INFINITY);
            if (running + up == epoch) t = up;
            else if (running + down == epoch) t = down;
        }
        isis.push_back(t);
        running += t;
    }
    return IsiSequence(std::move(isis), 0.0);
}

SpikeTrain to_spike_train(const IsiSequence& isi) {
    double running = isi.origin();
    for (double t : isi.isis()) running += t;
    return to_spike_train(isi, running);
}

SpikeTrain to_spike_train(const IsiSequence& isi, double horizon) {
    std::vector<double> epochs;
    epochs.reserve(isi.size());
    double running = isi.origin();
    for (double t : isi.isis()) {
        running += t;
        epochs.push_back(running);
    }
    return SpikeTrain(std::move(epochs), horizon);
}

std::size_t CountingView::count_at(double t) const {
    if (!(t >= 0.0) || t > train_->horizon())
        throw RejectedInput("count_at: t outside [0, horizon]");
    const auto& e = train_->epochs();
    return static_cast<std::size_t>(std::upper_bound(e.begin(), e.end(), t) - e.begin());
}

double CountingView::count_rate(double t) const {
    if (!(t > 0.0)) throw RejectedInput("count_rate: requires t > 0");
    return static_cast<double>(count_at(t)) / t;
}

double mean_rate(const IsiSequence& isi) {
    if (isi.size() == 0) throw InsufficientData("mean_rate: empty ISI sequence");
    double sum = 0.0;
    for (double t : isi.isis()) sum += t;
    return static_cast<double>(isi.size()) / sum;
}

double instantaneous_mean_rate(const IsiSequence& isi) {
    if (isi.size() == 0)
        throw InsufficientData("instantaneous_mean_rate: empty ISI sequence");
    double sum = 0.0;
    for (double t : isi.isis()) sum += 1.0 / t;
    return sum / static_cast<double>(isi.size());
}

} // namespace spikerate::core
