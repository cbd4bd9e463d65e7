#include "banditlab/ledger.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "banditlab/errors.hpp"

namespace banditlab {

PendingLedger::PendingLedger(std::size_t capacity) : buffer_(capacity, 0.0) {
    if (capacity < 1) throw ConfigError("ledger capacity must be >= 1");
}

void PendingLedger::deposit(std::size_t offset, double value) {
    if (offset == 0) throw std::logic_error("ledger deposit at offset 0");
    if (offset > buffer_.size())
        throw ConfigError("reward offset " + std::to_string(offset) + " exceeds ledger capacity " +
                          std::to_string(buffer_.size()));
    buffer_[(head_ + offset - 1) % buffer_.size()] += value;
    total_ += value;
}

double PendingLedger::deposit(const RewardVector& vector) {
    if (vector.empty()) return 0.0;
    if (vector.first_offset == 0) throw std::logic_error("ledger deposit at offset 0");
    if (vector.last_offset() > buffer_.size())
        throw ConfigError("reward offset " + std::to_string(vector.last_offset()) + " exceeds ledger capacity " +
                          std::to_string(buffer_.size()));
    const std::size_t cap = buffer_.size();
    const std::size_t slot = (head_ + vector.first_offset - 1) % cap;
    const std::size_t n = vector.values.size();
    const std::size_t first = std::min(n, cap - slot);
    const double* v = vector.values.data();
    double* b = buffer_.data();
    for (std::size_t j = 0; j < first; ++j) b[slot + j] += v[j];
    for (std::size_t j = first; j < n; ++j) b[j - first] += v[j];
    const double sum = vector.total();
    total_ += sum;
    return sum;
}

double PendingLedger::advance() {
    const double due = buffer_[head_];
    buffer_[head_] = 0.0;
    head_ = (head_ + 1) % buffer_.size();
    total_ -= due;
    if (total_ < 0.0) total_ = 0.0;  // rounding
    return due;
}

double PendingLedger::pending_at(std::size_t offset) const {
    if (offset == 0 || offset > buffer_.size()) return 0.0;
    return buffer_[(head_ + offset - 1) % buffer_.size()];
}

double PendingLedger::recomputed_total() const {
    return std::accumulate(buffer_.begin(), buffer_.end(), 0.0);
}

}  // namespace banditlab
