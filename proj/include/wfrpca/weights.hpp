#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace wfrpca {

// Diagonal weight matrix W: strictly positive, non-increasing entries.
class WeightSpec {
public:
    explicit WeightSpec(std::vector<double> weights) : weights_(std::move(weights)) {
        if (weights_.empty()) throw std::invalid_argument("WeightSpec: empty weights");
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            if (!(weights_[i] > 0.0))
                throw std::invalid_argument("WeightSpec: weights must be strictly positive");
            if (i > 0 && weights_[i] > weights_[i - 1])
                throw std::invalid_argument("WeightSpec: weights must be non-increasing");
        }
    }

    static WeightSpec identity(int r) { return WeightSpec(std::vector<double>(r, 1.0)); }

    int size() const { return static_cast<int>(weights_.size()); }
    double operator[](int i) const { return weights_[i]; }
    std::span<const double> values() const { return weights_; }

    std::vector<double> inverse() const {
        std::vector<double> inv(weights_.size());
        for (std::size_t i = 0; i < weights_.size(); ++i) inv[i] = 1.0 / weights_[i];
        return inv;
    }

private:
    std::vector<double> weights_;
};

}  // namespace wfrpca
