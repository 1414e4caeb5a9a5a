#include "slicesim/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace slicesim {

ValueNetwork::ValueNetwork(std::vector<int64_t> dims, uint64_t seed)
    : dims_(std::move(dims)) {
    if (dims_.size() < 2) {
        throw std::invalid_argument("ValueNetwork: need at least input and output dims");
    }
    for (int64_t d : dims_) {
        if (d <= 0) throw std::invalid_argument("ValueNetwork: dims must be positive");
    }

    size_t layers = dims_.size() - 1;
    weight_off_.resize(layers);
    bias_off_.resize(layers);
    size_t off = 0;
    for (size_t l = 0; l < layers; ++l) {
        weight_off_[l] = off;
        off += static_cast<size_t>(dims_[l + 1] * dims_[l]);
        bias_off_[l] = off;
        off += static_cast<size_t>(dims_[l + 1]);
    }
    num_params_ = static_cast<int64_t>(off);
    params_.resize(off);
    adam_m_.assign(off, 0.0);
    adam_v_.assign(off, 0.0);

    Rng rng(seed);
    for (size_t l = 0; l < layers; ++l) {
        double bound = 1.0 / std::sqrt(static_cast<double>(dims_[l]));
        size_t wcount = static_cast<size_t>(dims_[l + 1] * dims_[l]);
        for (size_t i = 0; i < wcount; ++i) {
            params_[weight_off_[l] + i] = rng.uniform(-bound, bound);
        }
        for (size_t i = 0; i < static_cast<size_t>(dims_[l + 1]); ++i) {
            params_[bias_off_[l] + i] = rng.uniform(-bound, bound);
        }
    }

    scratch_act_.resize(dims_.size());
    for (size_t i = 0; i < dims_.size(); ++i) {
        scratch_act_[i].resize(static_cast<size_t>(dims_[i]));
    }
}

void ValueNetwork::forward_layers(const double* input,
                                  std::vector<std::vector<double>>& act) const {
    std::copy(input, input + dims_[0], act[0].begin());
    size_t layers = dims_.size() - 1;
    for (size_t l = 0; l < layers; ++l) {
        int64_t in = dims_[l];
        int64_t out = dims_[l + 1];
        const double* w = params_.data() + weight_off_[l];
        const double* b = params_.data() + bias_off_[l];
        const double* x = act[l].data();
        double* y = act[l + 1].data();
        bool hidden = l < layers - 1;
        for (int64_t o = 0; o < out; ++o) {
            const double* row = w + o * in;
            double s = b[o];
            for (int64_t i = 0; i < in; ++i) s += row[i] * x[i];
            y[o] = hidden && s < 0.0 ? 0.0 : s;
        }
    }
}

const std::vector<double>& ValueNetwork::forward(const double* input) const {
    forward_layers(input, scratch_act_);
    return scratch_act_.back();
}

std::vector<double> ValueNetwork::evaluate(const std::vector<double>& input) const {
    if (static_cast<int64_t>(input.size()) != dims_[0]) {
        throw std::invalid_argument("ValueNetwork::evaluate input dimension mismatch");
    }
    return forward(input.data());
}

void ValueNetwork::accumulate_gradient(const QBatch& batch, std::vector<double>& grad,
                                       double& loss_out) const {
    if (batch.in_dim != dims_[0]) {
        throw std::invalid_argument("ValueNetwork: batch input dimension mismatch");
    }
    if (batch.size <= 0) {
        throw std::invalid_argument("ValueNetwork: batch must not be empty");
    }
    size_t layers = dims_.size() - 1;
    int64_t n = batch.size;
    int64_t in_dim = batch.in_dim;
    int64_t out_dim = dims_.back();

    // Group samples by identical input so each distinct input costs one
    // forward and one dense backward pass.
    std::vector<int64_t> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    const double* inputs = batch.inputs.data();
    std::stable_sort(order.begin(), order.end(), [&](int64_t a, int64_t b) {
        return std::lexicographical_compare(
            inputs + a * in_dim, inputs + (a + 1) * in_dim,
            inputs + b * in_dim, inputs + (b + 1) * in_dim);
    });
    auto same_input = [&](int64_t a, int64_t b) {
        return std::equal(inputs + a * in_dim, inputs + (a + 1) * in_dim,
                          inputs + b * in_dim);
    };

    loss_out = 0.0;
    std::vector<double> dh;
    std::vector<double> dz;
    std::vector<double> dh_prev;

    size_t g = 0;
    while (g < order.size()) {
        size_t end = g + 1;
        while (end < order.size() && same_input(order[g], order[end])) ++end;
        const double* x = inputs + order[g] * in_dim;
        forward_layers(x, scratch_act_);
        const std::vector<double>& q = scratch_act_.back();

        // Output-layer error, accumulated sparsely over the group's rows.
        size_t lw = weight_off_[layers - 1];
        size_t lb = bias_off_[layers - 1];
        const std::vector<double>& h_last = scratch_act_[layers - 1];
        int64_t h_dim = dims_[layers - 1];
        dh.assign(static_cast<size_t>(h_dim), 0.0);
        for (size_t s = g; s < end; ++s) {
            int64_t row = batch.rows[static_cast<size_t>(order[s])];
            if (row < 0 || row >= out_dim) {
                throw std::out_of_range("ValueNetwork: batch row out of range");
            }
            double diff = q[static_cast<size_t>(row)] -
                          batch.targets[static_cast<size_t>(order[s])];
            loss_out += diff * diff;
            double err = 2.0 * diff / static_cast<double>(n);
            double* gw_row = grad.data() + lw + row * h_dim;
            const double* w_row = params_.data() + lw + row * h_dim;
            for (int64_t i = 0; i < h_dim; ++i) {
                gw_row[i] += err * h_last[static_cast<size_t>(i)];
                dh[static_cast<size_t>(i)] += err * w_row[i];
            }
            grad[lb + static_cast<size_t>(row)] += err;
        }

        // Dense backward through the hidden stack, once per group.
        std::vector<double>* cur = &dh;
        for (size_t l = layers - 1; l-- > 0;) {
            int64_t out = dims_[l + 1];
            int64_t in = dims_[l];
            const std::vector<double>& a_out = scratch_act_[l + 1];
            const std::vector<double>& a_in = scratch_act_[l];
            dz.assign(static_cast<size_t>(out), 0.0);
            for (int64_t o = 0; o < out; ++o) {
                dz[static_cast<size_t>(o)] =
                    a_out[static_cast<size_t>(o)] > 0.0 ? (*cur)[static_cast<size_t>(o)] : 0.0;
            }
            double* gw = grad.data() + weight_off_[l];
            double* gb = grad.data() + bias_off_[l];
            const double* w = params_.data() + weight_off_[l];
            dh_prev.assign(static_cast<size_t>(in), 0.0);
            for (int64_t o = 0; o < out; ++o) {
                double d = dz[static_cast<size_t>(o)];
                if (d == 0.0) continue;
                double* gw_row = gw + o * in;
                const double* w_row = w + o * in;
                for (int64_t i = 0; i < in; ++i) {
                    gw_row[i] += d * a_in[static_cast<size_t>(i)];
                    dh_prev[static_cast<size_t>(i)] += d * w_row[i];
                }
                gb[o] += d;
            }
            dh.swap(dh_prev);
            cur = &dh;
        }
        g = end;
    }
    loss_out /= static_cast<double>(n);
}

double ValueNetwork::loss(const QBatch& batch) const {
    if (batch.in_dim != dims_[0] || batch.size <= 0) {
        throw std::invalid_argument("ValueNetwork::loss bad batch");
    }
    double total = 0.0;
    for (int64_t s = 0; s < batch.size; ++s) {
        const std::vector<double>& q = forward(batch.inputs.data() + s * batch.in_dim);
        double diff = q[static_cast<size_t>(batch.rows[static_cast<size_t>(s)])] -
                      batch.targets[static_cast<size_t>(s)];
        total += diff * diff;
    }
    return total / static_cast<double>(batch.size);
}

std::vector<double> ValueNetwork::gradient(const QBatch& batch) const {
    std::vector<double> grad(params_.size(), 0.0);
    double loss_ignored = 0.0;
    accumulate_gradient(batch, grad, loss_ignored);
    return grad;
}

double ValueNetwork::train(const QBatch& batch) {
    scratch_grad_.assign(params_.size(), 0.0);
    double batch_loss = 0.0;
    accumulate_gradient(batch, scratch_grad_, batch_loss);

    ++adam_t_;
    double bc1 = 1.0 - std::pow(adam_.beta1, static_cast<double>(adam_t_));
    double bc2 = 1.0 - std::pow(adam_.beta2, static_cast<double>(adam_t_));
    // Moments of parameters that stop receiving gradient decay toward zero
    // geometrically and soon underflow into denormal range, where arithmetic
    // is microcoded and an update sweep runs several times slower. Snap them
    // to their limit instead; 1e-300 is far below anything the step can see.
    constexpr double kTiny = 1e-300;
    for (size_t i = 0; i < params_.size(); ++i) {
        double gfloat = scratch_grad_[i];
        double m = adam_.beta1 * adam_m_[i] + (1.0 - adam_.beta1) * gfloat;
        double v = adam_.beta2 * adam_v_[i] + (1.0 - adam_.beta2) * gfloat * gfloat;
        adam_m_[i] = std::abs(m) < kTiny ? 0.0 : m;
        adam_v_[i] = v < kTiny ? 0.0 : v;
        params_[i] -= adam_.lr * (m / bc1) / (std::sqrt(v / bc2) + adam_.eps);
    }
    ++revision_;
    return batch_loss;
}

std::vector<double> ValueNetwork::flat_params() const { return params_; }

void ValueNetwork::set_flat_params(const std::vector<double>& p) {
    if (p.size() != params_.size()) {
        throw std::invalid_argument("ValueNetwork::set_flat_params size mismatch");
    }
    params_ = p;
    ++revision_;
}

void ValueNetwork::copy_params_from(const ValueNetwork& other) {
    if (other.dims_ != dims_) {
        throw std::invalid_argument("ValueNetwork::copy_params_from shape mismatch");
    }
    params_ = other.params_;
    ++revision_;
}

}  // namespace slicesim
