#include "dpad/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "dpad/error.hpp"

namespace dpad {

AdamOptimizer::AdamOptimizer(nn::ParameterSet& params, double lr, double beta1, double beta2,
                             double eps)
    : params_(params), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    for (const auto& e : params_.entries()) {
        m_.emplace_back(e.second.rows(), e.second.cols());
        v_.emplace_back(e.second.rows(), e.second.cols());
    }
}

void AdamOptimizer::step() {
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    const auto& entries = params_.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        nn::Var p = entries[i].second;
        const Matrix& g = p.grad();
        Matrix& w = p.mutable_value();
        Matrix& m = m_[i];
        Matrix& v = v_[i];
        for (std::size_t k = 0; k < w.size(); ++k) {
            m[k] = beta1_ * m[k] + (1.0 - beta1_) * g[k];
            v[k] = beta2_ * v[k] + (1.0 - beta2_) * g[k] * g[k];
            const double mhat = m[k] / c1;
            const double vhat = v[k] / c2;
            w[k] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

double clip_grad_norm(nn::ParameterSet& params, double max_norm) {
    double sq = 0.0;
    for (const auto& e : params.entries()) {
        for (double g : e.second.grad().data()) sq += g * g;
    }
    const double norm = std::sqrt(sq);
    if (max_norm > 0.0 && norm > max_norm) {
        const double s = max_norm / norm;
        for (auto& e : params.entries()) {
            nn::Var v = e.second;
            for (auto& g : v.mutable_grad().storage()) g *= s;
        }
    }
    return norm;
}

nlohmann::json TrainingHistory::to_json() const {
    nlohmann::json epochs_json = nlohmann::json::array();
    for (const auto& e : epochs) {
        epochs_json.push_back({{"epoch", e.epoch},
                               {"train_loss", e.train_loss},
                               {"val_mse", e.val_mse},
                               {"val_mae", e.val_mae},
                               {"seconds", e.seconds}});
    }
    return {{"epochs", epochs_json},
            {"best_epoch", best_epoch},
            {"best_val_mse", best_val_mse},
            {"early_stopped", early_stopped}};
}

ErrorMetrics evaluate_model(const DPadModel& model, const WindowSet& windows, std::size_t steps) {
    const std::size_t h = model.config().horizon;
    if (steps == 0) steps = h;
    if (steps > h) throw ValidationError("evaluate: requested horizon exceeds the model horizon");
    if (windows.size() == 0 || windows.channel_count() == 0) {
        throw ValidationError("evaluate: empty window set");
    }
    if (windows.horizon() < steps) throw ValidationError("evaluate: windows are too short");
    double se = 0.0;
    double ae = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        for (std::size_t c = 0; c < windows.channel_count(); ++c) {
            const auto pred = model.predict(windows.input(i, c));
            const auto truth = windows.target(i, c);
            for (std::size_t t = 0; t < steps; ++t) {
                const double d = truth[t] - pred[t];
                se += d * d;
                ae += std::fabs(d);
            }
            n += steps;
        }
    }
    return {se / static_cast<double>(n), ae / static_cast<double>(n)};
}

ErrorMetrics evaluate_persistence(const WindowSet& windows) {
    if (windows.size() == 0) throw ValidationError("evaluate: empty window set");
    double se = 0.0;
    double ae = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        for (std::size_t c = 0; c < windows.channel_count(); ++c) {
            const double last = windows.input(i, c).back();
            for (double y : windows.target(i, c)) {
                se += (y - last) * (y - last);
                ae += std::fabs(y - last);
                ++n;
            }
        }
    }
    return {se / static_cast<double>(n), ae / static_cast<double>(n)};
}

TrainingHistory train(DPadModel& model, const WindowSet& train_set, const WindowSet& val_set,
                      const TrainOptions& options) {
    const ModelConfig& cfg = model.config();
    if (train_set.size() == 0 || val_set.size() == 0) {
        throw ValidationError("train: training and validation sets must be non-empty");
    }
    if (train_set.lookback() != cfg.lookback || train_set.horizon() != cfg.horizon) {
        throw ValidationError("train: window shape does not match the model");
    }

    // One sample per (window, channel) pair.
    std::vector<std::pair<std::size_t, std::size_t>> samples;
    for (std::size_t i = 0; i < train_set.size(); ++i) {
        for (std::size_t c = 0; c < train_set.channel_count(); ++c) samples.emplace_back(i, c);
    }

    nn::ParameterSet& params = model.parameters();
    AdamOptimizer optimizer(params, cfg.learning_rate);
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

    TrainingHistory history;
    auto best = model.snapshot();
    double best_mse = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;

    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        std::shuffle(samples.begin(), samples.end(), rng);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < samples.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(samples.size(), start + cfg.batch_size);
            const double weight = 1.0 / static_cast<double>(end - start);
            optimizer.zero_grad();
            for (std::size_t s = start; s < end; ++s) {
                const auto [w, c] = samples[s];
                nn::Var loss;
                try {
                    const nn::Var pred =
                        model.forward(nn::Var::constant(Matrix::column(train_set.input(w, c))));
                    loss = nn::l1_loss(pred, train_set.target(w, c));
                } catch (const ValidationError& e) {
                    std::ostringstream msg;
                    msg << "epoch " << epoch << ", sample " << s << ": forward failed (" << e.what()
                        << ")";
                    throw TrainingDiverged(msg.str());
                }
                if (!std::isfinite(loss.item())) {
                    std::ostringstream msg;
                    msg << "epoch " << epoch << ", sample " << s << ": non-finite loss";
                    throw TrainingDiverged(msg.str());
                }
                loss_sum += loss.item();
                loss.backward(Matrix(1, 1, weight));
            }
            if (cfg.grad_clip_norm > 0.0) clip_grad_norm(params, cfg.grad_clip_norm);
            optimizer.step();
        }

        const ErrorMetrics val = evaluate_model(model, val_set);
        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_loss = loss_sum / static_cast<double>(samples.size());
        rec.val_mse = val.mse;
        rec.val_mae = val.mae;
        rec.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        history.epochs.push_back(rec);
        if (options.on_epoch) options.on_epoch(rec);

        if (!std::isfinite(val.mse)) {
            throw TrainingDiverged("epoch " + std::to_string(epoch) + ": non-finite validation MSE");
        }
        if (val.mse < best_mse) {
            best_mse = val.mse;
            history.best_epoch = epoch;
            best = model.snapshot();
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            history.early_stopped = true;
            break;
        }
    }
    model.load_values(best);
    history.best_val_mse = best_mse;
    return history;
}

}  // namespace dpad
