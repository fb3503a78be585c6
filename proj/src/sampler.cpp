// Copyright 2026 The retrobell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "retrobell/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"
#include "retrobell/angles.hpp"

namespace retrobell {

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t worker) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(worker), static_cast<std::uint32_t>(worker >> 32)};
    engine_.seed(seq);
}

double RandomStream::uniform() {
    // 53 random bits, offset by half an ulp so neither endpoint is reachable.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

EmpiricalDistribution EmpiricalDistribution::from_counts(const std::array<std::uint64_t, 4>& counts,
                                                         std::uint64_t seed) {
    EmpiricalDistribution e;
    e.counts = counts;
    e.seed = seed;
    for (auto c : counts) {
        e.n_samples += c;
    }
    if (e.n_samples == 0) {
        return e;
    }
    const double n = static_cast<double>(e.n_samples);
    for (std::size_t i = 0; i < 4; ++i) {
        const double f = static_cast<double>(counts[i]) / n;
        e.frequencies[i] = f;
        e.std_errors[i] = std::sqrt(f * (1.0 - f) / n);
    }
    return e;
}

AliasTable::AliasTable(const std::vector<double>& weights)
    : prob_(weights.size(), 1.0), alias_(weights.size()) {
    const std::size_t n = weights.size();
    if (n == 0) {
        throw std::invalid_argument("alias table needs at least one weight");
    }
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("alias table weights must be finite and non-negative");
        }
        sum += w;
    }
    if (!(sum > 0.0)) {
        throw std::invalid_argument("alias table weights sum to zero");
    }
    std::vector<double> scaled(n);
    std::vector<std::size_t> small;
    std::vector<std::size_t> large;
    for (std::size_t i = 0; i < n; ++i) {
        alias_[i] = i;
        scaled[i] = weights[i] * static_cast<double>(n) / sum;
        (scaled[i] < 1.0 ? small : large).push_back(i);
    }
    while (!small.empty() && !large.empty()) {
        const std::size_t s = small.back();
        small.pop_back();
        const std::size_t l = large.back();
        large.pop_back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    // Leftovers are 1 up to rounding.
    for (auto i : small) prob_[i] = 1.0;
    for (auto i : large) prob_[i] = 1.0;
}

std::size_t AliasTable::draw(RandomStream& rng) const {
    const std::size_t n = prob_.size();
    const auto i = std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)));
    return rng.uniform() < prob_[i] ? i : alias_[i];
}

namespace {

double lorentz_term(double x, double width) { return 1.0 / (x * x + width * width); }

// sum_{n > half_width} 1/((2 pi n + delta)^2 + width^2), by the midpoint
// Euler-Maclaurin formula: integral from half_width + 1/2 plus f'/24 there.
double tail_mass(double delta, double width, std::int64_t half_width) {
    const double x0 = static_cast<double>(half_width) + 0.5;
    const double z = kTwoPi * x0 + delta;
    const double integral = std::atan(width / z) / (kTwoPi * width);
    const double q = z * z + width * width;
    const double derivative = -2.0 * kTwoPi * z / (q * q);
    return integral + derivative / 24.0;
}

std::vector<double> table_weights(double delta, double width, std::int64_t half_width) {
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(2 * half_width + 1));
    for (std::int64_t n = -half_width; n <= half_width; ++n) {
        w.push_back(lorentz_term(delta + kTwoPi * static_cast<double>(n), width));
    }
    return w;
}

double validated_width(double width, std::int64_t half_width) {
    if (!(width > 0.0) || !std::isfinite(width) || half_width < 2) {
        throw std::invalid_argument("winding sampler needs width > 0 and a table half-width >= 2");
    }
    return width;
}

}  // namespace

WindingSampler::WindingSampler(double delta, double width, std::int64_t table_half_width)
    : delta_(reduce_angle(delta)),
      offset_(std::llround((delta - reduce_angle(delta)) / kTwoPi)),
      width_(validated_width(width, table_half_width)),
      half_width_(table_half_width),
      table_(table_weights(delta_, width, table_half_width)) {
    const auto weights = table_weights(delta_, width, table_half_width);
    double table_sum = 0.0;
    for (auto it = weights.rbegin(); it != weights.rend(); ++it) {
        table_sum += *it;
    }
    const double pos = tail_mass(delta_, width, table_half_width);
    const double neg = tail_mass(-delta_, width, table_half_width);
    tail_probability_ = (pos + neg) / (table_sum + pos + neg);
    positive_tail_share_ = pos / (pos + neg);
}

std::int64_t WindingSampler::draw(RandomStream& rng) const {
    std::int64_t n = 0;
    if (rng.uniform() < tail_probability_) {
        n = draw_tail(rng);
    } else {
        n = static_cast<std::int64_t>(table_.draw(rng)) - half_width_;
    }
    return n - offset_;
}

std::int64_t WindingSampler::draw_tail(RandomStream& rng) const {
    const bool positive = rng.uniform() < positive_tail_share_;
    const double d = positive ? delta_ : -delta_;
    const double x0 = static_cast<double>(half_width_) + 0.5;
    // Proposal P(K >= k) = x0 / (k - 1/2) for k > half_width; with |d| <= pi
    // the target-to-proposal ratio f(k) (k^2 - 1/4) never exceeds `bound`.
    const double bound = (x0 + 1.0) / (2.0 * kTwoPi * kPi * x0);
    for (;;) {
        const double x = x0 / rng.uniform() + 0.5;
        if (x >= 0x1.0p62) {
            continue;
        }
        const double k = std::floor(x);
        const double ratio = lorentz_term(kTwoPi * k + d, width_) * (k * k - 0.25) / bound;
        if (rng.uniform() < ratio) {
            const auto kk = static_cast<std::int64_t>(k);
            return positive ? kk : -kk;
        }
    }
}

double sample_split(double net, double gamma, RandomStream& rng) {
    const double g2 = gamma * gamma;
    const double floor_sum = 0.5 * net * net + 2.0 * g2;
    for (;;) {
        const double centre = rng.uniform() < 0.5 ? 0.0 : net;
        const double x = centre + gamma * std::tan(kPi * (rng.uniform() - 0.5));
        const double a = x * x + g2;
        const double b = (net - x) * (net - x) + g2;
        if (rng.uniform() * (a + b) < floor_sum) {
            return x;
        }
    }
}

HistorySampler::HistorySampler(const SettingsPair& settings, const WeightModel& model)
    : settings_(settings), model_(model), dist_(joint_distribution(settings, model)) {
    detail::require_symmetric(model, "history sampling");
    windings_.reserve(4);
    for (Outcome o : kOutcomes) {
        windings_.emplace_back(ontic_net_rotation(o, settings.theta()), 2.0 * model.gamma());
    }
}

History HistorySampler::draw(RandomStream& rng) const {
    History h;
    const double u = rng.uniform();
    double acc = 0.0;
    h.outcome = Outcome::AbarBbar;
    for (Outcome o : kOutcomes) {
        acc += dist_[o];
        if (u < acc) {
            h.outcome = o;
            break;
        }
    }
    const double required = ontic_net_rotation(h.outcome, settings_.theta());
    h.winding = windings_[index_of(h.outcome)].draw(rng);
    const double net = required + kTwoPi * static_cast<double>(h.winding);
    h.alpha = sample_split(net, model_.gamma(), rng);
    h.beta = net - h.alpha;
    const double alice_out = settings_.alice() + (alice_aligned(h.outcome) ? 0.0 : kPi);
    h.lambda = reduce_angle_positive(alice_out + h.alpha);
    return h;
}

History sample_history(const SettingsPair& settings, const WeightModel& model, RandomStream& rng) {
    return HistorySampler(settings, model).draw(rng);
}

namespace {

template <typename Visit>
std::vector<std::uint64_t> run_sampling(const HistorySampler& sampler, std::uint64_t n_samples,
                                        std::uint64_t seed, unsigned workers, Visit visit) {
    std::vector<std::array<std::uint64_t, 4>> per_worker(workers);
    detail::run_workers(n_samples, workers, [&](unsigned w, detail::Chunk chunk) {
        RandomStream rng(seed, w);
        std::array<std::uint64_t, 4> local{};
        for (std::uint64_t i = chunk.begin; i < chunk.end; ++i) {
            visit(sampler.draw(rng), local);
        }
        per_worker[w] = local;
    });
    std::vector<std::uint64_t> total(4, 0);
    for (const auto& local : per_worker) {
        for (std::size_t i = 0; i < 4; ++i) {
            total[i] += local[i];
        }
    }
    return total;
}

void require_samples(std::uint64_t n_samples) {
    if (n_samples == 0) {
        throw std::invalid_argument("n_samples must be at least 1");
    }
}

}  // namespace

EmpiricalDistribution estimate_distribution(const SettingsPair& settings, const WeightModel& model,
                                            std::uint64_t n_samples, std::uint64_t seed,
                                            unsigned workers) {
    require_samples(n_samples);
    const HistorySampler sampler(settings, model);
    const auto total = run_sampling(sampler, n_samples, seed, workers,
                                    [](const History& h, std::array<std::uint64_t, 4>& counts) {
                                        ++counts[index_of(h.outcome)];
                                    });
    return EmpiricalDistribution::from_counts({total[0], total[1], total[2], total[3]}, seed);
}

double anomaly_concentration(const SettingsPair& settings, const WeightModel& model,
                             std::uint64_t n_samples, std::uint64_t seed, double k,
                             unsigned workers) {
    require_samples(n_samples);
    if (!(k > 0.0)) {
        throw std::invalid_argument("concentration threshold k must be positive");
    }
    const HistorySampler sampler(settings, model);
    const double limit = k * model.gamma();
    const auto total = run_sampling(sampler, n_samples, seed, workers,
                                    [limit](const History& h, std::array<std::uint64_t, 4>& c) {
                                        const double a = std::abs(reduce_angle(h.alpha));
                                        const double b = std::abs(reduce_angle(h.beta));
                                        ++c[std::min(a, b) > limit ? 1 : 0];
                                    });
    return static_cast<double>(total[1]) / static_cast<double>(n_samples);
}

}  // namespace retrobell
