// Copyright 2026 The bellbound Authors
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

#pragma once

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"
#include "state.hpp"

namespace bellbound {

inline constexpr double kDichotomicTol = 1e-12;

/// Outcome of validate_dichotomic. `failed_check` is empty when ok.
struct DichotomicReport {
    bool ok = true;
    std::string failed_check;  // "hermitian" or "involution"
    double residual = 0.0;     // max-entry residual of the failed check
};

/// Checks ||M - M^dagger||_max <= 1e-12 and ||M^2 - I||_max <= 1e-12.
inline DichotomicReport validate_dichotomic(const ComplexMatrix &m) {
    const double herm = m.hermitian_residual();
    if (herm > kDichotomicTol) {
        return {false, "hermitian", herm};
    }
    const double inv = max_abs_diff(m * m, ComplexMatrix::identity(m.dim()));
    if (inv > kDichotomicTol) {
        return {false, "involution", inv};
    }
    return {};
}

/// cos(theta) sigma_x + sin(theta) sigma_y
inline ComplexMatrix planar_observable(double theta) {
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("planar_observable: non-finite angle");
    }
    const Complex phase = std::polar(1.0, theta);
    return ComplexMatrix{{0.0, std::conj(phase)}, {phase, 0.0}};
}

/// n.sigma for the normalized direction n.
inline ComplexMatrix bloch_observable(double nx, double ny, double nz) {
    const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw std::invalid_argument("bloch_observable: direction must be finite and nonzero");
    }
    nx /= norm;
    ny /= norm;
    nz /= norm;
    return ComplexMatrix{{nz, Complex(nx, -ny)}, {Complex(nx, ny), -nz}};
}

/// A +-1-valued observable of one party (1-based) for one setting (0 or 1).
class DichotomicObservable {
   public:
    DichotomicObservable(ComplexMatrix local, int party, int setting)
        : local_(std::move(local)), party_(party), setting_(setting) {
        if (party < 1) {
            throw std::out_of_range("DichotomicObservable: party index must be >= 1");
        }
        if (setting != 0 && setting != 1) {
            throw std::out_of_range("DichotomicObservable: setting must be 0 or 1");
        }
        if (const auto report = validate_dichotomic(local_); !report.ok) {
            throw InvariantViolation("DichotomicObservable: " + report.failed_check + " check failed, residual " +
                                     std::to_string(report.residual));
        }
    }

    [[nodiscard]] const ComplexMatrix &local() const noexcept { return local_; }
    [[nodiscard]] int party() const noexcept { return party_; }
    [[nodiscard]] int setting() const noexcept { return setting_; }

   private:
    ComplexMatrix local_;
    int party_;
    int setting_;
};

/// One factor of a product operator: `op` acting on slot `party` (1-based).
struct SlotFactor {
    int party;
    ComplexMatrix op;
};

/// Kronecker product over all slots, identity where no factor is given.
/// `party_dims[k]` is the local dimension of party k+1.
inline ComplexMatrix embed_product(std::span<const std::size_t> party_dims, std::span<const SlotFactor> factors) {
    const int n = static_cast<int>(party_dims.size());
    std::vector<const ComplexMatrix *> slot(party_dims.size(), nullptr);
    for (const auto &f : factors) {
        if (f.party < 1 || f.party > n) {
            throw std::out_of_range("embed: party " + std::to_string(f.party) + " outside [1, " + std::to_string(n) +
                                    "]");
        }
        if (f.op.dim() != party_dims[f.party - 1]) {
            throw DimensionError("embed: factor dimension does not match party dimension");
        }
        if (slot[f.party - 1] != nullptr) {
            throw std::invalid_argument("embed: two factors on party " + std::to_string(f.party));
        }
        slot[f.party - 1] = &f.op;
    }
    std::size_t total = 1;
    for (auto d : party_dims) {
        total *= d;
        if (total > kMaxDim) {
            throw DimensionError("embed: full dimension exceeds cap");
        }
    }
    ComplexMatrix out = ComplexMatrix::identity(1);
    for (int k = 0; k < n; ++k) {
        out = tensor_product(out, slot[k] ? *slot[k] : ComplexMatrix::identity(party_dims[k]));
    }
    return out;
}

/// Qubit convenience: every party has dimension 2 except where a factor says otherwise.
inline ComplexMatrix embed_product(int n_parties, std::span<const SlotFactor> factors) {
    if (n_parties < 1 || n_parties > kMaxParties) {
        throw std::out_of_range("embed: n_parties outside [1, 12]");
    }
    std::vector<std::size_t> dims(static_cast<std::size_t>(n_parties), 2);
    for (const auto &f : factors) {
        if (f.party >= 1 && f.party <= n_parties) {
            dims[f.party - 1] = f.op.dim();
        }
    }
    return embed_product(std::span<const std::size_t>(dims), factors);
}

inline ComplexMatrix embed_local(const ComplexMatrix &local, int party, int n_parties) {
    const SlotFactor f{party, local};
    return embed_product(n_parties, std::span(&f, 1));
}

/// I (x) ... (x) local (x) ... (x) I with local at the observable's party slot.
inline ComplexMatrix embed(const DichotomicObservable &obs, int n_parties) {
    return embed_local(obs.local(), obs.party(), n_parties);
}

/// Thread-safe memo of embedded observables keyed by (party, setting).
/// Concurrent readers share a lock; the first writer for a key wins.
class EmbeddingCache {
   public:
    template <class Build>
    std::shared_ptr<const ComplexMatrix> get_or_build(int party, int setting, Build &&build) {
        const Key key{party, setting};
        {
            std::shared_lock lock(mutex_);
            if (auto it = entries_.find(key); it != entries_.end()) {
                return it->second;
            }
        }
        auto built = std::make_shared<const ComplexMatrix>(build());
        std::unique_lock lock(mutex_);
        return entries_.try_emplace(key, std::move(built)).first->second;
    }

    [[nodiscard]] std::size_t size() const {
        std::shared_lock lock(mutex_);
        return entries_.size();
    }

   private:
    using Key = std::pair<int, int>;
    mutable std::shared_mutex mutex_;
    std::map<Key, std::shared_ptr<const ComplexMatrix>> entries_;
};

enum class ObservableFamily { planar, bloch, custom };

/// Planar angles theta_i^(n); index k holds party k+1.
struct PlanarAngles {
    std::vector<double> theta0;
    std::vector<double> theta1;
};

/// Two dichotomic observables for each of N parties.
class MeasurementScenario {
   public:
    /// `observables` must hold, for every party 1..N, exactly one observable per setting.
    explicit MeasurementScenario(std::vector<DichotomicObservable> observables,
                                 ObservableFamily family = ObservableFamily::custom,
                                 std::optional<PlanarAngles> angles = std::nullopt)
        : family_(family), angles_(std::move(angles)), cache_(std::make_shared<EmbeddingCache>()) {
        if (observables.empty() || observables.size() % 2 != 0) {
            throw std::invalid_argument("MeasurementScenario: need exactly two observables per party");
        }
        n_parties_ = static_cast<int>(observables.size() / 2);
        if (n_parties_ > kMaxParties) {
            throw std::out_of_range("MeasurementScenario: more than 12 parties");
        }
        std::vector<std::optional<DichotomicObservable>> slots(observables.size());
        for (auto &obs : observables) {
            if (obs.party() > n_parties_) {
                throw std::invalid_argument("MeasurementScenario: party index " + std::to_string(obs.party()) +
                                            " exceeds party count");
            }
            auto &slot = slots[index(obs.party(), obs.setting())];
            if (slot) {
                throw std::invalid_argument("MeasurementScenario: duplicate observable for party " +
                                            std::to_string(obs.party()));
            }
            slot = std::move(obs);
        }
        observables_.reserve(slots.size());
        for (auto &slot : slots) {
            observables_.push_back(std::move(*slot));
        }
        for (int p = 1; p <= n_parties_; ++p) {
            if (local(p, 0).dim() != local(p, 1).dim()) {
                throw DimensionError("MeasurementScenario: settings of one party differ in dimension");
            }
            party_dims_.push_back(local(p, 0).dim());
        }
        if (angles_ && (angles_->theta0.size() != static_cast<std::size_t>(n_parties_) ||
                        angles_->theta1.size() != static_cast<std::size_t>(n_parties_))) {
            throw std::invalid_argument("MeasurementScenario: angle record does not match party count");
        }
    }

    /// Observables cos(theta) sigma_x + sin(theta) sigma_y per party and setting.
    static MeasurementScenario planar(std::span<const double> theta0, std::span<const double> theta1) {
        if (theta0.size() != theta1.size() || theta0.empty()) {
            throw std::invalid_argument("planar scenario: theta0 and theta1 must be nonempty and equally long");
        }
        std::vector<DichotomicObservable> obs;
        for (std::size_t k = 0; k < theta0.size(); ++k) {
            obs.emplace_back(planar_observable(theta0[k]), static_cast<int>(k) + 1, 0);
            obs.emplace_back(planar_observable(theta1[k]), static_cast<int>(k) + 1, 1);
        }
        return MeasurementScenario(std::move(obs), ObservableFamily::planar,
                                   PlanarAngles{{theta0.begin(), theta0.end()}, {theta1.begin(), theta1.end()}});
    }

    /// directions[k][i] is the (unnormalized) Bloch direction of party k+1, setting i.
    static MeasurementScenario bloch(std::span<const std::array<std::array<double, 3>, 2>> directions) {
        std::vector<DichotomicObservable> obs;
        for (std::size_t k = 0; k < directions.size(); ++k) {
            for (int i = 0; i < 2; ++i) {
                const auto &n = directions[k][i];
                obs.emplace_back(bloch_observable(n[0], n[1], n[2]), static_cast<int>(k) + 1, i);
            }
        }
        return MeasurementScenario(std::move(obs), ObservableFamily::bloch);
    }

    [[nodiscard]] int n_parties() const noexcept { return n_parties_; }
    [[nodiscard]] ObservableFamily family() const noexcept { return family_; }
    [[nodiscard]] const std::optional<PlanarAngles> &angles() const noexcept { return angles_; }
    [[nodiscard]] std::span<const std::size_t> party_dims() const noexcept { return party_dims_; }

    [[nodiscard]] std::size_t dim() const noexcept {
        std::size_t d = 1;
        for (auto k : party_dims_) {
            d *= k;
        }
        return d;
    }

    [[nodiscard]] const DichotomicObservable &observable(int party, int setting) const {
        check_party(party);
        if (setting != 0 && setting != 1) {
            throw std::out_of_range("setting must be 0 or 1");
        }
        return observables_[index(party, setting)];
    }

    [[nodiscard]] const ComplexMatrix &local(int party, int setting) const {
        return observable(party, setting).local();
    }

    /// Full-space operator of one observable; built once and shared.
    [[nodiscard]] std::shared_ptr<const ComplexMatrix> embedded(int party, int setting) const {
        const auto &obs = observable(party, setting);
        return cache_->get_or_build(party, setting, [&] {
            const SlotFactor f{party, obs.local()};
            return embed_product(party_dims(), std::span(&f, 1));
        });
    }

    /// Product operator with the given local factors, identity elsewhere.
    [[nodiscard]] ComplexMatrix product(std::span<const SlotFactor> factors) const {
        return embed_product(party_dims(), factors);
    }

    /// Same observables with setting labels 0 <-> 1 exchanged at every party.
    [[nodiscard]] MeasurementScenario swapped_settings() const {
        std::vector<DichotomicObservable> obs;
        for (int p = 1; p <= n_parties_; ++p) {
            obs.emplace_back(local(p, 1), p, 0);
            obs.emplace_back(local(p, 0), p, 1);
        }
        std::optional<PlanarAngles> swapped;
        if (angles_) {
            swapped = PlanarAngles{angles_->theta1, angles_->theta0};
        }
        return MeasurementScenario(std::move(obs), family_, std::move(swapped));
    }

    /// Number of embedded operators built so far.
    [[nodiscard]] std::size_t cached_embeddings() const { return cache_->size(); }

   private:
    static std::size_t index(int party, int setting) { return static_cast<std::size_t>(2 * (party - 1) + setting); }

    void check_party(int party) const {
        if (party < 1 || party > n_parties_) {
            throw std::out_of_range("party " + std::to_string(party) + " outside [1, " + std::to_string(n_parties_) +
                                    "]");
        }
    }

    int n_parties_ = 0;
    ObservableFamily family_;
    std::optional<PlanarAngles> angles_;
    std::vector<DichotomicObservable> observables_;
    std::vector<std::size_t> party_dims_;
    std::shared_ptr<EmbeddingCache> cache_;
};

}  // namespace bellbound
