#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace lasso {

// ---------------------------------------------------------------------------
// 2D vectors (world and latent coordinates are both small dense vectors;
// latent points use LatentVec below since d_latent is configurable).

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double norm() const { return std::hypot(x, y); }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Latent coordinate, d_latent entries.
using LatentVec = std::vector<double>;

inline double latent_distance(const LatentVec& a, const LatentVec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Atomic propositions. Labels are interned ids into an AtomTable; label sets
// are bitmasks (at most 64 distinct atoms per toolkit instance).

using LabelId = int;

class LabelSet {
public:
    LabelSet() = default;
    explicit LabelSet(std::uint64_t bits) : bits_(bits) {}

    static LabelSet single(LabelId id) { return LabelSet(bit(id)); }

    bool contains(LabelId id) const { return (bits_ & bit(id)) != 0; }
    void insert(LabelId id) { bits_ |= bit(id); }
    void erase(LabelId id) { bits_ &= ~bit(id); }
    bool empty() const { return bits_ == 0; }
    int size() const { return __builtin_popcountll(bits_); }
    std::uint64_t bits() const { return bits_; }

    bool intersects(const LabelSet& o) const { return (bits_ & o.bits_) != 0; }
    bool subset_of(const LabelSet& o) const { return (bits_ & ~o.bits_) == 0; }

    bool operator==(const LabelSet& o) const { return bits_ == o.bits_; }
    bool operator!=(const LabelSet& o) const { return bits_ != o.bits_; }
    bool operator<(const LabelSet& o) const { return bits_ < o.bits_; }

    // ids in increasing order
    std::vector<LabelId> to_vector() const {
        std::vector<LabelId> out;
        for (int i = 0; i < 64; ++i)
            if (contains(i)) out.push_back(i);
        return out;
    }

private:
    static std::uint64_t bit(LabelId id) {
        if (id < 0 || id >= 64) throw std::out_of_range("label id out of range");
        return std::uint64_t{1} << id;
    }
    std::uint64_t bits_ = 0;
};

class AtomTable {
public:
    LabelId intern(const std::string& name) {
        auto it = ids_.find(name);
        if (it != ids_.end()) return it->second;
        const LabelId id = static_cast<LabelId>(names_.size());
        if (id >= 64) throw std::runtime_error("too many atomic propositions (max 64)");
        names_.push_back(name);
        ids_.emplace(name, id);
        return id;
    }

    // -1 when absent
    LabelId lookup(const std::string& name) const {
        auto it = ids_.find(name);
        return it == ids_.end() ? -1 : it->second;
    }

    const std::string& name(LabelId id) const { return names_.at(static_cast<std::size_t>(id)); }
    int size() const { return static_cast<int>(names_.size()); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, LabelId> ids_;
};

// ---------------------------------------------------------------------------
// Deterministic RNG. mt19937_64 has a standard-mandated sequence; doubles are
// derived by explicit bit manipulation so streams are identical across
// standard libraries (std::uniform_real_distribution is not portable).

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [lo, hi] inclusive
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    bool chance(double p) { return uniform() < p; }

    Vec2 unit_vec() {
        const double a = uniform(0.0, 2.0 * M_PI);
        return {std::cos(a), std::sin(a)};
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

// ---------------------------------------------------------------------------
// Error types shared across modules.

struct ParseError : std::runtime_error {
    std::size_t position;
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

struct EmptyAutomatonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DisconnectedDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyRegionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GenerationExhaustedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace lasso
