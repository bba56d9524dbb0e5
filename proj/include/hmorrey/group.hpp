#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "hmorrey/plan.hpp"

namespace hmorrey {

inline constexpr std::size_t kMaxDim = 6;

// Coordinates of a group element in the global chart.
class Point {
public:
    Point() = default;
    explicit Point(std::size_t n);
    Point(std::initializer_list<double> coords);
    explicit Point(const std::vector<double>& coords);

    std::size_t size() const noexcept { return n_; }
    double& operator[](std::size_t i) noexcept { return c_[i]; }
    double operator[](std::size_t i) const noexcept { return c_[i]; }
    const double* begin() const noexcept { return c_.data(); }
    const double* end() const noexcept { return c_.data() + n_; }
    std::vector<double> to_vector() const { return {begin(), end()}; }
    bool is_origin() const noexcept;

    friend bool operator==(const Point& a, const Point& b) noexcept {
        return a.n_ == b.n_ && a.c_ == b.c_;
    }

private:
    std::array<double, kMaxDim> c_{};
    std::size_t n_ = 0;
};

enum class Law { abelian, heisenberg1 };
enum class Norm { euclidean, max_aniso, koranyi };

// Nodes on the unit quasi-sphere with weights summing to |sigma|.
struct SphereRule {
    std::vector<Point> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

struct Integral {
    double value = 0.0;
    double error = 0.0;
};

class GroupDescriptor {
public:
    GroupDescriptor(Law law, Norm norm, std::vector<double> weights);

    static GroupDescriptor abelian_iso(std::size_t n);
    static GroupDescriptor abelian_aniso(std::vector<double> weights);
    static GroupDescriptor heisenberg1(Norm norm = Norm::koranyi);
    // "abelian:iso:n=2", "abelian:aniso:nu=1,2", "heis1", "heis1:norm=max"
    static GroupDescriptor parse(const std::string& spec);

    std::size_t n() const noexcept { return weights_.size(); }
    const std::vector<double>& weights() const noexcept { return weights_; }
    Law law() const noexcept { return law_; }
    Norm norm() const noexcept { return norm_; }
    double Q() const noexcept { return Q_; }
    double sigma() const noexcept { return sigma_; }
    double vol1() const noexcept { return vol1_; }
    const std::string& spec() const noexcept { return spec_; }
    std::string law_name() const;
    std::string norm_name() const;

    Point origin() const { return Point(n()); }
    void check(const Point& x) const;

    Point multiply(const Point& x, const Point& y) const;
    Point inverse(const Point& x) const;
    Point dilate(double lambda, const Point& x) const;
    double quasi_norm(const Point& x) const;

    // |x y^{-1}|, the argument of every convolution kernel.
    double kernel_distance(const Point& x, const Point& y) const;

    SphereRule sphere_rule(int order) const;

private:
    Law law_;
    Norm norm_;
    std::vector<double> weights_;
    std::vector<double> inv_weights_;
    double Q_ = 0.0;
    double vol1_ = 0.0;
    double sigma_ = 0.0;
    std::string spec_;
    bool unit_weights_ = true;
};

struct MeasureEstimate {
    double value = 0.0;
    double std_error = 0.0;
    bool exact = false;
    std::size_t samples = 0;
};

// |sigma|; exact for euclidean and max-aniso, Monte-Carlo for koranyi.
MeasureEstimate sphere_measure(const GroupDescriptor& g, const QuadraturePlan& plan);

// Monte-Carlo estimate of the unit-ball volume (seeded, deterministic).
MeasureEstimate unit_ball_volume_mc(const GroupDescriptor& g, std::size_t samples, std::uint64_t seed);

// |sigma| * int_{r_lo}^{r_hi} h(r) r^{Q-1} dr; r_hi may be infinity.
Integral radial_integrate(const GroupDescriptor& g, const std::function<double(double)>& h,
                          double r_lo, double r_hi, const QuadraturePlan& plan,
                          std::span<const double> breaks = {});

}  // namespace hmorrey
