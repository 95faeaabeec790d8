#pragma once

#include <random>

namespace hypercut::geom {

// Point of the upper half-plane.
class PointH {
public:
    PointH(double x, double y);
    double x() const noexcept { return x_; }
    double y() const noexcept { return y_; }
    static PointH i() { return {0.0, 1.0}; }

private:
    double x_, y_;
};

bool operator==(const PointH& a, const PointH& b);

// Element of PSL2(R), stored normalized to determinant 1.
class MobiusReal {
public:
    MobiusReal(double a, double b, double c, double d);
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double c() const noexcept { return c_; }
    double d() const noexcept { return d_; }

    static MobiusReal identity() { return {1, 0, 0, 1}; }
    static MobiusReal translation(double t) { return {1, t, 0, 1}; }
    static MobiusReal diagonal(double r);      // diag(e^{r/2}, e^{-r/2})
    static MobiusReal rotation(double theta);  // element of K = PSO2 at angle theta
    // Sends i to z: z = x + iy is the image of i under [[sqrt y, x/sqrt y],[0, 1/sqrt y]].
    static MobiusReal frame(const PointH& z);

    MobiusReal operator*(const MobiusReal& o) const;
    MobiusReal inverse() const { return {d_, -b_, -c_, a_}; }
    bool approx_equal(const MobiusReal& o, double tol = 1e-12) const;

private:
    double a_, b_, c_, d_;
};

double distance(const PointH& z, const PointH& w);
// cosh of the distance, without the acosh; useful for comparisons.
double cosh_distance(const PointH& z, const PointH& w);

PointH mobius_apply(const MobiusReal& g, const PointH& z);

PointH sphere_point(const PointH& z, double r, double theta);

double ball_volume(double r);
double inverse_ball_radius(double area);

constexpr double max_distance = 700.0;

struct Rect {
    double x0, x1, y0, y1;
};

// Hyperbolic area dx dy / y^2 of a rectangle.
double rect_measure(const Rect& rect);

PointH sample_hyperbolic_measure(const Rect& rect, std::mt19937_64& rng);

} // namespace hypercut::geom
