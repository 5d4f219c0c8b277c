#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace voxsplat {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
    Vec3 normalized() const {
        double n = norm();
        if (n == 0.0) throw std::invalid_argument("normalize: zero vector");
        return *this / n;
    }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

struct Mat3 {
    // row-major
    std::array<double, 9> a{1, 0, 0, 0, 1, 0, 0, 0, 1};

    static Mat3 identity() { return Mat3{}; }

    double& operator()(int r, int c) { return a[r * 3 + c]; }
    double operator()(int r, int c) const { return a[r * 3 + c]; }

    Vec3 operator*(const Vec3& v) const {
        return {a[0] * v.x + a[1] * v.y + a[2] * v.z, a[3] * v.x + a[4] * v.y + a[5] * v.z,
                a[6] * v.x + a[7] * v.y + a[8] * v.z};
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }

    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
        return r;
    }
};

// rotation matrix from a unit quaternion (w, x, y, z)
inline Mat3 quat_to_mat(double w, double x, double y, double z) {
    Mat3 R;
    R(0, 0) = 1 - 2 * (y * y + z * z);
    R(0, 1) = 2 * (x * y - w * z);
    R(0, 2) = 2 * (x * z + w * y);
    R(1, 0) = 2 * (x * y + w * z);
    R(1, 1) = 1 - 2 * (x * x + z * z);
    R(1, 2) = 2 * (y * z - w * x);
    R(2, 0) = 2 * (x * z - w * y);
    R(2, 1) = 2 * (y * z + w * x);
    R(2, 2) = 1 - 2 * (x * x + y * y);
    return R;
}

// dR/dw, dR/dx, dR/dy, dR/dz at a unit quaternion
inline std::array<Mat3, 4> quat_to_mat_jacobian(double w, double x, double y, double z) {
    std::array<Mat3, 4> J;
    // dR/dw
    J[0].a = {0, -2 * z, 2 * y, 2 * z, 0, -2 * x, -2 * y, 2 * x, 0};
    // dR/dx
    J[1].a = {0, 2 * y, 2 * z, 2 * y, -4 * x, -2 * w, 2 * z, 2 * w, -4 * x};
    // dR/dy
    J[2].a = {-4 * y, 2 * x, 2 * w, 2 * x, 0, 2 * z, -2 * w, 2 * z, -4 * y};
    // dR/dz
    J[3].a = {-4 * z, -2 * w, 2 * x, 2 * w, -4 * z, 2 * y, 2 * x, 2 * y, 0};
    return J;
}

struct Box {
    Vec3 lo;
    Vec3 hi;

    // closed box: faces included
    bool contains(const Vec3& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z &&
               p.z <= hi.z;
    }
};

// Pinhole camera with world-to-camera rigid transform.
struct Camera {
    double fx = 1.0, fy = 1.0, cx = 0.0, cy = 0.0;
    Mat3 R;  // world -> camera
    Vec3 t;
    int width = 0, height = 0;

    Vec3 world_to_cam(const Vec3& p) const { return R * p + t; }
    Vec3 cam_to_world(const Vec3& p) const { return R.transposed() * (p - t); }
    Vec3 center() const { return R.transposed() * (t * -1.0); }

    static Camera look_at(const Vec3& eye, const Vec3& target, const Vec3& up, double fx,
                          double fy, int width, int height) {
        Vec3 fwd = (target - eye).normalized();    // camera +z
        Vec3 right = fwd.cross(up).normalized();   // camera +x
        Vec3 down = fwd.cross(right).normalized(); // camera +y (image rows grow downward)
        Camera c;
        c.fx = fx;
        c.fy = fy;
        c.cx = width * 0.5;
        c.cy = height * 0.5;
        c.width = width;
        c.height = height;
        for (int j = 0; j < 3; ++j) {
            c.R(0, j) = right[j];
            c.R(1, j) = down[j];
            c.R(2, j) = fwd[j];
        }
        c.t = (c.R * eye) * -1.0;
        return c;
    }
};

}  // namespace voxsplat
