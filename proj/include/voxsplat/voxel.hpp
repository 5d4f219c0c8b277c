#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "voxsplat/geom.hpp"
#include "voxsplat/image.hpp"
#include "voxsplat/pointcloud.hpp"
#include "voxsplat/tensor.hpp"

namespace voxsplat {

using VoxelIndex = std::array<int, 3>;

struct VoxelGridSpec {
    Vec3 origin;
    double voxel_size = 1.0;
    std::array<int, 3> dims{1, 1, 1};

    VoxelGridSpec() = default;
    VoxelGridSpec(Vec3 o, double vs, std::array<int, 3> d) : origin(o), voxel_size(vs), dims(d) {
        if (vs <= 0.0) throw std::invalid_argument("grid: voxel_size must be > 0");
        for (int k : d)
            if (k < 1) throw std::invalid_argument("grid: dims must be >= 1");
    }

    std::size_t cell_count() const {
        return std::size_t(dims[0]) * dims[1] * dims[2];
    }

    bool in_bounds(const VoxelIndex& ix) const {
        return ix[0] >= 0 && ix[0] < dims[0] && ix[1] >= 0 && ix[1] < dims[1] && ix[2] >= 0 &&
               ix[2] < dims[2];
    }

    // x-major linearization; ties and exports follow this order everywhere
    std::size_t linearize(const VoxelIndex& ix) const {
        return (std::size_t(ix[0]) * dims[1] + ix[1]) * dims[2] + ix[2];
    }

    VoxelIndex delinearize(std::size_t lin) const {
        VoxelIndex ix;
        ix[2] = int(lin % dims[2]);
        lin /= dims[2];
        ix[1] = int(lin % dims[1]);
        ix[0] = int(lin / dims[1]);
        return ix;
    }

    // index of the voxel containing p, or nullopt-like flag via in_bounds
    VoxelIndex index_of(const Vec3& p) const {
        return {int(std::floor((p.x - origin.x) / voxel_size)),
                int(std::floor((p.y - origin.y) / voxel_size)),
                int(std::floor((p.z - origin.z) / voxel_size))};
    }

    Vec3 center_of(const VoxelIndex& ix) const {
        return {origin.x + (ix[0] + 0.5) * voxel_size, origin.y + (ix[1] + 0.5) * voxel_size,
                origin.z + (ix[2] + 0.5) * voxel_size};
    }

    Box bounds() const {
        return {origin, {origin.x + dims[0] * voxel_size, origin.y + dims[1] * voxel_size,
                         origin.z + dims[2] * voxel_size}};
    }

    bool same_as(const VoxelGridSpec& o) const {
        return origin.x == o.origin.x && origin.y == o.origin.y && origin.z == o.origin.z &&
               voxel_size == o.voxel_size && dims == o.dims;
    }
};

enum class Modality { Image, Lidar, Fused };

struct VoxelEntry {
    VoxelIndex index;
    Tensor feature;  // [C]
};

// Occupied voxels of one modality with C-channel features, sorted by
// linearized index. Zero feature vectors are represented by absence.
struct SparseVoxelTensor {
    VoxelGridSpec spec;
    Modality modality = Modality::Fused;
    std::vector<VoxelEntry> entries;

    std::size_t channels() const { return entries.empty() ? 0 : entries.front().feature.size(); }

    void sort_entries() {
        std::sort(entries.begin(), entries.end(), [this](const VoxelEntry& a, const VoxelEntry& b) {
            return spec.linearize(a.index) < spec.linearize(b.index);
        });
    }
};

struct QuerySet {
    std::vector<Vec3> centers;
    Tensor features;  // [N x C]
    std::vector<VoxelIndex> source_indices;

    std::size_t size() const { return centers.size(); }
};

// Lidar voxel featurization: [mean dx, mean dy, mean dz (offsets from the
// voxel center, normalized to [-0.5, 0.5]), mean intensity, log(1+count)],
// zero-padded to `channels`. Out-of-bounds points are skipped.
inline SparseVoxelTensor voxelize(const PointCloud& pc, const VoxelGridSpec& spec,
                                  std::size_t channels = 16) {
    if (channels < 5) throw std::invalid_argument("voxelize: need at least 5 channels");
    struct Acc {
        Vec3 off_sum;
        double intensity_sum = 0.0;
        std::size_t n = 0;
    };
    std::map<std::size_t, Acc> cells;
    for (const Point& pt : pc.points) {
        VoxelIndex ix = spec.index_of(pt.p);
        if (!spec.in_bounds(ix)) continue;
        Acc& a = cells[spec.linearize(ix)];
        Vec3 center = spec.center_of(ix);
        a.off_sum += (pt.p - center) / spec.voxel_size;
        a.intensity_sum += pt.intensity;
        a.n += 1;
    }
    SparseVoxelTensor out;
    out.spec = spec;
    out.modality = Modality::Lidar;
    for (const auto& [lin, acc] : cells) {
        VoxelEntry e;
        e.index = spec.delinearize(lin);
        e.feature = Tensor({channels});
        double inv = 1.0 / double(acc.n);
        e.feature[0] = acc.off_sum.x * inv;
        e.feature[1] = acc.off_sum.y * inv;
        e.feature[2] = acc.off_sum.z * inv;
        e.feature[3] = acc.intensity_sum * inv;
        e.feature[4] = std::log(1.0 + double(acc.n));
        out.entries.push_back(std::move(e));
    }
    return out;  // map iteration is already sorted by linearized index
}

// Image voxel featurization: lift every finite-depth pixel to a world point
// and average per voxel: [mean R, mean G, mean B, log(1+hits), mean world
// view-ray z], zero-padded to `channels`. Multi-view hits are pooled.
inline SparseVoxelTensor unproject_image_features(const std::vector<Image>& images,
                                                  const std::vector<DepthMap>& depths,
                                                  const std::vector<Camera>& cams,
                                                  const VoxelGridSpec& spec,
                                                  std::size_t channels = 16) {
    if (images.size() != depths.size() || images.size() != cams.size())
        throw std::invalid_argument("unproject: images/depths/cams length mismatch");
    if (channels < 5) throw std::invalid_argument("unproject: need at least 5 channels");
    struct Acc {
        double rgb[3] = {0, 0, 0};
        double ray_z_sum = 0.0;
        std::size_t n = 0;
    };
    std::map<std::size_t, Acc> cells;
    for (std::size_t v = 0; v < images.size(); ++v) {
        const Image& img = images[v];
        const DepthMap& dep = depths[v];
        const Camera& cam = cams[v];
        if (img.width != dep.width || img.height != dep.height)
            throw std::invalid_argument("unproject: image/depth resolution mismatch");
        Mat3 Rt = cam.R.transposed();
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) {
                double z = dep.at(x, y);
                if (!std::isfinite(z) || z <= 0.0) continue;
                Vec3 dir_cam{(x + 0.5 - cam.cx) / cam.fx, (y + 0.5 - cam.cy) / cam.fy, 1.0};
                Vec3 p_world = cam.cam_to_world(dir_cam * z);
                VoxelIndex ix = spec.index_of(p_world);
                if (!spec.in_bounds(ix)) continue;
                Vec3 ray_world = (Rt * dir_cam).normalized();
                Acc& a = cells[spec.linearize(ix)];
                for (int c = 0; c < 3; ++c) a.rgb[c] += img.at(x, y, c);
                a.ray_z_sum += ray_world.z;
                a.n += 1;
            }
    }
    SparseVoxelTensor out;
    out.spec = spec;
    out.modality = Modality::Image;
    for (const auto& [lin, acc] : cells) {
        VoxelEntry e;
        e.index = spec.delinearize(lin);
        e.feature = Tensor({channels});
        double inv = 1.0 / double(acc.n);
        e.feature[0] = acc.rgb[0] * inv;
        e.feature[1] = acc.rgb[1] * inv;
        e.feature[2] = acc.rgb[2] * inv;
        e.feature[3] = std::log(1.0 + double(acc.n));
        e.feature[4] = acc.ray_z_sum * inv;
        out.entries.push_back(std::move(e));
    }
    return out;
}

// One query per occupied entry, in entry order.
inline QuerySet nonzero_queries(const SparseVoxelTensor& t) {
    QuerySet q;
    std::size_t C = t.channels();
    q.features = Tensor({t.entries.size(), C == 0 ? 1 : C});
    if (t.entries.empty()) {
        q.features = Tensor({0, 1});
        return q;
    }
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
        const VoxelEntry& e = t.entries[i];
        q.centers.push_back(t.spec.center_of(e.index));
        q.source_indices.push_back(e.index);
        for (std::size_t c = 0; c < C; ++c) q.features.at(i, c) = e.feature[c];
    }
    return q;
}

}  // namespace voxsplat
