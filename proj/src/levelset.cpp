#include "pareto/levelset.hpp"

#include "pareto/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace pareto {

Scalar FrontierEstimate::cell_diagonal() const {
    if (nx <= 0 || ny <= 0) return 0.0;
    const Scalar dx = (bounding_box.hi(0) - bounding_box.lo(0)) / nx;
    const Scalar dy = (bounding_box.hi(1) - bounding_box.lo(1)) / ny;
    return std::hypot(dx, dy);
}

PointSet FrontierEstimate::vertices() const {
    PointSet v(vertex_count(), 2);
    int r = 0;
    for (const auto& line : polylines)
        for (const auto& p : line) v.row(r++) = p.transpose();
    return v;
}

namespace {

// Edge key: orientation (0 horizontal, 1 vertical) + lower-left node index.
using EdgeKey = std::tuple<int, int, int>;

struct Crossing {
    Vector point;
    std::vector<EdgeKey> neighbors;
};

Vector bisect_edge(const ScoreFunction& f, Vector a, Scalar fa, Vector b, Scalar refine_tol,
                   int max_bisect) {
    Vector mid = 0.5 * (a + b);
    for (int it = 0; it < max_bisect; ++it) {
        mid = 0.5 * (a + b);
        const Scalar fm = f.value(mid);
        if (!std::isfinite(fm)) throw std::runtime_error("extract_zero_set: non-finite score value");
        if (std::abs(fm) <= refine_tol) return mid;
        if ((fm >= 0) == (fa >= 0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return mid;
}

}  // namespace

FrontierEstimate extract_zero_set(const ScoreFunction& f, const Box& box, int nx, int ny,
                                  Scalar refine_tol, int max_bisect) {
    require(box.dim() == 2, "extract_zero_set: requires M == 2");
    require(nx >= 8 && ny >= 8, "extract_zero_set: grid must be at least 8x8");
    require((box.hi.array() > box.lo.array()).all(), "extract_zero_set: degenerate box");

    FrontierEstimate est;
    est.bounding_box = box;
    est.nx = nx;
    est.ny = ny;

    const Scalar dx = (box.hi(0) - box.lo(0)) / nx;
    const Scalar dy = (box.hi(1) - box.lo(1)) / ny;
    const auto node = [&](int i, int j) {
        Vector p(2);
        p << box.lo(0) + i * dx, box.lo(1) + j * dy;
        return p;
    };

    Matrix values(nx + 1, ny + 1);
    for (int i = 0; i <= nx; ++i)
        for (int j = 0; j <= ny; ++j) {
            values(i, j) = f.value(node(i, j));
            if (!std::isfinite(values(i, j)))
                throw std::runtime_error("extract_zero_set: non-finite score value on grid");
        }
    // f == 0 on a node counts as the positive side, so the crossing lands on it.
    const auto positive = [&](int i, int j) { return values(i, j) >= 0; };

    std::map<EdgeKey, Crossing> crossings;
    const auto crossing_point = [&](const EdgeKey& key) -> Vector {
        const auto [orient, i, j] = key;
        const int i2 = orient == 0 ? i + 1 : i;
        const int j2 = orient == 0 ? j : j + 1;
        return bisect_edge(f, node(i, j), values(i, j), node(i2, j2), refine_tol, max_bisect);
    };
    const auto link = [&](const EdgeKey& a, const EdgeKey& b) {
        auto ita = crossings.find(a);
        if (ita == crossings.end()) ita = crossings.emplace(a, Crossing{crossing_point(a), {}}).first;
        auto itb = crossings.find(b);
        if (itb == crossings.end()) itb = crossings.emplace(b, Crossing{crossing_point(b), {}}).first;
        ita->second.neighbors.push_back(b);
        itb->second.neighbors.push_back(a);
    };

    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const int code = (positive(i, j) ? 1 : 0) | (positive(i + 1, j) ? 2 : 0) |
                             (positive(i + 1, j + 1) ? 4 : 0) | (positive(i, j + 1) ? 8 : 0);
            if (code == 0 || code == 15) continue;
            const EdgeKey bottom{0, i, j}, top{0, i, j + 1}, left{1, i, j}, right{1, i + 1, j};
            switch (code) {
                case 1: case 14: link(bottom, left); break;
                case 2: case 13: link(bottom, right); break;
                case 3: case 12: link(left, right); break;
                case 4: case 11: link(top, right); break;
                case 6: case 9: link(bottom, top); break;
                case 7: case 8: link(top, left); break;
                case 5: case 10: {
                    ++est.saddle_cells;
                    const Scalar center = f.value(0.5 * (node(i, j) + node(i + 1, j + 1)));
                    const bool center_pos = center >= 0;
                    const bool diag_bl = code == 5;  // positive corners on the b-l/t-r diagonal
                    if (diag_bl == center_pos) {
                        link(bottom, right);
                        link(top, left);
                    } else {
                        link(bottom, left);
                        link(top, right);
                    }
                    break;
                }
                default: break;
            }
        }
    }

    if (crossings.empty()) {
        est.diagnostic = "score function has constant sign over the box; no zero level set";
        return est;
    }

    // Stitch segments into polylines: open chains from degree-1 endpoints
    // first, then the remaining closed loops.
    std::map<EdgeKey, bool> visited;
    for (const auto& [key, c] : crossings) visited[key] = false;
    const auto walk = [&](const EdgeKey& start) {
        std::vector<Vector> line;
        EdgeKey cur = start;
        visited[cur] = true;
        line.push_back(crossings.at(cur).point);
        bool moved = true;
        while (moved) {
            moved = false;
            for (const auto& n : crossings.at(cur).neighbors) {
                if (!visited.at(n)) {
                    cur = n;
                    visited[cur] = true;
                    line.push_back(crossings.at(cur).point);
                    moved = true;
                    break;
                }
            }
        }
        if (line.size() >= 3) {
            for (const auto& n : crossings.at(cur).neighbors)
                if (n == start) {  // came back around: close the loop
                    line.push_back(crossings.at(start).point);
                    break;
                }
        }
        return line;
    };
    for (const auto& [key, c] : crossings)
        if (!visited.at(key) && c.neighbors.size() == 1) est.polylines.push_back(walk(key));
    for (const auto& [key, c] : crossings)
        if (!visited.at(key)) est.polylines.push_back(walk(key));
    est.component_count = static_cast<int>(est.polylines.size());
    return est;
}

bool connectivity(const FrontierEstimate& e) { return e.component_count == 1; }

std::vector<Vector> densify(const FrontierEstimate& e, Scalar step) {
    require(step > 0, "densify: step must be positive");
    std::vector<Vector> pts;
    for (const auto& line : e.polylines) {
        for (size_t i = 0; i < line.size(); ++i) {
            pts.push_back(line[i]);
            if (i + 1 < line.size()) {
                const Scalar len = (line[i + 1] - line[i]).norm();
                const int n = static_cast<int>(std::floor(len / step));
                for (int k = 1; k <= n; ++k)
                    pts.push_back(line[i] + (line[i + 1] - line[i]) * (k * step / len));
            }
        }
    }
    return pts;
}

namespace {

// One side of a Hausdorff comparison: sample points for the sup side, plus
// the polyline segments (when there are any) for exact inf-side distances.
struct HausdorffSide {
    std::vector<Vector> samples;
    std::vector<std::pair<Vector, Vector>> segments;
};

HausdorffSide as_side(const FrontierEstimate& e) {
    require(!e.empty(), "hausdorff: empty frontier estimate");
    const Scalar diag = e.cell_diagonal();
    HausdorffSide side;
    side.samples = densify(e, diag > 0 ? diag / 4.0 : 1e-3);
    for (const auto& line : e.polylines)
        for (size_t i = 0; i + 1 < line.size(); ++i) side.segments.emplace_back(line[i], line[i + 1]);
    return side;
}

HausdorffSide as_side(const PointSet& s) {
    require(s.rows() > 0, "hausdorff: empty point set");
    HausdorffSide side;
    side.samples.reserve(static_cast<size_t>(s.rows()));
    for (int i = 0; i < s.rows(); ++i) side.samples.push_back(s.row(i).transpose());
    return side;
}

Scalar point_segment_dist(const Vector& p, const Vector& a, const Vector& b) {
    const Vector d = b - a;
    const Scalar len2 = d.squaredNorm();
    if (len2 == 0) return (p - a).norm();
    const Scalar t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
    return (p - (a + t * d)).norm();
}

Scalar dist_to_side(const Vector& p, const HausdorffSide& side) {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    if (side.segments.empty()) {
        for (const auto& q : side.samples) best = std::min(best, (p - q).norm());
    } else {
        for (const auto& [a, b] : side.segments) best = std::min(best, point_segment_dist(p, a, b));
    }
    return best;
}

Scalar directed(const HausdorffSide& a, const HausdorffSide& b) {
    Scalar worst = 0.0;
    for (const auto& p : a.samples) worst = std::max(worst, dist_to_side(p, b));
    return worst;
}

Scalar hausdorff_sides(const HausdorffSide& a, const HausdorffSide& b) {
    require(!a.samples.empty() && !b.samples.empty(), "hausdorff: empty input");
    require(a.samples.front().size() == b.samples.front().size(), "hausdorff: dimension mismatch");
    return std::max(directed(a, b), directed(b, a));
}

}  // namespace

Scalar hausdorff(const FrontierEstimate& a, const FrontierEstimate& b) {
    return hausdorff_sides(as_side(a), as_side(b));
}
Scalar hausdorff(const FrontierEstimate& a, const PointSet& b) {
    return hausdorff_sides(as_side(a), as_side(b));
}
Scalar hausdorff(const PointSet& a, const FrontierEstimate& b) {
    return hausdorff_sides(as_side(a), as_side(b));
}
Scalar hausdorff(const PointSet& a, const PointSet& b) {
    return hausdorff_sides(as_side(a), as_side(b));
}

FrontierEstimate clip_to_box(const FrontierEstimate& e, const Box& box) {
    require(box.dim() == 2, "clip_to_box: requires M == 2");
    FrontierEstimate out;
    out.bounding_box = box;
    out.nx = e.nx;
    out.ny = e.ny;
    out.saddle_cells = e.saddle_cells;

    // Liang-Barsky parametric clip of one segment; false when fully outside.
    const auto clip_segment = [&](const Vector& p, const Vector& q, Vector* a, Vector* b) {
        Scalar t0 = 0.0, t1 = 1.0;
        const Vector d = q - p;
        for (int axis = 0; axis < 2; ++axis) {
            for (int side = 0; side < 2; ++side) {
                const Scalar bound = side == 0 ? box.lo(axis) : box.hi(axis);
                const Scalar denom = side == 0 ? -d(axis) : d(axis);
                const Scalar num = side == 0 ? p(axis) - bound : bound - p(axis);
                if (denom == 0) {
                    if (num < 0) return false;
                } else {
                    const Scalar t = num / denom;
                    if (denom < 0)
                        t0 = std::max(t0, t);
                    else
                        t1 = std::min(t1, t);
                }
            }
        }
        if (t0 > t1) return false;
        *a = p + t0 * d;
        *b = p + t1 * d;
        return true;
    };

    for (const auto& line : e.polylines) {
        std::vector<Vector> run;
        for (size_t i = 0; i + 1 < line.size(); ++i) {
            Vector a, b;
            if (!clip_segment(line[i], line[i + 1], &a, &b)) {
                if (run.size() >= 2) out.polylines.push_back(run);
                run.clear();
                continue;
            }
            if (run.empty() || (run.back() - a).norm() > 1e-12) {
                if (run.size() >= 2) out.polylines.push_back(run);
                run.clear();
                run.push_back(a);
            }
            run.push_back(b);
        }
        if (run.size() >= 2) out.polylines.push_back(run);
    }
    out.component_count = static_cast<int>(out.polylines.size());
    if (out.empty()) out.diagnostic = "no frontier inside the clip box";
    return out;
}

DepthResult dominance_violation_depth(const FrontierEstimate& e) {
    DepthResult res;
    std::vector<Vector> pts;
    for (const auto& line : e.polylines)
        for (const auto& p : line) pts.push_back(p);
    for (size_t i = 0; i < pts.size(); ++i) {
        for (size_t j = 0; j < pts.size(); ++j) {
            if (i == j) continue;
            if (dominates_strong(pts[i], pts[j])) {
                const Scalar slack = (pts[j] - pts[i]).minCoeff();
                if (slack > res.depth) {
                    res.depth = slack;
                    res.witness_p = pts[i];
                    res.witness_q = pts[j];
                }
            }
        }
    }
    return res;
}

}  // namespace pareto
