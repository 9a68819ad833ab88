#include "curvlab/nodal.hpp"

#include <map>

namespace curvlab {

namespace {

// Edge key: (horizontal ? 0 : 1, i, j). Horizontal edge (i,j)-(i,j+1) runs in
// the t direction; vertical edge (i,j)-(i+1,j) in the s direction.
using EdgeKey = std::tuple<int, int, int>;

struct Segment {
  EdgeKey a, b;
};

}  // namespace

NodalSet trace_nodal_set(const ScalarField& field, double scale_hint) {
  const PolarGrid& g = *field.grid;
  const int ns = g.ns(), nt = g.nt();
  const Eigen::MatrixXd& v = field.values;
  const double sup = field.max_abs();
  const double scale = scale_hint > 0 ? scale_hint : sup;
  if (sup < 1e-10 * std::max(scale, 1e-300))
    throw Error(ErrorCode::IdenticallyZero, "field vanishes identically at grid resolution");

  NodalSet out;

  // Boundary zeros: sign changes along the s = 1 ring.
  {
    int count = 0;
    for (int j = 0; j < nt; ++j) {
      const double a = v(ns, j), b = v(ns, (j + 1) % nt);
      if (a == 0.0 || a * b < 0.0) ++count;
    }
    out.boundary_zero_count = count;
  }

  // Crossing points per edge.
  std::map<EdgeKey, std::pair<double, double>> cut;  // edge -> (s, t)
  auto edge_point = [&](int horiz, int i, int j) -> bool {
    const int i2 = horiz ? i : i + 1;
    const int j2 = horiz ? (j + 1) % nt : j;
    const double a = v(i, j), b = v(i2, j2);
    if ((a > 0 && b > 0) || (a < 0 && b < 0)) return false;
    if (a == 0 && b == 0) return false;
    const double f = a == b ? 0.5 : a / (a - b);
    const double s = horiz ? g.s(i) : g.s(i) + f * g.hs();
    const double t = horiz ? g.t(j) + f * g.ht() : g.t(j);
    cut[{horiz, i, j}] = {s, t};
    return true;
  };

  std::vector<Segment> segments;
  for (int i = 0; i < ns; ++i) {
    for (int j = 0; j < nt; ++j) {
      const int j1 = (j + 1) % nt;
      const double c[4] = {v(i, j), v(i, j1), v(i + 1, j1), v(i + 1, j)};
      int idx = 0;
      for (int k = 0; k < 4; ++k)
        if (c[k] > 0) idx |= 1 << k;
      if (idx == 0 || idx == 15) continue;
      const EdgeKey top{0, i, j}, right{1, i, j1}, bottom{0, i + 1, j}, left{1, i, j};
      auto have = [&](const EdgeKey& e) {
        return edge_point(std::get<0>(e), std::get<1>(e), std::get<2>(e));
      };
      std::vector<EdgeKey> hits;
      for (const EdgeKey& e : {top, right, bottom, left})
        if (have(e)) hits.push_back(e);
      if (hits.size() == 2) {
        segments.push_back({hits[0], hits[1]});
      } else if (hits.size() == 4) {
        // Ambiguous cell: the nodal set self-intersects here at grid
        // resolution. Record the crossing and connect through the center.
        out.crossings.push_back({g.s(i) + 0.5 * g.hs(), g.t(j) + 0.5 * g.ht()});
        const double mean = 0.25 * (c[0] + c[1] + c[2] + c[3]);
        if (mean > 0 ? (c[0] > 0) : (c[0] <= 0)) {
          segments.push_back({top, right});
          segments.push_back({bottom, left});
        } else {
          segments.push_back({top, left});
          segments.push_back({bottom, right});
        }
      }
    }
  }

  // Stitch segments into polylines by walking shared edges.
  std::multimap<EdgeKey, size_t> by_edge;
  for (size_t k = 0; k < segments.size(); ++k) {
    by_edge.insert({segments[k].a, k});
    by_edge.insert({segments[k].b, k});
  }
  std::vector<bool> used(segments.size(), false);
  for (size_t k0 = 0; k0 < segments.size(); ++k0) {
    if (used[k0]) continue;
    // Walk both directions from segment k0.
    std::vector<EdgeKey> chain{segments[k0].a, segments[k0].b};
    used[k0] = true;
    for (int dir = 0; dir < 2; ++dir) {
      for (;;) {
        const EdgeKey tail = dir == 0 ? chain.back() : chain.front();
        size_t next = segments.size();
        auto [lo, hi] = by_edge.equal_range(tail);
        for (auto it = lo; it != hi; ++it)
          if (!used[it->second]) next = it->second;
        if (next == segments.size()) break;
        used[next] = true;
        const EdgeKey other = segments[next].a == tail ? segments[next].b : segments[next].a;
        if (dir == 0)
          chain.push_back(other);
        else
          chain.insert(chain.begin(), other);
      }
    }
    std::vector<std::pair<double, double>> pl_st;
    std::vector<ChartPoint> pl;
    for (const EdgeKey& e : chain) {
      const auto it = cut.find(e);
      if (it == cut.end()) continue;
      pl_st.push_back(it->second);
      pl.push_back(g.point_at(it->second.first, it->second.second));
    }
    if (pl_st.size() >= 2) {
      out.polylines_st.push_back(std::move(pl_st));
      out.polylines.push_back(std::move(pl));
    }
  }
  return out;
}

}  // namespace curvlab
