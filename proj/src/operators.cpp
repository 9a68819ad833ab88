#include "curvlab/operators.hpp"

namespace curvlab {

namespace {

// Global node numbering used only during assembly: interior DOFs first
// (pole = 0, rings 1..ns-1), then the boundary ring.
struct NodeIndexer {
  const PolarGrid& g;
  int operator()(int i, int j) const {
    const int jj = (j % g.nt() + g.nt()) % g.nt();
    if (i == 0) return 0;
    if (i < g.ns()) return g.interior_index(i, jj);
    return g.num_interior() + jj;
  }
};

}  // namespace

LaplaceBeltrami laplace_beltrami(GridPtr grid) {
  const PolarGrid& g = *grid;
  const int ns = g.ns(), nt = g.nt();
  const int ni = g.num_interior(), nb = g.num_boundary();
  const double hs = g.hs(), ht = g.ht();
  const NodeIndexer idx{g};
  const Curvature kappa = g.domain().surface.curvature;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(ns) * nt * 16);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(ni + nb);

  // 2x2 Gauss points on the reference cell [0,1]^2.
  const double ga = 0.5 - 0.5 / std::sqrt(3.0), gb = 0.5 + 0.5 / std::sqrt(3.0);
  const double gp[2] = {ga, gb};

  for (int i = 0; i < ns; ++i) {
    for (int j = 0; j < nt; ++j) {
      const int nodes[4] = {idx(i, j), idx(i, j + 1), idx(i + 1, j), idx(i + 1, j + 1)};
      double K[4][4] = {};
      double M[4] = {};
      for (int qa = 0; qa < 2; ++qa) {
        for (int qb = 0; qb < 2; ++qb) {
          const double xi = gp[qa], eta = gp[qb];
          const double s = (i + xi) * hs;
          const double t = (j + eta) * ht;
          const double rho = g.domain().profile.value(t);
          const double rho1 = g.domain().profile.deriv(t);
          const double r = s * rho;
          const double th = warp(kappa, r);
          // Inverse metric of ds^2-block in the mapped coordinates, times the
          // area density rho*Theta.
          const double sqrtg = rho * th;
          const double gss = (s * s * rho1 * rho1 + th * th) / (rho * rho * th * th) * sqrtg;
          const double gst = -s * rho1 / (rho * th * th) * sqrtg;
          const double gtt = sqrtg / (th * th);

          // Bilinear shape functions on the corners (i,j),(i,j+1),(i+1,j),(i+1,j+1).
          const double N[4] = {(1 - xi) * (1 - eta), (1 - xi) * eta, xi * (1 - eta), xi * eta};
          const double Ns[4] = {-(1 - eta) / hs, -eta / hs, (1 - eta) / hs, eta / hs};
          const double Nt[4] = {-(1 - xi) / ht, (1 - xi) / ht, -xi / ht, xi / ht};

          const double wq = 0.25 * hs * ht;
          for (int a = 0; a < 4; ++a) {
            M[a] += wq * N[a] * sqrtg;
            for (int b = 0; b < 4; ++b)
              K[a][b] += wq * (gss * Ns[a] * Ns[b] + gst * (Ns[a] * Nt[b] + Nt[a] * Ns[b]) +
                               gtt * Nt[a] * Nt[b]);
          }
        }
      }
      for (int a = 0; a < 4; ++a) {
        w[nodes[a]] += M[a];
        for (int b = 0; b < 4; ++b) trip.emplace_back(nodes[a], nodes[b], K[a][b]);
      }
    }
  }

  SparseMatrix full(ni + nb, ni + nb);
  full.setFromTriplets(trip.begin(), trip.end());
  full.makeCompressed();

  LaplaceBeltrami op;
  op.grid = grid;
  op.interior = full.topLeftCorner(ni, ni);
  op.interior_boundary = full.topRightCorner(ni, nb);
  op.weights = w.head(ni);
  op.boundary_weights = w.tail(nb);
  op.interior.makeCompressed();
  op.interior_boundary.makeCompressed();
  return op;
}

Eigen::VectorXd LaplaceBeltrami::neg_laplacian(const ScalarField& u) const {
  const Eigen::VectorXd xi = interior_vector(u);
  const Eigen::VectorXd xb = boundary_vector(u);
  return (interior * xi + interior_boundary * xb).cwiseQuotient(weights);
}

}  // namespace curvlab
